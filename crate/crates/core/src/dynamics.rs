//! Flows on the cone: the gradient system `ȧ = -a`, the Hamiltonian system in
//! `(P, Q) = (β, η)`, first integrals, and the Lax pair verifier.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::lie::AlgebraName;
use crate::linalg::{commutator, pairing, PairingConvention, SquareMatrix};
use crate::thermo::{cone_generator, phi_derivative_fd, ConeElement, EtaConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowMethod {
    Exact,
    Rk4,
}

impl FlowMethod {
    pub fn label(self) -> &'static str {
        match self {
            FlowMethod::Exact => "exact",
            FlowMethod::Rk4 => "rk4",
        }
    }
}

/// One state of a flow on the cone: `P = a·G` and `Q`, its conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample {
    pub t: f64,
    pub a: f64,
    pub p: SquareMatrix,
    pub q: SquareMatrix,
}

impl FlowSample {
    /// `H = -⟨P, Q⟩` under the 1/2 pairing.
    pub fn hamiltonian(&self) -> f64 {
        -pairing(&self.p, &self.q, PairingConvention::Half).expect("P and Q share a dimension")
    }

    /// Coordinate of `Q` along the cone generator.
    pub fn q_coordinate(&self) -> f64 {
        self.q.get(1, 0)
    }

    fn on_generator(t: f64, p: f64, q: f64, generator: &SquareMatrix) -> Self {
        Self {
            t,
            a: p,
            p: generator.scale(p),
            q: generator.scale(q),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<FlowSample>,
    pub method: FlowMethod,
    pub algebra: AlgebraName,
}

impl Trajectory {
    fn new(samples: Vec<FlowSample>, method: FlowMethod, algebra: AlgebraName) -> Result<Self> {
        if samples.is_empty() {
            return domain("empty trajectory");
        }
        if samples.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::Numeric("trajectory times must increase".into()));
        }
        if samples
            .iter()
            .any(|s| !(s.a.is_finite() && s.a > 0.0 && s.p.is_finite() && s.q.is_finite()))
        {
            return Err(Error::Numeric("trajectory left the cone".into()));
        }
        Ok(Self {
            samples,
            method,
            algebra,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn a_values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.a).collect()
    }

    pub fn first(&self) -> &FlowSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &FlowSample {
        self.samples.last().expect("trajectories are nonempty")
    }
}

/// `β̇ = -β`.
pub fn gradient_field(beta: &ConeElement) -> SquareMatrix {
    -beta.matrix()
}

/// Relative gap between `-β` and `-a²·∂Φ/∂β`, the latter built from a
/// finite-difference `dΦ/da` through `∂a/∂β = G` (1/2 pairing).
pub fn gradient_consistency(beta: &ConeElement) -> f64 {
    let a = beta.a();
    let chain = beta.generator().scale(-a * a * phi_derivative_fd(a));
    let field = gradient_field(beta);
    field.distance(&chain) / field.frobenius_norm()
}

/// Step count and step size covering `[0, t_end]` with steps no longer than `dt`.
fn grid(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return domain(format!("t_end must be non-negative, got {t_end}"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return domain(format!("dt must be positive, got {dt}"));
    }
    if t_end == 0.0 {
        return Ok((0, dt));
    }
    if dt > t_end {
        return domain(format!("dt = {dt} exceeds t_end = {t_end}"));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    Ok((steps, t_end / steps as f64))
}

fn rk4_scalar(y: f64, h: f64, f: impl Fn(f64) -> f64) -> f64 {
    let k1 = f(y);
    let k2 = f(y + 0.5 * h * k1);
    let k3 = f(y + 0.5 * h * k2);
    let k4 = f(y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

fn rk4_matrix(y: &SquareMatrix, h: f64, f: impl Fn(&SquareMatrix) -> SquareMatrix) -> SquareMatrix {
    let k1 = f(y);
    let k2 = f(&(y + &k1.scale(0.5 * h)));
    let k3 = f(&(y + &k2.scale(0.5 * h)));
    let k4 = f(&(y + &k3.scale(h)));
    let incr = &(&(&k1 + &k2.scale(2.0)) + &k3.scale(2.0)) + &k4;
    y + &incr.scale(h / 6.0)
}

/// Scalar gradient flow `ȧ = -a` on the so(2) cone.
pub fn integrate_gradient(a0: f64, t_end: f64, dt: f64, method: FlowMethod) -> Result<Trajectory> {
    integrate_gradient_on(AlgebraName::So2, a0, t_end, dt, method)
}

/// Scalar gradient flow on the given cone; `P = β(t)`, `Q = η(t) = G/a(t)`.
pub fn integrate_gradient_on(
    algebra: AlgebraName,
    a0: f64,
    t_end: f64,
    dt: f64,
    method: FlowMethod,
) -> Result<Trajectory> {
    let generator = ConeElement::new(a0, algebra)?.generator();
    let (steps, h) = grid(t_end, dt)?;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut a = a0;
    for k in 0..=steps {
        let t = if k == steps { t_end } else { k as f64 * h };
        if k > 0 {
            a = match method {
                FlowMethod::Exact => a0 * (-t).exp(),
                FlowMethod::Rk4 => rk4_scalar(a, h, |y| -y),
            };
        }
        samples.push(FlowSample::on_generator(t, a, 1.0 / a, &generator));
    }
    Trajectory::new(samples, method, algebra)
}

/// RK4 on the matrix equation `β̇ = -β`; `a(t)` is read off entry `(1, 0)`.
pub fn integrate_gradient_matrix(beta0: &ConeElement, t_end: f64, dt: f64) -> Result<Trajectory> {
    let generator = beta0.generator();
    let (steps, h) = grid(t_end, dt)?;
    let mut beta = beta0.matrix().clone();
    let mut samples = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = if k == steps { t_end } else { k as f64 * h };
        if k > 0 {
            beta = rk4_matrix(&beta, h, |b| -b);
        }
        let a = beta.get(1, 0);
        samples.push(FlowSample {
            t,
            a,
            p: beta.clone(),
            q: generator.scale(1.0 / a),
        });
    }
    Trajectory::new(samples, FlowMethod::Rk4, beta0.algebra())
}

/// Largest `|a_rk4(t) − a0·e^{-t}|` over the trajectory.
pub fn max_error_vs_exact(traj: &Trajectory) -> f64 {
    let a0 = traj.first().a;
    traj.samples
        .iter()
        .map(|s| (s.a - a0 * (-s.t).exp()).abs())
        .fold(0.0, f64::max)
}

/// RK4 on `Ṗ = -P`, `Q̇ = Q` from `(β, η)`. Returns the trajectory and the
/// largest `|H(t) − H(0)|`.
pub fn hamiltonian_flow(beta0: &ConeElement, conv: EtaConvention, t_end: f64, dt: f64) -> Result<(Trajectory, f64)> {
    if conv != EtaConvention::GradPhi {
        return domain("the canonical equations Ṗ = -P, Q̇ = Q hold only for η = β/⟨β,β⟩");
    }
    let (steps, h) = grid(t_end, dt)?;
    let mut p = beta0.matrix().clone();
    let mut q = conv.eta_of(&p)?;
    let mut samples = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = if k == steps { t_end } else { k as f64 * h };
        if k > 0 {
            p = rk4_matrix(&p, h, |x| -x);
            q = rk4_matrix(&q, h, |x| x.clone());
        }
        samples.push(FlowSample {
            t,
            a: p.get(1, 0),
            p: p.clone(),
            q: q.clone(),
        });
    }
    let h0 = samples[0].hamiltonian();
    let drift = samples.iter().map(|s| (s.hamiltonian() - h0).abs()).fold(0.0, f64::max);
    Ok((Trajectory::new(samples, FlowMethod::Rk4, beta0.algebra())?, drift))
}

/// A candidate first integral, as a function of the flow state.
pub struct FirstIntegral {
    pub label: String,
    pub f: Box<dyn Fn(&FlowSample) -> f64 + Send + Sync>,
}

impl FirstIntegral {
    pub fn new(label: impl Into<String>, f: impl Fn(&FlowSample) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            f: Box::new(f),
        }
    }

    /// `H = -⟨P, Q⟩`.
    pub fn hamiltonian() -> Self {
        Self::new("H", FlowSample::hamiltonian)
    }
}

impl std::fmt::Debug for FirstIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FirstIntegral")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTrace {
    pub label: String,
    pub values: Vec<f64>,
    /// Peak-to-peak variation along the trajectory.
    pub variation: f64,
    pub conserved: bool,
    /// Smallest gradient norm in canonical coordinates along the trajectory.
    pub min_gradient: f64,
    pub independent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrabilityReport {
    pub n_dof: usize,
    pub integrals: Vec<IntegralTrace>,
    /// `involution_residuals[i][j] = max_t |{F_i, F_j}|`.
    pub involution_residuals: Vec<Vec<f64>>,
    pub independence_ok: bool,
    pub verdict: String,
}

pub const COMPLETELY_INTEGRABLE: &str = "completely integrable";
pub const NOT_ESTABLISHED: &str = "not established";

const INDEPENDENCE_TOL: f64 = 1e-8;
const INVOLUTION_TOL: f64 = 1e-8;
const CANONICAL_FD_STEP: f64 = 1e-5;

/// `(∂F/∂p, ∂F/∂q)` at a sample, with `P = p·G`, `Q = q·G`.
fn canonical_gradient(f: &FirstIntegral, s: &FlowSample, generator: &SquareMatrix) -> (f64, f64) {
    let (p, q) = (s.a, s.q_coordinate());
    let eval = |p: f64, q: f64| (f.f)(&FlowSample::on_generator(s.t, p, q, generator));
    let hp = CANONICAL_FD_STEP * p.abs().max(1.0);
    let hq = CANONICAL_FD_STEP * q.abs().max(1.0);
    let dp = (eval(p + hp, q) - eval(p - hp, q)) / (2.0 * hp);
    let dq = (eval(p, q + hq) - eval(p, q - hq)) / (2.0 * hq);
    (dp, dq)
}

/// Evaluates each candidate along the trajectory. One degree of freedom:
/// a single conserved integral with nonvanishing gradient suffices.
pub fn integrability_report(traj: &Trajectory, integrals: &[FirstIntegral]) -> Result<IntegrabilityReport> {
    if traj.is_empty() {
        return domain("empty trajectory");
    }
    let generator = cone_generator(traj.algebra)?;
    let n_dof = 1;
    let grads: Vec<Vec<(f64, f64)>> = integrals
        .iter()
        .map(|f| {
            traj.samples
                .iter()
                .map(|s| canonical_gradient(f, s, &generator))
                .collect()
        })
        .collect();
    let mut traces = Vec::with_capacity(integrals.len());
    for (f, g) in integrals.iter().zip(&grads) {
        let values: Vec<f64> = traj.samples.iter().map(|s| (f.f)(s)).collect();
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let variation = hi - lo;
        let min_gradient = g.iter().map(|(dp, dq)| dp.hypot(*dq)).fold(f64::INFINITY, f64::min);
        traces.push(IntegralTrace {
            label: f.label.clone(),
            values,
            variation,
            conserved: variation < 1e-9 * (1.0 + mean.abs()),
            min_gradient,
            independent: min_gradient > INDEPENDENCE_TOL,
        });
    }
    // canonical bracket {F, G} = ∂F/∂P ∂G/∂Q − ∂F/∂Q ∂G/∂P
    let n = integrals.len();
    let mut involution_residuals = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            involution_residuals[i][j] = grads[i]
                .iter()
                .zip(&grads[j])
                .map(|((pi, qi), (pj, qj))| (pi * qj - qi * pj).abs())
                .fold(0.0, f64::max);
        }
    }
    let mut chosen: Vec<usize> = Vec::new();
    for (i, tr) in traces.iter().enumerate() {
        if tr.conserved && tr.independent && chosen.iter().all(|&j| involution_residuals[i][j] < INVOLUTION_TOL) {
            chosen.push(i);
        }
    }
    let independence_ok = traces.iter().any(|t| t.conserved && t.independent);
    let verdict = if chosen.len() >= n_dof {
        COMPLETELY_INTEGRABLE
    } else {
        NOT_ESTABLISHED
    };
    Ok(IntegrabilityReport {
        n_dof,
        integrals: traces,
        involution_residuals,
        independence_ok,
        verdict: verdict.into(),
    })
}

/// One reading of the scalar Hamiltonian with `P = a`, `Q = -a` substituted
/// into `Ṗ = ∂H/∂Q`, `Q̇ = -∂H/∂P` along `ȧ = -a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalCheck {
    pub reading: &'static str,
    pub h: f64,
    pub p_dot: f64,
    pub dh_dq: f64,
    pub q_dot: f64,
    pub minus_dh_dp: f64,
}

impl CanonicalCheck {
    pub fn residual(&self) -> f64 {
        (self.p_dot - self.dh_dq)
            .abs()
            .max((self.q_dot - self.minus_dh_dp).abs())
    }
}

/// Both sides of the canonical equations for the scalar readings
/// `H = ½P²`, `H = ½Q²` and `H = -½PQ`, each equal to `½a²` on `P = a, Q = -a`.
pub fn scalar_hamiltonian_diagnostic(a: f64) -> Result<Vec<CanonicalCheck>> {
    if !(a.is_finite() && a > 0.0) {
        return domain("a must be positive");
    }
    let (p, q) = (a, -a);
    let (p_dot, q_dot) = (-a, a);
    Ok(vec![
        CanonicalCheck {
            reading: "H = P^2/2",
            h: 0.5 * p * p,
            p_dot,
            dh_dq: 0.0,
            q_dot,
            minus_dh_dp: -p,
        },
        CanonicalCheck {
            reading: "H = Q^2/2",
            h: 0.5 * q * q,
            p_dot,
            dh_dq: q,
            q_dot,
            minus_dh_dp: 0.0,
        },
        CanonicalCheck {
            reading: "H = -PQ/2",
            h: -0.5 * p * q,
            p_dot,
            dh_dq: -0.5 * p,
            q_dot,
            minus_dh_dp: 0.5 * q,
        },
    ])
}

/// The two printed forms of `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaxVariant {
    /// `L = [[-1/2, -a], [a, -1/2]]`.
    Rotational,
    /// `L = [[1/2, a], [a, 1/2]]`.
    Symmetric,
}

impl LaxVariant {
    pub const ALL: [LaxVariant; 2] = [LaxVariant::Rotational, LaxVariant::Symmetric];

    pub fn label(self) -> &'static str {
        match self {
            LaxVariant::Rotational => "rotational",
            LaxVariant::Symmetric => "symmetric",
        }
    }
}

/// `L(a)` with `N = diag(0, 1)`, `k(a) = a`, `c = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxPair {
    pub variant: LaxVariant,
    pub n: SquareMatrix,
    pub c: f64,
}

impl LaxPair {
    pub fn new(variant: LaxVariant) -> Self {
        Self {
            variant,
            n: SquareMatrix::from_rows([[0.0, 0.0], [0.0, 1.0]]),
            c: 1.0,
        }
    }

    pub fn k_of_a(&self, a: f64) -> f64 {
        a
    }

    pub fn l_of_a(&self, a: f64) -> SquareMatrix {
        let k = self.k_of_a(a);
        match self.variant {
            LaxVariant::Rotational => SquareMatrix::from_rows([[-0.5 * self.c, -k], [k, -0.5 * self.c]]),
            LaxVariant::Symmetric => SquareMatrix::from_rows([[0.5 * self.c, k], [k, 0.5 * self.c]]),
        }
    }

    /// `∂L/∂a`, constant since `L` is affine in `a`.
    pub fn dl_da(&self) -> SquareMatrix {
        match self.variant {
            LaxVariant::Rotational => SquareMatrix::from_rows([[0.0, -1.0], [1.0, 0.0]]),
            LaxVariant::Symmetric => SquareMatrix::from_rows([[0.0, 1.0], [1.0, 0.0]]),
        }
    }

    /// The eigenvalue pair attached to `L(a)`: `(-1/2 - a, -1/2 + a)` as
    /// stated for the rotational form, `(1/2 - a, 1/2 + a)` for the symmetric one.
    pub fn eigenvalues(&self, a: f64) -> (f64, f64) {
        match self.variant {
            LaxVariant::Rotational => (-0.5 - a, -0.5 + a),
            LaxVariant::Symmetric => (0.5 - a, 0.5 + a),
        }
    }

    /// Actual eigenvalues of `L(a)` as `(re, im)` pairs.
    pub fn true_eigenvalues(&self, a: f64) -> [(f64, f64); 2] {
        let l = self.l_of_a(a);
        let half_tr = 0.5 * l.trace();
        let disc = half_tr * half_tr - l.determinant();
        if disc >= 0.0 {
            let r = disc.sqrt();
            [(half_tr - r, 0.0), (half_tr + r, 0.0)]
        } else {
            let r = (-disc).sqrt();
            [(half_tr, -r), (half_tr, r)]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaxReport {
    /// `max_t ‖L̇ − [L, N]‖_F`.
    pub residual_max: f64,
    /// `max_t max_i |λ_i(a(t)) − λ_i(a(0))|` for the attached eigenvalues.
    pub spectrum_drift: f64,
    /// `max_t |tr L(t) − tr L(0)|`.
    pub trace_drift: f64,
    pub trace: f64,
}

/// Measures `L̇ = [L, N]` along a gradient trajectory, with `L̇ = ∂L/∂a · ȧ`
/// and `ȧ = -a`.
pub fn lax_residual(pair: &LaxPair, traj: &Trajectory) -> LaxReport {
    let a0 = traj.first().a;
    let (l1_0, l2_0) = pair.eigenvalues(a0);
    let trace = pair.l_of_a(a0).trace();
    let dl = pair.dl_da();
    let mut report = LaxReport {
        residual_max: 0.0,
        spectrum_drift: 0.0,
        trace_drift: 0.0,
        trace,
    };
    for s in &traj.samples {
        let l = pair.l_of_a(s.a);
        let l_dot = dl.scale(-s.a);
        let bracket = commutator(&l, &pair.n).expect("2x2 operands");
        report.residual_max = report.residual_max.max(l_dot.distance(&bracket));
        let (l1, l2) = pair.eigenvalues(s.a);
        report.spectrum_drift = report.spectrum_drift.max((l1 - l1_0).abs()).max((l2 - l2_0).abs());
        report.trace_drift = report.trace_drift.max((l.trace() - trace).abs());
    }
    report
}

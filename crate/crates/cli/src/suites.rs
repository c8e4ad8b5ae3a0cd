use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use souriau_core::dynamics::{
    hamiltonian_flow, integrability_report, integrate_gradient, integrate_gradient_matrix, integrate_gradient_on,
    lax_residual, max_error_vs_exact, scalar_hamiltonian_diagnostic, FirstIntegral, FlowMethod, LaxPair, LaxVariant,
    Trajectory, COMPLETELY_INTEGRABLE,
};
use souriau_core::fisher::{
    consistent_conventions, metric_matrix, reproduce_reference_table, DiscrepancyKind, MetricConvention,
    ReferenceTable, TABLE_SAMPLES,
};
use souriau_core::lie::{builtin, cartan_split, e1, so3_reference_claims, u, z1, z2, z3, GroupSweep};
use souriau_core::linalg::{commutator, pairing, PairingConvention, SquareMatrix};
use souriau_core::orbits::{kks_form, leaf_membership, orbit_sample, DualFunction, PoissonEvaluator};
use souriau_core::thermo::{
    apply_cocycle, density_moments, density_normalization, group_cocycle_residual, koszul_chi, phi_derivative_fd,
    potentials, scalar_fisher, ChiMethod, FisherMethod,
};
use souriau_core::{AlgebraCocycle, AlgebraName, ConeElement, EtaConvention, TwoCocycle};

use crate::report::{Case, RunReport};
use crate::CliError;

const CLOSED_FORM: &str = "closed-form";
const TABLE: &str = "reference-table";
const QUADRATURE: &str = "oracle:quadrature";
const FINITE_DIFF: &str = "oracle:finite-difference";
const EXACT: &str = "oracle:exact-arithmetic";
const MEASURED: &str = "measured";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Thermo,
    Metric,
    Flow,
    Lax,
    Orbit,
    All,
}

impl Suite {
    /// Individual suites in the order `all` runs them.
    pub const EACH: [Suite; 5] = [Suite::Thermo, Suite::Metric, Suite::Flow, Suite::Lax, Suite::Orbit];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thermo => "thermo",
            Suite::Metric => "metric",
            Suite::Flow => "flow",
            Suite::Lax => "lax",
            Suite::Orbit => "orbit",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub a: Vec<f64>,
    pub a0: f64,
    pub dt: f64,
    /// Defaults per suite: 5 for the gradient flow, 10 for the Hamiltonian
    /// flow, 1 for the Lax check.
    pub t_end: Option<f64>,
    pub pairing: Option<PairingConvention>,
    pub eta: Option<EtaConvention>,
    pub seed: u64,
    pub targets: Vec<ReferenceTable>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            a: vec![0.5, 1.0, 2.0, 5.0],
            a0: 1.0,
            dt: 1e-3,
            t_end: None,
            pairing: None,
            eta: None,
            seed: 0,
            targets: ReferenceTable::ALL.to_vec(),
        }
    }
}

impl Options {
    fn validate(&self) -> Result<(), CliError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if self.a.is_empty() || !self.a.iter().all(|&a| positive(a)) {
            return Err(CliError::Usage("--a needs one or more positive values".into()));
        }
        if !positive(self.a0) {
            return Err(CliError::Usage("--a0 must be positive".into()));
        }
        if !positive(self.dt) {
            return Err(CliError::Usage("--dt must be positive".into()));
        }
        if let Some(t) = self.t_end {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Usage("--t-end must be non-negative".into()));
            }
            if t > 0.0 && self.dt > t {
                return Err(CliError::Usage("--dt exceeds --t-end".into()));
            }
        }
        if self.targets.is_empty() {
            return Err(CliError::Usage("no metric target selected".into()));
        }
        Ok(())
    }

    fn override_convention(&self) -> Option<MetricConvention> {
        if self.pairing.is_none() && self.eta.is_none() {
            return None;
        }
        Some(MetricConvention::new(
            self.pairing.unwrap_or(PairingConvention::Half),
            self.eta.unwrap_or(EtaConvention::GradPhi),
        ))
    }
}

pub fn run(suite: Suite, opts: &Options) -> Result<RunReport, CliError> {
    opts.validate()?;
    let mut convention_used = None;
    let cases = match suite {
        Suite::Thermo => thermo(opts)?,
        Suite::Metric => {
            let (cases, conv) = metric(opts)?;
            convention_used = Some(conv);
            cases
        }
        Suite::Flow => flow(opts)?,
        Suite::Lax => lax(opts)?,
        Suite::Orbit => orbit(opts)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                let r = run(s, opts)?;
                if r.convention_used.is_some() {
                    convention_used = r.convention_used;
                }
                all.extend(r.cases.into_iter().map(|c| c.prefixed(s.name())));
            }
            all
        }
    };
    Ok(RunReport {
        suite: suite.name().into(),
        cases,
        convention_used,
        wall_time_ms: 0,
    })
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
}

fn thermo(opts: &Options) -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    for &a in &opts.a {
        let b = ConeElement::so2(a)?;
        let closed = 1.0 / (2.0 * a);
        cases.push(Case::check(
            format!("chi[a={a}]"),
            koszul_chi(&b, ChiMethod::Quadrature)?,
            closed,
            1e-8,
            QUADRATURE,
        ));
        let p = potentials(&b, EtaConvention::GradPhi)?;
        cases.push(Case::check(
            format!("phi[a={a}]"),
            p.phi,
            (2.0 * a).ln(),
            1e-12,
            CLOSED_FORM,
        ));
        cases.push(Case::check(
            format!("psi[a={a}]"),
            p.psi,
            1.0 - (2.0 * a).ln(),
            1e-12,
            CLOSED_FORM,
        ));
        cases.push(Case::check(
            format!("legendre[a={a}]"),
            p.legendre_residual,
            0.0,
            1e-12,
            CLOSED_FORM,
        ));
        if let Some(eta) = opts.eta.filter(|e| *e != EtaConvention::GradPhi) {
            let alt = potentials(&b, eta)?;
            cases.push(Case::finding(
                format!("legendre[a={a},eta={}]", eta.label()),
                alt.legendre_residual,
                MEASURED,
            ));
        }
        cases.push(Case::check(
            format!("density_normalization[a={a}]"),
            density_normalization(&b)?,
            1.0,
            1e-8,
            QUADRATURE,
        ));
        let m = density_moments(&b)?;
        cases.push(Case::check(format!("mean[a={a}]"), m.mean_x, closed, 1e-6, QUADRATURE));
        cases.push(Case::check(
            format!("variance[a={a}]"),
            m.var_x,
            closed * closed,
            1e-6,
            QUADRATURE,
        ));
        for id in &m.identifications {
            cases.push(Case::finding(
                format!("mean_vs[{}][a={a}]", id.label),
                id.deviation,
                QUADRATURE,
            ));
        }
        let fisher = 1.0 / (a * a);
        cases.push(Case::check(
            format!("fisher_closed_form[a={a}]"),
            scalar_fisher(&b, FisherMethod::ClosedForm)?,
            fisher,
            0.0,
            CLOSED_FORM,
        ));
        cases.push(Case::check(
            format!("fisher_finite_difference[a={a}]"),
            scalar_fisher(&b, FisherMethod::FiniteDifference)?,
            fisher,
            1e-6 * fisher,
            FINITE_DIFF,
        ));
        cases.push(Case::check(
            format!("fisher_statistical[a={a}]"),
            scalar_fisher(&b, FisherMethod::Statistical)?,
            fisher,
            1e-4 * fisher,
            QUADRATURE,
        ));
        cases.push(Case::check(
            format!("dphi_da[a={a}]"),
            phi_derivative_fd(a),
            1.0 / a,
            1e-6 / a,
            FINITE_DIFF,
        ));
    }

    let mut worst = 0.0f64;
    for a in log_spaced(1e-2, 1e2, 100) {
        worst = worst.max(
            potentials(&ConeElement::so2(a)?, EtaConvention::GradPhi)?
                .legendre_residual
                .abs(),
        );
    }
    cases.push(Case::check("legendre_sweep_max", worst, 0.0, 1e-12, CLOSED_FORM));
    let one = potentials(&ConeElement::so2(1.0)?, EtaConvention::GradPhi)?;
    cases.push(Case::check("phi[a=1,reference]", one.phi, LN_2, 1e-12, TABLE));
    cases.push(Case::check("psi[a=1,reference]", one.psi, 1.0 - LN_2, 1e-12, TABLE));

    let so2_samples = GroupSweep::So2.elements(100);
    let j_samples = GroupSweep::JConjugation.elements(100);
    let rot_samples = GroupSweep::So3.elements(100);
    for &a in &opts.a {
        let b2 = ConeElement::so2(a)?;
        let b3 = ConeElement::so3(a)?;
        cases.push(Case::check(
            format!("equivariance_so2[a={a}]"),
            group_cocycle_residual(&b2, EtaConvention::GradPhi, &so2_samples)?,
            0.0,
            1e-12,
            MEASURED,
        ));
        cases.push(Case::check(
            format!("equivariance_so3_j[a={a}]"),
            group_cocycle_residual(&b3, EtaConvention::GradPhi, &j_samples)?,
            0.0,
            1e-12,
            MEASURED,
        ));
        cases.push(Case::finding(
            format!("equivariance_so3_rotations[a={a}]"),
            group_cocycle_residual(&b3, EtaConvention::GradPhi, &rot_samples)?,
            MEASURED,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s: f64 = rng.gen_range(0.01..10.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let x = u().scale(s);
        let back = apply_cocycle(
            &AlgebraCocycle::NegInverse,
            &apply_cocycle(&AlgebraCocycle::NegInverse, &x)?,
        )?;
        worst = worst.max(back.distance(&x) / (1.0 + s.abs()));
    }
    cases.push(Case::check("involution_neg_inverse", worst, 0.0, 1e-12, MEASURED));
    let so3 = builtin(AlgebraName::So3)?;
    let sl2 = builtin(AlgebraName::Sl2)?;
    cases.push(Case::check(
        "involution_ad_j",
        AlgebraCocycle::ad_j().involution_defect(&so3)?,
        0.0,
        1e-12,
        MEASURED,
    ));

    for (label, theta, alg) in [
        ("sl2", AlgebraCocycle::NegInverse, &sl2),
        ("so3", AlgebraCocycle::ad_j(), &so3),
    ] {
        let split = cartan_split(alg, &theta)?;
        cases.push(Case::check(
            format!("cartan_{label}_k_dim"),
            split.k_basis.len() as f64,
            1.0,
            0.0,
            CLOSED_FORM,
        ));
        cases.push(Case::check(
            format!("cartan_{label}_p_dim"),
            split.p_basis.len() as f64,
            2.0,
            0.0,
            CLOSED_FORM,
        ));
        cases.push(Case::check(
            format!("cartan_{label}_inclusions"),
            split.inclusion_residual,
            0.0,
            1e-12,
            MEASURED,
        ));
        let tc = TwoCocycle::new(theta, opts.pairing.unwrap_or(PairingConvention::Half), alg.clone())?;
        let (mut anti, mut cyc) = (0.0f64, 0.0f64);
        for x in &alg.basis {
            for y in &alg.basis {
                anti = anti.max((tc.eval(x, y)? + tc.eval(y, x)?).abs());
                for z in &alg.basis {
                    let s = tc.eval(&commutator(x, y)?, z)?
                        + tc.eval(&commutator(y, z)?, x)?
                        + tc.eval(&commutator(z, x)?, y)?;
                    cyc = cyc.max(s.abs());
                }
            }
        }
        cases.push(Case::check(
            format!("two_cocycle_{label}_antisymmetry"),
            anti,
            0.0,
            0.0,
            MEASURED,
        ));
        cases.push(Case::check(
            format!("two_cocycle_{label}_identity"),
            cyc,
            0.0,
            1e-12,
            MEASURED,
        ));
    }

    for claim in so3_reference_claims(opts.a[0]) {
        if !claim.holds() {
            let dev = claim.claimed.distance(&claim.computed);
            cases.push(Case::finding(
                format!("bracket_claim[{}][a={}]", claim.label, opts.a[0]),
                dev,
                TABLE,
            ));
        }
    }
    Ok(cases)
}

fn conv_tag(c: MetricConvention) -> String {
    format!("pairing={},eta={}", c.pairing.label(), c.eta.label())
}

fn metric(opts: &Options) -> Result<(Vec<Case>, MetricConvention), CliError> {
    let mut cases = Vec::new();
    let mut used = None;
    let over = opts.override_convention();
    for &t in &opts.targets {
        let name = t.name();
        let rep = reproduce_reference_table(t)?;
        let best = rep.best_row();
        used.get_or_insert(rep.best);
        let prov = format!("sweep:{}", conv_tag(rep.best));
        match t {
            ReferenceTable::So3 => {
                cases.push(Case::check(
                    format!("{name}.abs_value_deviation"),
                    best.max_abs_value_deviation,
                    0.0,
                    1e-12,
                    &prov,
                ));
                cases.push(Case::finding(
                    format!("{name}.signed_deviation"),
                    best.max_deviation,
                    &prov,
                ));
                let third = rep
                    .report
                    .matrices
                    .iter()
                    .map(|m| {
                        (0..3)
                            .map(|k| m.get(2, k).abs().max(m.get(k, 2).abs()))
                            .fold(0.0, f64::max)
                    })
                    .fold(0.0, f64::max);
                cases.push(Case::check(format!("{name}.third_row_column"), third, 0.0, 0.0, &prov));
            }
            _ => cases.push(Case::check(
                format!("{name}.max_deviation"),
                best.max_deviation,
                0.0,
                1e-12,
                &prov,
            )),
        }
        let k = if t == ReferenceTable::Sl2Normalized { -2.0 } else { 2.0 };
        for i in 0..2 {
            let fit = rep.report.monomial_fit[i][i];
            cases.push(Case::check(
                format!("{name}.exponent[{i}{i}]"),
                fit.exponent.map_or(f64::NAN, f64::from).max(-99.0),
                k,
                0.0,
                &prov,
            ));
            cases.push(Case::check(
                format!("{name}.fit_residual[{i}{i}]"),
                fit.residual,
                0.0,
                1e-9,
                &prov,
            ));
        }
        cases.push(Case::finding(
            format!("{name}.symmetric_defect"),
            rep.report.symmetric_defect,
            MEASURED,
        ));
        for row in &rep.sweep {
            cases.push(Case::finding(
                format!("{name}.sweep[{}]", conv_tag(row.convention)),
                row.max_deviation,
                MEASURED,
            ));
        }
        for d in &rep.report.discrepancies {
            let kind = match d.kind {
                DiscrepancyKind::SignOnly => "sign",
                DiscrepancyKind::Value => "value",
            };
            cases.push(Case::finding(
                format!("{name}.discrepancy[a={},{}{},{kind}]", d.a, d.row, d.col),
                d.computed,
                TABLE,
            ));
        }
        if let Some(c) = over {
            let r = metric_matrix(&t.basis(), c, &TABLE_SAMPLES)?;
            let dev = r
                .a_samples
                .iter()
                .zip(&r.matrices)
                .map(|(&a, m)| {
                    let e = t.expected(a);
                    m.entries()
                        .iter()
                        .zip(e.entries())
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            cases.push(Case::finding(
                format!("{name}.deviation[{}]", conv_tag(c)),
                dev,
                MEASURED,
            ));
        }
    }
    let shared = consistent_conventions(&opts.targets)?;
    cases.push(Case::finding(
        "conventions_reproducing_every_table",
        shared.len() as f64,
        MEASURED,
    ));
    Ok((cases, over.or(used).expect("at least one target")))
}

/// Hamiltonian trajectory written by `--csv`.
pub fn flow_trajectory(opts: &Options) -> Result<Trajectory, CliError> {
    opts.validate()?;
    let b = ConeElement::so2(opts.a0)?;
    Ok(hamiltonian_flow(&b, EtaConvention::GradPhi, opts.t_end.unwrap_or(10.0), opts.dt)?.0)
}

fn flow(opts: &Options) -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    let a0 = opts.a0;
    let t_grad = opts.t_end.unwrap_or(5.0);
    let rk4 = integrate_gradient(a0, t_grad, opts.dt, FlowMethod::Rk4)?;
    cases.push(Case::check(
        "rk4_max_error",
        max_error_vs_exact(&rk4),
        0.0,
        1e-8,
        CLOSED_FORM,
    ));
    cases.push(Case::check(
        "samples",
        rk4.len() as f64,
        rk4.len() as f64,
        0.0,
        MEASURED,
    ));
    let coarse = max_error_vs_exact(&integrate_gradient(1.0, 5.0, 0.1, FlowMethod::Rk4)?);
    let fine = max_error_vs_exact(&integrate_gradient(1.0, 5.0, 0.05, FlowMethod::Rk4)?);
    cases.push(Case::check("rk4_order_ratio", coarse / fine, 16.0, 2.0, CLOSED_FORM));

    let so3 = integrate_gradient_on(AlgebraName::So3, a0, t_grad, opts.dt, FlowMethod::Rk4)?;
    let gap = |x: &Trajectory, y: &Trajectory| {
        x.a_values()
            .iter()
            .zip(y.a_values())
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    };
    cases.push(Case::check("so3_matches_so2", gap(&rk4, &so3), 0.0, 0.0, MEASURED));
    for b in [ConeElement::so2(a0)?, ConeElement::so3(a0)?] {
        let m = integrate_gradient_matrix(&b, t_grad, opts.dt)?;
        cases.push(Case::check(
            format!("matrix_flow_matches_scalar[{}]", b.algebra()),
            gap(&rk4, &m),
            0.0,
            0.0,
            MEASURED,
        ));
    }
    cases.push(Case::check(
        "gradient_field_consistency",
        souriau_core::dynamics::gradient_consistency(&ConeElement::so2(a0)?),
        0.0,
        1e-6,
        FINITE_DIFF,
    ));
    let pairing_drift = rk4
        .samples
        .iter()
        .map(|s| pairing(&s.p, &s.q, PairingConvention::Half).map(|v| (v - 1.0).abs()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    cases.push(Case::check(
        "pairing_beta_eta_drift",
        pairing_drift,
        0.0,
        1e-10,
        CLOSED_FORM,
    ));

    let (ham, drift) = hamiltonian_flow(
        &ConeElement::so2(a0)?,
        EtaConvention::GradPhi,
        opts.t_end.unwrap_or(10.0),
        opts.dt,
    )?;
    cases.push(Case::check(
        "hamiltonian_initial",
        ham.first().hamiltonian(),
        -1.0,
        1e-12,
        TABLE,
    ));
    cases.push(Case::check("hamiltonian_drift", drift, 0.0, 1e-10, CLOSED_FORM));
    let integrals = [FirstIntegral::hamiltonian(), FirstIntegral::new("a", |s| s.a)];
    let rep = integrability_report(&ham, &integrals)?;
    cases.push(Case::holds(
        "completely_integrable",
        rep.verdict == COMPLETELY_INTEGRABLE,
        MEASURED,
    ));
    cases.push(Case::finding("variation[a]", rep.integrals[1].variation, MEASURED));
    for c in scalar_hamiltonian_diagnostic(a0)? {
        cases.push(Case::finding(
            format!("scalar_hamiltonian[{}]", c.reading),
            c.residual(),
            MEASURED,
        ));
    }
    Ok(cases)
}

fn lax(opts: &Options) -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    let a0 = opts.a0;
    let t_end = opts.t_end.unwrap_or(1.0);
    let traj = integrate_gradient(
        a0,
        t_end,
        opts.dt.min(if t_end > 0.0 { t_end } else { opts.dt }),
        FlowMethod::Exact,
    )?;
    let a_end = traj.last().a;
    for v in LaxVariant::ALL {
        let name = v.label();
        let pair = LaxPair::new(v);
        let rep = lax_residual(&pair, &traj);
        match v {
            LaxVariant::Rotational => cases.push(Case::check(format!("{name}.trace"), rep.trace, -1.0, 1e-14, TABLE)),
            LaxVariant::Symmetric => cases.push(Case::finding(format!("{name}.trace"), rep.trace, MEASURED)),
        }
        cases.push(Case::check(
            format!("{name}.trace_drift"),
            rep.trace_drift,
            0.0,
            1e-14,
            CLOSED_FORM,
        ));
        cases.push(Case::finding(
            format!("{name}.residual_max"),
            rep.residual_max,
            MEASURED,
        ));
        cases.push(Case::check(
            format!("{name}.residual_regression"),
            rep.residual_max,
            2.0 * a0,
            1e-12,
            EXACT,
        ));
        cases.push(Case::finding(
            format!("{name}.spectrum_drift"),
            rep.spectrum_drift,
            MEASURED,
        ));
        cases.push(Case::check(
            format!("{name}.spectrum_regression"),
            rep.spectrum_drift,
            a0 - a_end,
            1e-12,
            EXACT,
        ));
    }
    let rot = LaxPair::new(LaxVariant::Rotational);
    let (l1, l2) = rot.eigenvalues(1.0);
    cases.push(Case::check("rotational.lambda1[a=1]", l1, -1.5, 0.0, TABLE));
    cases.push(Case::check("rotational.lambda2[a=1]", l2, 0.5, 0.0, TABLE));
    let actual = rot.true_eigenvalues(1.0);
    cases.push(Case::finding(
        "rotational.actual_eigenvalue_imag[a=1]",
        actual[1].1,
        MEASURED,
    ));
    cases.push(Case::finding(
        "rotational.actual_eigenvalue_real[a=1]",
        actual[1].0,
        MEASURED,
    ));
    Ok(cases)
}

fn orbit(opts: &Options) -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    let x = opts.a0;
    let so2_seed = u().scale(x);
    let so3_seed = z3().scale(x);
    cases.push(Case::check(
        "so2_seed_spread[SO2]",
        orbit_sample(&so2_seed, GroupSweep::So2, 100)?.max_spread,
        0.0,
        1e-12,
        MEASURED,
    ));
    cases.push(Case::check(
        "so3_seed_spread[J]",
        orbit_sample(&so3_seed, GroupSweep::JConjugation, 100)?.max_spread,
        0.0,
        1e-12,
        MEASURED,
    ));
    cases.push(Case::finding(
        "so3_seed_spread[SO3]",
        orbit_sample(&so3_seed, GroupSweep::So3, 100)?.max_spread,
        MEASURED,
    ));
    cases.push(Case::finding(
        "so3_seed_spread[O3_reflections]",
        orbit_sample(&so3_seed, GroupSweep::O3Reflections, 1)?.max_spread,
        MEASURED,
    ));
    cases.push(Case::check(
        "zero_orbit_spread",
        orbit_sample(&SquareMatrix::zeros(3), GroupSweep::So3, 10)?.max_spread,
        0.0,
        0.0,
        MEASURED,
    ));

    let on = |m: &SquareMatrix, alg| leaf_membership(m, alg).map(|l| l.on_leaf);
    cases.push(Case::holds(
        "leaf_accepts[3u]",
        on(&u().scale(3.0), AlgebraName::So2)?,
        CLOSED_FORM,
    ));
    cases.push(Case::check(
        "leaf_coordinate[3u]",
        leaf_membership(&u().scale(3.0), AlgebraName::So2)?.x,
        3.0,
        0.0,
        CLOSED_FORM,
    ));
    cases.push(Case::holds(
        "leaf_rejects[0]",
        !on(&SquareMatrix::zeros(2), AlgebraName::So2)?,
        CLOSED_FORM,
    ));
    cases.push(Case::holds(
        "leaf_rejects[-u]",
        !on(&u().scale(-1.0), AlgebraName::So2)?,
        CLOSED_FORM,
    ));
    cases.push(Case::holds(
        "leaf_rejects[e1]",
        !on(&e1(), AlgebraName::So2)?,
        CLOSED_FORM,
    ));
    cases.push(Case::holds(
        "leaf_accepts[Z3]",
        on(&z3(), AlgebraName::So3)?,
        CLOSED_FORM,
    ));
    cases.push(Case::holds(
        "leaf_rejects[Z1+Z3]",
        !on(&(&z1() + &z3()), AlgebraName::So3)?,
        CLOSED_FORM,
    ));
    cases.push(Case::check(
        "kks[Z3;Z1,Z2]",
        kks_form(&z3(), &z1(), &z2(), PairingConvention::Half)?,
        1.0,
        0.0,
        CLOSED_FORM,
    ));

    let conv = opts.pairing.unwrap_or(PairingConvention::Half);
    let ev = PoissonEvaluator::kks(builtin(AlgebraName::So3)?, conv);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut anti, mut leibniz, mut jacobi, mut casimir) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let xi = ev.algebra.random_element(&mut rng);
        let a = ev.algebra.random_element(&mut rng);
        let b = ev.algebra.random_element(&mut rng);
        let c = ev.algebra.random_element(&mut rng);
        let (f, g, h) = (
            DualFunction::linear(a.clone()),
            DualFunction::linear(b.clone()),
            DualFunction::linear(c.clone()),
        );
        anti = anti.max((ev.bracket(&f, &g, &xi)? + ev.bracket(&g, &f, &xi)?).abs());
        let lhs = ev.bracket(&f, &g.clone().times(h.clone()), &xi)?;
        let rhs = ev.bracket(&f, &g, &xi)? * h.value(&xi, conv)? + g.value(&xi, conv)? * ev.bracket(&f, &h, &xi)?;
        leibniz = leibniz.max((lhs - rhs).abs());
        let nested = |x: &SquareMatrix, y: &SquareMatrix, z: &SquareMatrix| -> Result<f64, CliError> {
            let inner = DualFunction::linear(commutator(y, z)?);
            Ok(ev.bracket(&DualFunction::linear(x.clone()), &inner, &xi)?)
        };
        jacobi = jacobi.max((nested(&a, &b, &c)? + nested(&b, &c, &a)? + nested(&c, &a, &b)?).abs());
        casimir = casimir.max(ev.bracket(&DualFunction::Casimir, &f, &xi)?.abs());
    }
    cases.push(Case::check("poisson_antisymmetry", anti, 0.0, 1e-10, MEASURED));
    cases.push(Case::check("poisson_leibniz", leibniz, 0.0, 1e-10, MEASURED));
    cases.push(Case::check("poisson_jacobi", jacobi, 0.0, 1e-10, MEASURED));
    cases.push(Case::check("casimir_bracket", casimir, 0.0, 1e-10, MEASURED));

    let ev2 = PoissonEvaluator::kks(builtin(AlgebraName::So2)?, conv);
    let mut so2_worst = 0.0f64;
    for _ in 0..100 {
        let xi = u().scale(rng.gen_range(-5.0..5.0));
        let f = DualFunction::linear(u().scale(rng.gen_range(-5.0..5.0)));
        let g = DualFunction::linear(u().scale(rng.gen_range(-5.0..5.0)));
        so2_worst = so2_worst.max(ev2.bracket(&f, &g, &xi)?.abs());
    }
    cases.push(Case::check("so2_bracket", so2_worst, 0.0, 1e-14, MEASURED));
    Ok(cases)
}

//! Thermodynamics on the Koszul cone of so(2) and its so(3) embedding.
//!
//! The cone is the ray `β = a·G, a > 0` where `G` is the rotation generator
//! (`u` for so(2), `Z3` for so(3)). The dual cone is identified with the same
//! ray through the pairing, `ξ = x·G`, and `⟨β,ξ⟩ = 2ax` for both groups, so
//! every integral over the dual cone is a scalar integral in `x`.
//!
//! | quantity | value |
//! |---|---|
//! | `χ(β)` | `∫₀^∞ e^{-2ax} dx = 1/(2a)` |
//! | `Φ(β)` | `-log χ = log(2a)` |
//! | `Ψ(η)` | `⟨β,η⟩ - Φ = 1 - log(2a)` |
//! | `η`    | `∂Φ/∂β = β/⟨β,β⟩ = β/a²` |
//! | `p(β,ξ)` | `2a·e^{-2ax}` |

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::lie::{self, AlgebraName, GroupElement, LieAlgebraSpec};
use crate::linalg::{inverse2or3, pairing, PairingConvention, SquareMatrix, ALGEBRAIC_TOL, QUADRATURE_TOL};
use crate::quadrature::integrate_half_line;

/// Absolute tolerance requested from the quadrature routines.
const QUAD_REQUEST: f64 = 1e-10;

/// Relative finite-difference step for derivatives in `a`.
pub const FD_RELATIVE_STEP: f64 = 1e-4;

/// A point `β = a·G` of the cone, `a > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeElement {
    a: f64,
    matrix: SquareMatrix,
    algebra: AlgebraName,
}

impl ConeElement {
    pub fn new(a: f64, algebra: AlgebraName) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return domain(format!("cone parameter must be positive, got {a}"));
        }
        let generator = cone_generator(algebra)?;
        Ok(Self {
            a,
            matrix: generator.scale(a),
            algebra,
        })
    }

    pub fn so2(a: f64) -> Result<Self> {
        Self::new(a, AlgebraName::So2)
    }

    pub fn so3(a: f64) -> Result<Self> {
        Self::new(a, AlgebraName::So3)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn algebra(&self) -> AlgebraName {
        self.algebra
    }

    pub fn generator(&self) -> SquareMatrix {
        cone_generator(self.algebra).expect("validated at construction")
    }

    pub fn with_a(&self, a: f64) -> Result<Self> {
        Self::new(a, self.algebra)
    }
}

/// Generator of the cone ray: `u` for so(2), `Z3` for so(3).
pub fn cone_generator(algebra: AlgebraName) -> Result<SquareMatrix> {
    match algebra {
        AlgebraName::So2 => Ok(lie::u()),
        AlgebraName::So3 => Ok(lie::z3()),
        AlgebraName::Sl2 => domain("the cone lives in so2 or so3"),
    }
}

/// A point `ξ = x·G` of the dual cone, `x > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualElement {
    x: f64,
    matrix: SquareMatrix,
}

impl DualElement {
    pub fn new(x: f64, algebra: AlgebraName) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return domain(format!("dual cone coordinate must be positive, got {x}"));
        }
        Ok(Self {
            x,
            matrix: cone_generator(algebra)?.scale(x),
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }
}

/// How the geometric heat `η` is attached to `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaConvention {
    /// `η = ∂Φ/∂β = β/⟨β,β⟩` (pairing scale 1/2).
    #[serde(rename = "grad")]
    GradPhi,
    /// `η = -β`.
    #[serde(rename = "minus")]
    MinusBeta,
    /// `η = β`.
    #[serde(rename = "plus")]
    PlusBeta,
}

impl EtaConvention {
    pub const ALL: [EtaConvention; 3] = [
        EtaConvention::GradPhi,
        EtaConvention::MinusBeta,
        EtaConvention::PlusBeta,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EtaConvention::GradPhi => "grad",
            EtaConvention::MinusBeta => "minus",
            EtaConvention::PlusBeta => "plus",
        }
    }

    /// `η` for an arbitrary algebra element `x` (not only cone points), as
    /// needed when `β` is moved by the adjoint action.
    pub fn eta_of(self, x: &SquareMatrix) -> Result<SquareMatrix> {
        match self {
            EtaConvention::GradPhi => {
                let norm2 = pairing(x, x, PairingConvention::Half)?;
                if norm2 <= 0.0 {
                    return domain("grad convention needs a nonzero element");
                }
                Ok(x.scale(1.0 / norm2))
            }
            EtaConvention::MinusBeta => Ok(-x),
            EtaConvention::PlusBeta => Ok(x.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermoPotentials {
    pub chi: f64,
    pub phi: f64,
    pub psi: f64,
    pub eta: SquareMatrix,
    pub convention: EtaConvention,
    /// `ψ + φ − ⟨β,η⟩` under the 1/2 pairing; zero for the grad convention.
    pub legendre_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiMethod {
    ClosedForm,
    Quadrature,
}

/// Koszul characteristic function `χ(β) = ∫₀^∞ e^{-2ax} dx`.
pub fn koszul_chi(beta: &ConeElement, method: ChiMethod) -> Result<f64> {
    let a = beta.a();
    match method {
        ChiMethod::ClosedForm => Ok(1.0 / (2.0 * a)),
        ChiMethod::Quadrature => Ok(integrate_half_line(|x| (-2.0 * a * x).exp(), QUAD_REQUEST)?.value),
    }
}

/// `Φ(a) = log(2a)`.
pub fn phi_of(a: f64) -> f64 {
    (2.0 * a).ln()
}

pub fn potentials(beta: &ConeElement, conv: EtaConvention) -> Result<ThermoPotentials> {
    let a = beta.a();
    let chi = koszul_chi(beta, ChiMethod::ClosedForm)?;
    let phi = phi_of(a);
    let psi = 1.0 - phi;
    let eta = conv.eta_of(beta.matrix())?;
    let legendre_residual = psi + phi - pairing(beta.matrix(), &eta, PairingConvention::Half)?;
    Ok(ThermoPotentials {
        chi,
        phi,
        psi,
        eta,
        convention: conv,
        legendre_residual,
    })
}

/// Normalized density `p(β,ξ) = 2a·e^{-2ax}`.
pub fn density_eval(beta: &ConeElement, xi: &DualElement) -> Result<f64> {
    if xi.matrix().dim() != beta.matrix().dim() {
        return domain("cone and dual elements live in different algebras");
    }
    Ok(density(beta.a(), xi.x()))
}

fn density(a: f64, x: f64) -> f64 {
    2.0 * a * (-2.0 * a * x).exp()
}

/// `∫₀^∞ p(β,ξ) dx` by quadrature.
pub fn density_normalization(beta: &ConeElement) -> Result<f64> {
    let a = beta.a();
    Ok(integrate_half_line(|x| density(a, x), QUAD_REQUEST)?.value)
}

/// One candidate identification of the mean `E[ξ] = mean_x·G`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanIdentification {
    pub label: &'static str,
    pub candidate: SquareMatrix,
    /// `‖mean_x·G − candidate‖_F`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMoments {
    pub mean_x: f64,
    pub var_x: f64,
    pub identifications: Vec<MeanIdentification>,
}

impl DensityMoments {
    /// Labels of the candidates that coincide with the mean to 1e-6.
    pub fn matching(&self) -> Vec<&'static str> {
        self.identifications
            .iter()
            .filter(|m| m.deviation < 1e-6)
            .map(|m| m.label)
            .collect()
    }
}

/// Mean and variance of `x` under `p(β,·)` by quadrature, and how the mean
/// compares with each candidate for `η`.
pub fn density_moments(beta: &ConeElement) -> Result<DensityMoments> {
    let a = beta.a();
    let mean_x = integrate_half_line(|x| x * density(a, x), QUAD_REQUEST)?.value;
    let second = integrate_half_line(|x| x * x * density(a, x), QUAD_REQUEST)?.value;
    let var_x = second - mean_x * mean_x;
    let mean = beta.generator().scale(mean_x);
    let mut identifications = Vec::new();
    for conv in EtaConvention::ALL {
        let candidate = conv.eta_of(beta.matrix())?;
        let label = match conv {
            EtaConvention::GradPhi => "eta (grad)",
            EtaConvention::MinusBeta => "eta (minus)",
            EtaConvention::PlusBeta => "eta (plus)",
        };
        identifications.push(MeanIdentification {
            label,
            deviation: mean.distance(&candidate),
            candidate,
        });
    }
    // the expectation as evaluated in the reference derivation: G/a²
    let printed = beta.generator().scale(1.0 / (a * a));
    identifications.push(MeanIdentification {
        label: "G/a^2",
        deviation: mean.distance(&printed),
        candidate: printed,
    });
    Ok(DensityMoments {
        mean_x,
        var_x,
        identifications,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FisherMethod {
    ClosedForm,
    FiniteDifference,
    Statistical,
}

/// Scalar Fisher information `I(a) = -∂²Φ/∂a² = 1/a²`.
pub fn scalar_fisher(beta: &ConeElement, method: FisherMethod) -> Result<f64> {
    let a = beta.a();
    match method {
        FisherMethod::ClosedForm => Ok(1.0 / (a * a)),
        FisherMethod::FiniteDifference => {
            let h = FD_RELATIVE_STEP * a;
            Ok(-(phi_of(a + h) - 2.0 * phi_of(a) + phi_of(a - h)) / (h * h))
        }
        FisherMethod::Statistical => {
            // score ∂_a log p = 1/a − 2x
            let v = integrate_half_line(|x| (1.0 / a - 2.0 * x).powi(2) * density(a, x), QUAD_REQUEST)?.value;
            Ok(v)
        }
    }
}

/// Central-difference `dΦ/da`, step `1e-4·a`.
pub fn phi_derivative_fd(a: f64) -> f64 {
    let h = FD_RELATIVE_STEP * a;
    (phi_of(a + h) - phi_of(a - h)) / (2.0 * h)
}

/// The 1-cocycle `Θ` acting on the algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraCocycle {
    /// `X ↦ -X⁻¹` (so(2), extended to sl(2,ℝ)).
    NegInverse,
    /// `X ↦ J X J⁻¹` for an orthogonal `J`.
    AdJ(GroupElement),
}

impl AlgebraCocycle {
    /// `Θ = Ad_J` with `J = diag(1, 1, -1)`.
    pub fn ad_j() -> Self {
        AlgebraCocycle::AdJ(GroupElement::j())
    }

    pub fn label(&self) -> &'static str {
        match self {
            AlgebraCocycle::NegInverse => "neg_inverse",
            AlgebraCocycle::AdJ(_) => "ad_J",
        }
    }

    pub fn apply(&self, x: &SquareMatrix) -> Result<SquareMatrix> {
        match self {
            AlgebraCocycle::NegInverse => Ok(-inverse2or3(x)?),
            AlgebraCocycle::AdJ(j) => lie::adjoint_group(j, x),
        }
    }

    /// Columns `m[j]` are the coordinates of `Θ(B_j)` in the basis of `alg`.
    /// This is the linear map determined by `Θ` on the basis.
    pub fn linear_map(&self, alg: &LieAlgebraSpec) -> Result<Vec<Vec<f64>>> {
        alg.basis
            .iter()
            .map(|b| {
                let img = self.apply(b)?;
                let c = alg.coordinates(&img)?;
                let residual = alg.from_coordinates(&c).distance(&img);
                if residual > ALGEBRAIC_TOL {
                    return Err(Error::Structure(format!(
                        "{} leaves {} (residual {residual:e})",
                        self.label(),
                        alg.name
                    )));
                }
                Ok(c)
            })
            .collect()
    }

    /// `max ‖Θ(Θ(B)) − B‖` over the basis.
    pub fn involution_defect(&self, alg: &LieAlgebraSpec) -> Result<f64> {
        let mut worst = 0.0f64;
        for b in &alg.basis {
            worst = worst.max(self.apply(&self.apply(b)?)?.distance(b));
        }
        Ok(worst)
    }
}

pub fn apply_cocycle(theta: &AlgebraCocycle, x: &SquareMatrix) -> Result<SquareMatrix> {
    theta.apply(x)
}

/// `Θ̃(X,Y) = ½(⟨Θ(X),Y⟩ − ⟨Θ(Y),X⟩)`, with `Θ` taken as the linear map it
/// defines on the algebra basis.
#[derive(Debug, Clone)]
pub struct TwoCocycle {
    pub base: AlgebraCocycle,
    pub convention: PairingConvention,
    algebra: LieAlgebraSpec,
    images: Vec<SquareMatrix>,
}

impl TwoCocycle {
    pub fn new(base: AlgebraCocycle, convention: PairingConvention, algebra: LieAlgebraSpec) -> Result<Self> {
        let images = algebra
            .basis
            .iter()
            .map(|b| base.apply(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            base,
            convention,
            algebra,
            images,
        })
    }

    pub fn algebra(&self) -> &LieAlgebraSpec {
        &self.algebra
    }

    /// `Θ` extended linearly from the basis.
    pub fn linear_image(&self, x: &SquareMatrix) -> Result<SquareMatrix> {
        let c = self.algebra.coordinates(x)?;
        let residual = self.algebra.from_coordinates(&c).distance(x);
        if residual > ALGEBRAIC_TOL * (1.0 + x.frobenius_norm()) {
            return domain(format!(
                "element is outside {} (residual {residual:e})",
                self.algebra.name
            ));
        }
        Ok(c.iter()
            .zip(&self.images)
            .fold(SquareMatrix::zeros(x.dim()), |acc, (ci, img)| &acc + &img.scale(*ci)))
    }

    pub fn eval(&self, x: &SquareMatrix, y: &SquareMatrix) -> Result<f64> {
        let forward = pairing(&self.linear_image(x)?, y, self.convention)?;
        let backward = pairing(&self.linear_image(y)?, x, self.convention)?;
        Ok(0.5 * (forward - backward))
    }
}

pub fn two_cocycle_eval(tc: &TwoCocycle, x: &SquareMatrix, y: &SquareMatrix) -> Result<f64> {
    tc.eval(x, y)
}

/// `max_g ‖η(Ad_g β) − Ad*_g η(β)‖`, the size of the group cocycle `θ(g)`
/// over the samples.
pub fn group_cocycle_residual(beta: &ConeElement, conv: EtaConvention, samples: &[GroupElement]) -> Result<f64> {
    let eta = conv.eta_of(beta.matrix())?;
    let mut worst = 0.0f64;
    for g in samples {
        let moved = conv.eta_of(&lie::adjoint_group(g, beta.matrix())?)?;
        let transported = lie::coadjoint_group(g, &eta)?;
        worst = worst.max(moved.distance(&transported));
    }
    Ok(worst)
}

/// Tolerance used when asserting quadrature against closed forms.
pub const CHI_TOLERANCE: f64 = QUADRATURE_TOL;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin, e1, e2, u, z1, z2, z3, GroupSweep};

    #[test]
    fn cone_rejects_nonpositive() {
        assert!(matches!(ConeElement::so2(0.0), Err(Error::Domain(_))));
        assert!(ConeElement::so2(-1.0).is_err());
        assert!(ConeElement::so2(f64::NAN).is_err());
        assert!(ConeElement::new(1.0, AlgebraName::Sl2).is_err());
        assert!(DualElement::new(0.0, AlgebraName::So2).is_err());
    }

    #[test]
    fn chi_closed_form() {
        assert_eq!(
            koszul_chi(&ConeElement::so2(1.0).unwrap(), ChiMethod::ClosedForm).unwrap(),
            0.5
        );
        assert_eq!(
            koszul_chi(&ConeElement::so2(0.5).unwrap(), ChiMethod::ClosedForm).unwrap(),
            1.0
        );
    }

    #[test]
    fn chi_quadrature() {
        let chi = koszul_chi(&ConeElement::so2(2.0).unwrap(), ChiMethod::Quadrature).unwrap();
        assert!((chi - 0.25).abs() < 1e-8);
    }

    #[test]
    fn potentials_at_one() {
        let p = potentials(&ConeElement::so2(1.0).unwrap(), EtaConvention::GradPhi).unwrap();
        assert!((p.phi - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((p.psi - (1.0 - std::f64::consts::LN_2)).abs() < 1e-15);
        assert!(p.eta.approx_eq(&u(), 0.0));
        assert!(p.legendre_residual.abs() < 1e-12);
        assert!((p.phi + p.chi.ln()).abs() < 1e-15);
    }

    #[test]
    fn potentials_vanish_at_half_e() {
        let a = std::f64::consts::E / 2.0;
        let p = potentials(&ConeElement::so2(a).unwrap(), EtaConvention::GradPhi).unwrap();
        assert!((p.phi - 1.0).abs() < 1e-15);
        assert!(p.psi.abs() < 1e-15);
    }

    #[test]
    fn so3_eta_pattern() {
        let p = potentials(&ConeElement::so3(2.0).unwrap(), EtaConvention::GradPhi).unwrap();
        assert!(p.eta.approx_eq(&z3().scale(0.5), 1e-15));
        let minus = potentials(&ConeElement::so3(2.0).unwrap(), EtaConvention::MinusBeta).unwrap();
        // ψ + φ − ⟨β,−β⟩ = 1 + a²
        assert!((minus.legendre_residual - 5.0).abs() < 1e-12);
    }

    #[test]
    fn density_values() {
        let b = ConeElement::so2(1.0).unwrap();
        let tiny = DualElement::new(1e-300, AlgebraName::So2).unwrap();
        assert!((density_eval(&b, &tiny).unwrap() - 2.0).abs() < 1e-15);
        let b = ConeElement::so2(0.5).unwrap();
        let one = DualElement::new(1.0, AlgebraName::So2).unwrap();
        assert!((density_eval(&b, &one).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        let n = density_normalization(&ConeElement::so2(3.0).unwrap()).unwrap();
        assert!((n - 1.0).abs() < 1e-8);
        let wrong = DualElement::new(1.0, AlgebraName::So3).unwrap();
        assert!(density_eval(&b, &wrong).is_err());
    }

    #[test]
    fn moments_by_quadrature() {
        let m = density_moments(&ConeElement::so2(1.0).unwrap()).unwrap();
        assert!((m.mean_x - 0.5).abs() < 1e-6);
        assert!((m.var_x - 0.25).abs() < 1e-6);
        let m2 = density_moments(&ConeElement::so2(2.0).unwrap()).unwrap();
        assert!((m2.mean_x - 0.25).abs() < 1e-6);
        // u/(2a) never equals η = u/a
        assert!(m.identifications[0].deviation > 0.1);
    }

    #[test]
    fn mean_matches_candidates_only_at_special_points() {
        // u/(2a) = u/a² exactly when a = 2
        let m = density_moments(&ConeElement::so2(2.0).unwrap()).unwrap();
        assert_eq!(m.matching(), vec!["G/a^2"]);
        // u/(2a) = β when a = 1/√2
        let m = density_moments(&ConeElement::so2(std::f64::consts::FRAC_1_SQRT_2).unwrap()).unwrap();
        assert_eq!(m.matching(), vec!["eta (plus)"]);
        let m = density_moments(&ConeElement::so2(1.0).unwrap()).unwrap();
        assert!(m.matching().is_empty());
    }

    #[test]
    fn fisher_three_ways() {
        for a in [0.5, 1.0, 2.0] {
            let b = ConeElement::so2(a).unwrap();
            let exact = scalar_fisher(&b, FisherMethod::ClosedForm).unwrap();
            assert_eq!(exact, 1.0 / (a * a));
            let fd = scalar_fisher(&b, FisherMethod::FiniteDifference).unwrap();
            assert!(((fd - exact) / exact).abs() < 1e-6);
            let st = scalar_fisher(&b, FisherMethod::Statistical).unwrap();
            assert!(((st - exact) / exact).abs() < 1e-4);
        }
    }

    #[test]
    fn neg_inverse_cocycle() {
        let beta = u().scale(3.0);
        let img = apply_cocycle(&AlgebraCocycle::NegInverse, &beta).unwrap();
        assert!(img.approx_eq(&beta.scale(1.0 / 9.0), 1e-15));
        let eta = potentials(&ConeElement::so2(3.0).unwrap(), EtaConvention::GradPhi)
            .unwrap()
            .eta;
        assert!(img.approx_eq(&eta, 1e-15));
        assert!(matches!(
            apply_cocycle(&AlgebraCocycle::NegInverse, &z3()),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn ad_j_cocycle() {
        let theta = AlgebraCocycle::ad_j();
        assert_eq!(apply_cocycle(&theta, &z3()).unwrap(), z3());
        assert_eq!(apply_cocycle(&theta, &z2()).unwrap(), -z2());
        assert_eq!(apply_cocycle(&theta, &z1()).unwrap(), -z1());
        assert!(apply_cocycle(&theta, &u()).is_err());
        assert_eq!(
            theta.involution_defect(&builtin(AlgebraName::So3).unwrap()).unwrap(),
            0.0
        );
    }

    #[test]
    fn two_cocycle_values() {
        let sl2 = TwoCocycle::new(
            AlgebraCocycle::NegInverse,
            PairingConvention::Half,
            builtin(AlgebraName::Sl2).unwrap(),
        )
        .unwrap();
        assert_eq!(sl2.eval(&e1(), &e2()).unwrap(), 0.0);
        assert_eq!(sl2.eval(&e1(), &e1()).unwrap(), 0.0);
        let so3 = TwoCocycle::new(
            AlgebraCocycle::ad_j(),
            PairingConvention::One,
            builtin(AlgebraName::So3).unwrap(),
        )
        .unwrap();
        assert_eq!(so3.eval(&z1(), &z3()).unwrap(), 0.0);
        let x = z1().scale(0.3);
        assert_eq!(so3.eval(&x, &x).unwrap(), 0.0);
        // elements outside the algebra are rejected
        assert!(so3.eval(&crate::linalg::SquareMatrix::identity(3), &z1()).is_err());
    }

    #[test]
    fn cocycle_residuals_vanish() {
        let b = ConeElement::so2(1.0).unwrap();
        assert!(group_cocycle_residual(&b, EtaConvention::GradPhi, &GroupSweep::So2.elements(100)).unwrap() < 1e-12);
        let id = [GroupElement::identity(crate::lie::GroupKind::SO2)];
        assert_eq!(group_cocycle_residual(&b, EtaConvention::GradPhi, &id).unwrap(), 0.0);
        let b3 = ConeElement::so3(2.0).unwrap();
        assert!(
            group_cocycle_residual(&b3, EtaConvention::GradPhi, &GroupSweep::JConjugation.elements(100)).unwrap()
                < 1e-12
        );
    }

    #[test]
    fn cocycle_residual_detects_full_so3_sweep() {
        // with Ad* = g⁻¹(·)g, rotations off the z axis move gβg⁻¹ and g⁻¹βg apart
        let b3 = ConeElement::so3(1.0).unwrap();
        let r = group_cocycle_residual(&b3, EtaConvention::GradPhi, &GroupSweep::So3.elements(8)).unwrap();
        assert!(r > 0.1);
    }
}

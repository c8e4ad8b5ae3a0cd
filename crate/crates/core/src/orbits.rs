//! Coadjoint orbits, leaves of the cone foliation, the KKS form and the
//! Lie–Poisson bracket on the dual of an algebra.
//!
//! Dual elements are matrices, identified with the algebra through the
//! pairing. The gradient `∇F` of a function on the dual is the algebra
//! element with `dF(ξ)[δ] = ⟨∇F, δ⟩` for the evaluator's pairing.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::lie::{coadjoint_group, AlgebraName, GroupSweep, LieAlgebraSpec};
use crate::linalg::{commutator, pairing, solve_dense, PairingConvention, SquareMatrix, ALGEBRAIC_TOL};
use crate::thermo::{cone_generator, TwoCocycle};

/// Step in basis coordinates for finite-difference gradients.
pub const GRADIENT_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSample {
    pub seed: SquareMatrix,
    pub group: GroupSweep,
    /// `Ad*_g ξ` for each sampled `g`.
    pub points: Vec<SquareMatrix>,
    /// Largest pairwise Frobenius distance between points.
    pub max_spread: f64,
}

pub fn orbit_sample(xi: &SquareMatrix, sweep: GroupSweep, n: usize) -> Result<OrbitSample> {
    if n == 0 {
        return domain("orbit sample needs at least one group element");
    }
    if xi.dim() != sweep.group().matrix_dim() {
        return domain(format!("{}x{} seed for a {:?} sweep", xi.dim(), xi.dim(), sweep));
    }
    if !xi.is_skew(ALGEBRAIC_TOL) {
        return domain("orbit seed must be skew-symmetric");
    }
    let points = sweep
        .elements(n)
        .iter()
        .map(|g| coadjoint_group(g, xi))
        .collect::<Result<Vec<_>>>()?;
    let mut max_spread = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            max_spread = max_spread.max(p.distance(q));
        }
    }
    Ok(OrbitSample {
        seed: xi.clone(),
        group: sweep,
        points,
        max_spread,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafMembership {
    pub on_leaf: bool,
    /// Coordinate of `ξ` along the generator.
    pub x: f64,
    /// Distance from `ξ` to the generator line.
    pub residual: f64,
}

/// Whether `ξ` lies on the ray `{x·G : x > 0}` of the cone in `algebra`.
pub fn leaf_membership(xi: &SquareMatrix, algebra: AlgebraName) -> Result<LeafMembership> {
    let g = cone_generator(algebra)?;
    if xi.dim() != g.dim() {
        return domain(format!("{}x{} element for the {algebra} cone", xi.dim(), xi.dim()));
    }
    let x = pairing(xi, &g, PairingConvention::Half)? / pairing(&g, &g, PairingConvention::Half)?;
    let residual = xi.distance(&g.scale(x));
    Ok(LeafMembership {
        on_leaf: residual <= ALGEBRAIC_TOL && x > 0.0,
        x,
        residual,
    })
}

/// `σ_F(X, Y) = ⟨F, [X, Y]⟩`.
pub fn kks_form(f: &SquareMatrix, x: &SquareMatrix, y: &SquareMatrix, conv: PairingConvention) -> Result<f64> {
    pairing(f, &commutator(x, y)?, conv)
}

type Field = Arc<dyn Fn(&SquareMatrix) -> f64 + Send + Sync>;

/// A scalar function on the dual.
#[derive(Clone)]
pub enum DualFunction {
    /// `ξ ↦ ⟨ξ, A⟩`; gradient `A`.
    Linear(SquareMatrix),
    /// `ξ ↦ ⟨ξ, ξ⟩`; gradient `2ξ`.
    Casimir,
    /// Pointwise product; gradient by the product rule.
    Product(Box<DualFunction>, Box<DualFunction>),
    /// Any function; gradient by finite differences.
    Field(Field),
}

impl DualFunction {
    pub fn linear(a: SquareMatrix) -> Self {
        DualFunction::Linear(a)
    }

    pub fn field(f: impl Fn(&SquareMatrix) -> f64 + Send + Sync + 'static) -> Self {
        DualFunction::Field(Arc::new(f))
    }

    pub fn times(self, other: DualFunction) -> Self {
        DualFunction::Product(Box::new(self), Box::new(other))
    }

    pub fn value(&self, xi: &SquareMatrix, conv: PairingConvention) -> Result<f64> {
        match self {
            DualFunction::Linear(a) => pairing(xi, a, conv),
            DualFunction::Casimir => pairing(xi, xi, conv),
            DualFunction::Product(f, g) => Ok(f.value(xi, conv)? * g.value(xi, conv)?),
            DualFunction::Field(f) => Ok(f(xi)),
        }
    }
}

impl fmt::Debug for DualFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualFunction::Linear(a) => f.debug_tuple("Linear").field(a).finish(),
            DualFunction::Casimir => f.write_str("Casimir"),
            DualFunction::Product(x, y) => f.debug_tuple("Product").field(x).field(y).finish(),
            DualFunction::Field(_) => f.write_str("Field(..)"),
        }
    }
}

/// `{F, G}(ξ) = ⟨ξ, [∇F, ∇G]⟩`, plus `Θ̃(∇F, ∇G)` when a cocycle is present.
#[derive(Debug, Clone)]
pub struct PoissonEvaluator {
    pub algebra: LieAlgebraSpec,
    pub convention: PairingConvention,
    pub cocycle: Option<TwoCocycle>,
}

impl PoissonEvaluator {
    pub fn kks(algebra: LieAlgebraSpec, convention: PairingConvention) -> Self {
        Self {
            algebra,
            convention,
            cocycle: None,
        }
    }

    pub fn affine(algebra: LieAlgebraSpec, convention: PairingConvention, cocycle: TwoCocycle) -> Self {
        Self {
            algebra,
            convention,
            cocycle: Some(cocycle),
        }
    }

    fn check_point(&self, xi: &SquareMatrix) -> Result<()> {
        let r = self.algebra.membership_residual(xi)?;
        if r > ALGEBRAIC_TOL * (1.0 + xi.frobenius_norm()) {
            return domain(format!("point is outside {} (residual {r:e})", self.algebra.name));
        }
        Ok(())
    }

    pub fn gradient(&self, f: &DualFunction, xi: &SquareMatrix) -> Result<SquareMatrix> {
        match f {
            DualFunction::Linear(a) => Ok(a.clone()),
            DualFunction::Casimir => Ok(xi.scale(2.0)),
            DualFunction::Product(p, q) => {
                let (pv, qv) = (p.value(xi, self.convention)?, q.value(xi, self.convention)?);
                Ok(&self.gradient(q, xi)?.scale(pv) + &self.gradient(p, xi)?.scale(qv))
            }
            DualFunction::Field(_) => self.fd_gradient(f, xi),
        }
    }

    /// Central differences along the basis, then the Gram solve
    /// `Σ_j g_j ⟨B_j, B_i⟩ = ∂F/∂c_i`.
    fn fd_gradient(&self, f: &DualFunction, xi: &SquareMatrix) -> Result<SquareMatrix> {
        let basis = &self.algebra.basis;
        let n = basis.len();
        let mut partials = Vec::with_capacity(n);
        for b in basis {
            let plus = f.value(&(xi + &b.scale(GRADIENT_STEP)), self.convention)?;
            let minus = f.value(&(xi - &b.scale(GRADIENT_STEP)), self.convention)?;
            let d = (plus - minus) / (2.0 * GRADIENT_STEP);
            if !d.is_finite() {
                return Err(Error::Numeric("non-finite gradient".into()));
            }
            partials.push(d);
        }
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                gram[i * n + j] = pairing(&basis[i], &basis[j], self.convention)?;
            }
        }
        let coords = solve_dense(&gram, &partials)?;
        Ok(self.algebra.from_coordinates(&coords))
    }

    pub fn bracket(&self, f: &DualFunction, g: &DualFunction, xi: &SquareMatrix) -> Result<f64> {
        self.check_point(xi)?;
        let gf = self.gradient(f, xi)?;
        let gg = self.gradient(g, xi)?;
        let mut value = pairing(xi, &commutator(&gf, &gg)?, self.convention)?;
        if let Some(tc) = &self.cocycle {
            value += tc.eval(&gf, &gg)?;
        }
        Ok(value)
    }

    /// `{⟨·,A⟩, ⟨·,B⟩} = ⟨·,[A,B]⟩` for the linear bracket; `None` when a
    /// cocycle adds a constant term.
    pub fn bracket_linear(&self, a: &SquareMatrix, b: &SquareMatrix) -> Result<Option<DualFunction>> {
        if self.cocycle.is_some() {
            return Ok(None);
        }
        Ok(Some(DualFunction::Linear(commutator(a, b)?)))
    }
}

pub fn poisson_bracket(ev: &PoissonEvaluator, f: &DualFunction, g: &DualFunction, point: &SquareMatrix) -> Result<f64> {
    ev.bracket(f, g, point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin, e1, u, z1, z2, z3};

    #[test]
    fn orbit_examples() {
        let s = orbit_sample(&u().scale(2.0), GroupSweep::So2, 100).unwrap();
        assert_eq!(s.points.len(), 100);
        assert!(s.max_spread < 1e-12);
        let zero = orbit_sample(&SquareMatrix::zeros(3), GroupSweep::So3, 10).unwrap();
        assert_eq!(zero.max_spread, 0.0);
        let j = orbit_sample(&z3().scale(1.5), GroupSweep::JConjugation, 100).unwrap();
        assert!(j.max_spread < 1e-12);
        assert!(orbit_sample(&e1(), GroupSweep::So2, 4).is_err());
        assert!(orbit_sample(&u(), GroupSweep::So3, 4).is_err());
    }

    #[test]
    fn full_rotation_group_moves_the_so3_seed() {
        let s = orbit_sample(&z3(), GroupSweep::So3, 16).unwrap();
        assert!(s.max_spread > 1.0);
        // diag(1,-1,1) and diag(-1,1,1) reverse the rotation about z
        let r = orbit_sample(&z3(), GroupSweep::O3Reflections, 1).unwrap();
        assert_eq!(r.points[1], -z3());
    }

    #[test]
    fn leaf_examples() {
        let m = leaf_membership(&u().scale(3.0), AlgebraName::So2).unwrap();
        assert!(m.on_leaf);
        assert_eq!(m.x, 3.0);
        let m = leaf_membership(&SquareMatrix::zeros(2), AlgebraName::So2).unwrap();
        assert!(!m.on_leaf);
        assert_eq!(m.x, 0.0);
        assert!(!leaf_membership(&u().scale(-1.0), AlgebraName::So2).unwrap().on_leaf);
        assert!(!leaf_membership(&e1(), AlgebraName::So2).unwrap().on_leaf);
        assert!(!leaf_membership(&(&z3() + &z1()), AlgebraName::So3).unwrap().on_leaf);
        assert!(leaf_membership(&z3().scale(0.25), AlgebraName::So3).unwrap().on_leaf);
    }

    #[test]
    fn kks_examples() {
        assert_eq!(kks_form(&z3(), &z1(), &z2(), PairingConvention::Half).unwrap(), 1.0);
        assert_eq!(kks_form(&z3(), &z1(), &z1(), PairingConvention::Half).unwrap(), 0.0);
        assert_eq!(
            kks_form(&u(), &u(), &u().scale(2.0), PairingConvention::One).unwrap(),
            0.0
        );
    }

    #[test]
    fn bracket_examples() {
        let ev = PoissonEvaluator::kks(builtin(AlgebraName::So3).unwrap(), PairingConvention::Half);
        let f = DualFunction::linear(z1());
        let g = DualFunction::linear(z2());
        assert_eq!(ev.bracket(&f, &g, &z3()).unwrap(), 1.0);
        assert_eq!(ev.bracket(&f, &f, &z3()).unwrap(), 0.0);
        let xi = &z1().scale(0.3) + &z3().scale(-1.2);
        assert!(ev.bracket(&DualFunction::Casimir, &g, &xi).unwrap().abs() < 1e-10);
        assert!(ev.bracket(&f, &g, &e1().scale(0.0)).is_err());
    }

    #[test]
    fn fd_gradient_of_casimir() {
        let ev = PoissonEvaluator::kks(builtin(AlgebraName::So3).unwrap(), PairingConvention::One);
        let xi = &z1().scale(0.7) + &z2().scale(-0.4);
        let c = DualFunction::field(|x: &SquareMatrix| pairing(x, x, PairingConvention::One).unwrap());
        let g = ev.gradient(&c, &xi).unwrap();
        assert!(g.approx_eq(&xi.scale(2.0), 1e-9));
    }

    #[test]
    fn product_rule_matches_finite_differences() {
        let ev = PoissonEvaluator::kks(builtin(AlgebraName::So3).unwrap(), PairingConvention::Half);
        let xi = &z1().scale(0.3) + &z3().scale(1.1);
        let (f, g) = (
            DualFunction::linear(z2().scale(2.0)),
            DualFunction::linear(&z1() + &z3()),
        );
        let exact = ev.gradient(&f.clone().times(g.clone()), &xi).unwrap();
        let fd = ev
            .gradient(
                &DualFunction::field(move |x: &SquareMatrix| {
                    f.value(x, PairingConvention::Half).unwrap() * g.value(x, PairingConvention::Half).unwrap()
                }),
                &xi,
            )
            .unwrap();
        assert!(exact.approx_eq(&fd, 1e-8));
    }

    #[test]
    fn linear_bracket_closes() {
        let ev = PoissonEvaluator::kks(builtin(AlgebraName::So3).unwrap(), PairingConvention::Half);
        match ev.bracket_linear(&z1(), &z2()).unwrap() {
            Some(DualFunction::Linear(m)) => assert_eq!(m, z3()),
            other => panic!("unexpected {other:?}"),
        }
    }
}

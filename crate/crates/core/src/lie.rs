//! Built-in matrix Lie algebras (so(2), so(3), sl(2,ℝ)), the orthogonal
//! groups acting on them, and Cartan decompositions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{commutator, matrix_exp, pairing, solve_dense, PairingConvention, SquareMatrix, ALGEBRAIC_TOL};
use crate::thermo::AlgebraCocycle;

/// Rotation generator of so(2): `[[0,-1],[1,0]]`.
pub fn u() -> SquareMatrix {
    SquareMatrix::from_rows([[0.0, -1.0], [1.0, 0.0]])
}

/// `v = -u`.
pub fn v() -> SquareMatrix {
    SquareMatrix::from_rows([[0.0, 1.0], [-1.0, 0.0]])
}

/// First symmetric traceless generator, `[[0,1],[1,0]]`.
pub fn e1() -> SquareMatrix {
    SquareMatrix::from_rows([[0.0, 1.0], [1.0, 0.0]])
}

/// Second symmetric traceless generator, `[[1,0],[0,-1]]`.
pub fn e2() -> SquareMatrix {
    SquareMatrix::from_rows([[1.0, 0.0], [0.0, -1.0]])
}

/// Infinitesimal rotation about the x axis.
pub fn z1() -> SquareMatrix {
    SquareMatrix::from_rows([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
}

/// Infinitesimal rotation about the y axis.
pub fn z2() -> SquareMatrix {
    SquareMatrix::from_rows([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
}

/// Infinitesimal rotation about the z axis; the so(3) cone direction.
pub fn z3() -> SquareMatrix {
    SquareMatrix::from_rows([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
}

/// The reflection `diag(1,1,-1)` in O(3).
pub fn j_reflection() -> SquareMatrix {
    SquareMatrix::from_rows([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraName {
    So2,
    So3,
    Sl2,
}

impl AlgebraName {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraName::So2 => "so2",
            AlgebraName::So3 => "so3",
            AlgebraName::Sl2 => "sl2",
        }
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgebraName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "so2" => Ok(AlgebraName::So2),
            "so3" => Ok(AlgebraName::So3),
            "sl2" => Ok(AlgebraName::Sl2),
            other => domain(format!("unknown algebra {other:?} (expected so2, so3 or sl2)")),
        }
    }
}

/// A matrix Lie algebra with an ordered basis and the structure constants
/// `[B_i, B_j] = Σ_k c[i][j][k] B_k` derived from the basis matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraSpec {
    pub name: AlgebraName,
    pub dim_matrix: usize,
    pub labels: Vec<&'static str>,
    pub basis: Vec<SquareMatrix>,
    pub structure_constants: Vec<Vec<Vec<f64>>>,
}

impl LieAlgebraSpec {
    /// Builds an algebra from basis matrices, computing structure constants
    /// and checking linear independence and closure under the bracket.
    pub fn from_basis(name: AlgebraName, labels: Vec<&'static str>, basis: Vec<SquareMatrix>) -> Result<Self> {
        let dim_matrix = basis
            .first()
            .map(SquareMatrix::dim)
            .ok_or_else(|| Error::Domain("empty basis".into()))?;
        if basis.iter().any(|b| b.dim() != dim_matrix) || labels.len() != basis.len() {
            return domain("basis matrices must share one dimension and carry one label each");
        }
        let mut alg = Self {
            name,
            dim_matrix,
            labels,
            basis,
            structure_constants: Vec::new(),
        };
        let gram = alg.gram();
        let n = alg.dim();
        if gram_determinant(&gram, n).abs() <= ALGEBRAIC_TOL {
            return Err(Error::Structure("basis is linearly dependent".into()));
        }
        let mut c = vec![vec![vec![0.0; n]; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let br = commutator(&alg.basis[i], &alg.basis[j])?;
                let coords = alg.coordinates(&br)?;
                let residual = alg.from_coordinates(&coords).distance(&br);
                if residual > ALGEBRAIC_TOL * (1.0 + br.frobenius_norm()) {
                    return Err(Error::Structure(format!(
                        "[{}, {}] leaves the span (residual {residual:e})",
                        alg.labels[i], alg.labels[j]
                    )));
                }
                *slot = coords;
            }
        }
        alg.structure_constants = c;
        Ok(alg)
    }

    /// Dimension of the algebra (number of basis elements).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn gram(&self) -> Vec<f64> {
        let n = self.dim();
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = pairing(&self.basis[i], &self.basis[j], PairingConvention::Half).unwrap();
            }
        }
        g
    }

    /// Coordinates of the orthogonal projection of `x` onto the span of the
    /// basis (Gram system under the `s = 1/2` pairing).
    pub fn coordinates(&self, x: &SquareMatrix) -> Result<Vec<f64>> {
        if x.dim() != self.dim_matrix {
            return domain(format!("{}x{} matrix given to {}", x.dim(), x.dim(), self.name));
        }
        let rhs: Vec<f64> = self
            .basis
            .iter()
            .map(|b| pairing(b, x, PairingConvention::Half).unwrap())
            .collect();
        solve_dense(&self.gram(), &rhs)
    }

    pub fn from_coordinates(&self, coords: &[f64]) -> SquareMatrix {
        coords
            .iter()
            .zip(&self.basis)
            .fold(SquareMatrix::zeros(self.dim_matrix), |acc, (c, b)| &acc + &b.scale(*c))
    }

    /// Distance from `x` to the span of the basis.
    pub fn membership_residual(&self, x: &SquareMatrix) -> Result<f64> {
        let c = self.coordinates(x)?;
        Ok(self.from_coordinates(&c).distance(x))
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> SquareMatrix {
        let coords: Vec<f64> = (0..self.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        self.from_coordinates(&coords)
    }
}

fn gram_determinant(g: &[f64], n: usize) -> f64 {
    SquareMatrix::new(n, g.to_vec()).map(|m| m.determinant()).unwrap_or(0.0)
}

/// One of the three built-in algebras.
///
/// `so2 = {u}`, `sl2 = {u, e1, e2}` (the so(2) part adjoined to the
/// symmetric complement), `so3 = {Z1, Z2, Z3}`.
pub fn builtin_algebra(name: &str) -> Result<LieAlgebraSpec> {
    builtin(name.parse()?)
}

pub fn builtin(name: AlgebraName) -> Result<LieAlgebraSpec> {
    match name {
        AlgebraName::So2 => LieAlgebraSpec::from_basis(name, vec!["u"], vec![u()]),
        AlgebraName::Sl2 => LieAlgebraSpec::from_basis(name, vec!["u", "e1", "e2"], vec![u(), e1(), e2()]),
        AlgebraName::So3 => LieAlgebraSpec::from_basis(name, vec!["Z1", "Z2", "Z3"], vec![z1(), z2(), z3()]),
    }
}

fn jacobi_sum(x: &SquareMatrix, y: &SquareMatrix, z: &SquareMatrix) -> f64 {
    let t1 = commutator(x, &commutator(y, z).unwrap()).unwrap();
    let t2 = commutator(y, &commutator(z, x).unwrap()).unwrap();
    let t3 = commutator(z, &commutator(x, y).unwrap()).unwrap();
    (&(&t1 + &t2) + &t3).frobenius_norm()
}

/// Largest Frobenius norm of the Jacobi cyclic sum over every basis triple
/// and `samples` random triples of linear combinations.
pub fn jacobi_check(alg: &LieAlgebraSpec, samples: usize, seed: u64) -> f64 {
    let mut worst = 0.0f64;
    for x in &alg.basis {
        for y in &alg.basis {
            for z in &alg.basis {
                worst = worst.max(jacobi_sum(x, y, z));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = alg.random_element(&mut rng);
        let y = alg.random_element(&mut rng);
        let z = alg.random_element(&mut rng);
        worst = worst.max(jacobi_sum(&x, &y, &z));
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    SO2,
    SO3,
    O3,
}

impl GroupKind {
    pub fn matrix_dim(self) -> usize {
        match self {
            GroupKind::SO2 => 2,
            GroupKind::SO3 | GroupKind::O3 => 3,
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SO2" | "so2" => Ok(GroupKind::SO2),
            "SO3" | "so3" => Ok(GroupKind::SO3),
            "O3" | "o3" => Ok(GroupKind::O3),
            other => domain(format!("unknown group {other:?}")),
        }
    }
}

/// An orthogonal matrix tagged with the group it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: SquareMatrix,
    group: GroupKind,
}

impl GroupElement {
    /// Checks `gᵀg = I` to 1e-10, `det = ±1`, and `det = +1` for SO groups.
    pub fn new(matrix: SquareMatrix, group: GroupKind) -> Result<Self> {
        if matrix.dim() != group.matrix_dim() {
            return domain(format!(
                "{:?} needs {}x{} matrices",
                group,
                group.matrix_dim(),
                group.matrix_dim()
            ));
        }
        let n = matrix.dim();
        let defect = (&matrix.transpose() * &matrix).distance(&SquareMatrix::identity(n));
        if defect > 1e-10 {
            return domain(format!("group element is not orthogonal (defect {defect:e})"));
        }
        let det = matrix.determinant();
        let det_ok = match group {
            GroupKind::SO2 | GroupKind::SO3 => (det - 1.0).abs() <= 1e-10,
            GroupKind::O3 => (det.abs() - 1.0).abs() <= 1e-10,
        };
        if !det_ok {
            return domain(format!("determinant {det} not allowed in {group:?}"));
        }
        Ok(Self { matrix, group })
    }

    pub fn identity(group: GroupKind) -> Self {
        Self {
            matrix: SquareMatrix::identity(group.matrix_dim()),
            group,
        }
    }

    pub fn j() -> Self {
        Self {
            matrix: j_reflection(),
            group: GroupKind::O3,
        }
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        let group = if self.group == GroupKind::O3 || other.group == GroupKind::O3 {
            GroupKind::O3
        } else {
            self.group
        };
        GroupElement::new(self.matrix.try_mul(&other.matrix)?, group)
    }
}

fn check_action_dim(g: &GroupElement, x: &SquareMatrix) -> Result<()> {
    if g.matrix.dim() != x.dim() {
        return domain(format!(
            "group element is {}x{}, algebra element {}x{}",
            g.matrix.dim(),
            g.matrix.dim(),
            x.dim(),
            x.dim()
        ));
    }
    Ok(())
}

/// `Ad_g(X) = g X g⁻¹`, with `g⁻¹ = gᵀ`.
pub fn adjoint_group(g: &GroupElement, x: &SquareMatrix) -> Result<SquareMatrix> {
    check_action_dim(g, x)?;
    Ok(&(&g.matrix * x) * &g.matrix.transpose())
}

/// `Ad*_g(ξ) = g⁻¹ ξ g` on dual elements represented through the pairing.
pub fn coadjoint_group(g: &GroupElement, xi: &SquareMatrix) -> Result<SquareMatrix> {
    check_action_dim(g, xi)?;
    Ok(&(&g.matrix.transpose() * xi) * &g.matrix)
}

/// Group samples used by equivariance and orbit sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupSweep {
    /// `exp(t·u)` for `n` uniform `t ∈ [0, 2π)`.
    So2,
    /// `exp(t·Z_k)` for each generator `Z_k`, `n` uniform `t` per generator.
    So3,
    /// `J·exp(t·Z3)` for `n` uniform `t`, starting with `J` itself.
    JConjugation,
    /// The three coordinate reflections `diag(1,1,-1)`, `diag(1,-1,1)`, `diag(-1,1,1)`.
    O3Reflections,
}

impl GroupSweep {
    pub fn group(self) -> GroupKind {
        match self {
            GroupSweep::So2 => GroupKind::SO2,
            GroupSweep::So3 => GroupKind::SO3,
            GroupSweep::JConjugation | GroupSweep::O3Reflections => GroupKind::O3,
        }
    }

    pub fn elements(self, n: usize) -> Vec<GroupElement> {
        let ts = (0..n).map(move |k| 2.0 * PI * k as f64 / n as f64);
        let rot = |gen: SquareMatrix, kind: GroupKind| {
            ts.clone()
                .map(move |t| GroupElement::new(matrix_exp(&gen.scale(t)), kind).expect("rotation is orthogonal"))
        };
        match self {
            GroupSweep::So2 => rot(u(), GroupKind::SO2).collect(),
            GroupSweep::So3 => [z1(), z2(), z3()]
                .into_iter()
                .flat_map(|z| rot(z, GroupKind::SO3))
                .collect(),
            GroupSweep::JConjugation => rot(z3(), GroupKind::SO3)
                .map(|r| GroupElement::j().compose(&r).expect("dimensions agree"))
                .collect(),
            GroupSweep::O3Reflections => [[1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0]]
                .into_iter()
                .map(|d| {
                    let m = SquareMatrix::from_rows([[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]);
                    GroupElement::new(m, GroupKind::O3).unwrap()
                })
                .collect(),
        }
    }
}

/// `g = k ⊕ p`, the ±1 eigenspaces of an involutive cocycle.
#[derive(Debug, Clone)]
pub struct CartanSplit {
    pub k_basis: Vec<SquareMatrix>,
    pub p_basis: Vec<SquareMatrix>,
    pub involution: AlgebraCocycle,
    /// Largest residual among the inclusions `[k,k] ⊆ k`, `[k,p] ⊆ p`, `[p,p] ⊆ k`.
    pub inclusion_residual: f64,
}

/// Splits `alg` into the ±1 eigenspaces of `involution`.
///
/// The involution is applied to each basis element and extended linearly.
/// Fails with a domain error if it does not square to the identity on the
/// basis, and with a structure error if a bracket inclusion fails.
pub fn cartan_split(alg: &LieAlgebraSpec, involution: &AlgebraCocycle) -> Result<CartanSplit> {
    let n = alg.dim();
    let m = involution.linear_map(alg)?;
    // m is column-major in the sense m[j] = coords of Θ(B_j)
    let apply = |c: &[f64]| -> Vec<f64> { (0..n).map(|i| (0..n).map(|j| m[j][i] * c[j]).sum()).collect() };
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let back = apply(&apply(&e));
        let defect: f64 = back.iter().zip(&e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if defect > ALGEBRAIC_TOL {
            return domain(format!(
                "cocycle is not an involution on {} (defect {defect:e})",
                alg.labels[j]
            ));
        }
    }
    let eigen_basis = |sign: f64| -> Vec<SquareMatrix> {
        let mut kept: Vec<Vec<f64>> = Vec::new();
        let mut orth: Vec<Vec<f64>> = Vec::new();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let img = apply(&e);
            let proj: Vec<f64> = e.iter().zip(&img).map(|(a, b)| 0.5 * (a + sign * b)).collect();
            let mut r = proj.clone();
            for q in &orth {
                let d: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
                r.iter_mut().zip(q).for_each(|(a, b)| *a -= d * b);
            }
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-9 {
                orth.push(r.iter().map(|x| x / norm).collect());
                kept.push(proj);
            }
        }
        kept.iter().map(|c| alg.from_coordinates(c)).collect()
    };
    let k_basis = eigen_basis(1.0);
    let p_basis = eigen_basis(-1.0);

    // residual of the component of x outside the eigenspace with the given sign
    let off_component = |x: &SquareMatrix, sign: f64| -> Result<f64> {
        let c = alg.coordinates(x)?;
        let img = apply(&c);
        let other: Vec<f64> = c.iter().zip(&img).map(|(a, b)| 0.5 * (a - sign * b)).collect();
        Ok(alg.from_coordinates(&other).frobenius_norm() + alg.from_coordinates(&c).distance(x))
    };
    let mut worst = 0.0f64;
    for (left, right, target) in [
        (&k_basis, &k_basis, 1.0),
        (&k_basis, &p_basis, -1.0),
        (&p_basis, &p_basis, 1.0),
    ] {
        for x in left.iter() {
            for y in right.iter() {
                worst = worst.max(off_component(&commutator(x, y)?, target)?);
            }
        }
    }
    if worst >= ALGEBRAIC_TOL {
        return Err(Error::Structure(format!(
            "Cartan bracket inclusion fails (residual {worst:e})"
        )));
    }
    Ok(CartanSplit {
        k_basis,
        p_basis,
        involution: involution.clone(),
        inclusion_residual: worst,
    })
}

/// A bracket identity stated in the reference derivation, next to the value
/// computed from the basis matrices.
#[derive(Debug, Clone)]
pub struct BracketClaim {
    pub label: &'static str,
    pub claimed: SquareMatrix,
    pub computed: SquareMatrix,
}

impl BracketClaim {
    pub fn holds(&self) -> bool {
        self.claimed.approx_eq(&self.computed, ALGEBRAIC_TOL)
    }
}

/// so(3) bracket identities as stated in the reference derivation, evaluated
/// at cone parameter `a`. Brackets are always taken from the matrices; this
/// list exists so the mismatching statements can be reported.
pub fn so3_reference_claims(a: f64) -> Vec<BracketClaim> {
    let beta = z3().scale(a);
    let br = |x: &SquareMatrix, y: &SquareMatrix| commutator(x, y).unwrap();
    vec![
        BracketClaim {
            label: "[Z3,Z1] = Z2",
            claimed: z2(),
            computed: br(&z3(), &z1()),
        },
        BracketClaim {
            label: "[Z1,Z2] = Z3",
            claimed: z3(),
            computed: br(&z1(), &z2()),
        },
        BracketClaim {
            label: "[Z2,Z1] = Z3",
            claimed: z3(),
            computed: br(&z2(), &z1()),
        },
        BracketClaim {
            label: "[beta,Z1] = a Z2",
            claimed: z2().scale(a),
            computed: br(&beta, &z1()),
        },
        BracketClaim {
            label: "[beta,Z2] = a Z1",
            claimed: z1().scale(a),
            computed: br(&beta, &z2()),
        },
        BracketClaim {
            label: "[beta,Z3] = 0",
            claimed: SquareMatrix::zeros(3),
            computed: br(&beta, &z3()),
        },
        BracketClaim {
            label: "[Z1,[beta,Z1]] = a Z3",
            claimed: z3().scale(a),
            computed: br(&z1(), &br(&beta, &z1())),
        },
        BracketClaim {
            label: "[Z2,[beta,Z2]] = -a Z3",
            claimed: z3().scale(-a),
            computed: br(&z2(), &br(&beta, &z2())),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so3_brackets_from_matrices() {
        let alg = builtin_algebra("so3").unwrap();
        // [Z1,Z2] = Z3
        assert_eq!(alg.structure_constants[0][1], vec![0.0, 0.0, 1.0]);
        // [Z3,Z1] = Z2
        assert_eq!(alg.structure_constants[2][0], vec![0.0, 1.0, 0.0]);
        // antisymmetry forces [Z2,Z1] = -Z3
        assert_eq!(alg.structure_constants[1][0], vec![0.0, 0.0, -1.0]);
    }

    #[test]
    fn so2_is_abelian() {
        let alg = builtin_algebra("so2").unwrap();
        assert_eq!(alg.dim(), 1);
        assert_eq!(alg.structure_constants, vec![vec![vec![0.0]]]);
    }

    #[test]
    fn sl2_brackets() {
        let alg = builtin_algebra("sl2").unwrap();
        // [e1,e2] = 2u
        assert_eq!(alg.structure_constants[1][2], vec![2.0, 0.0, 0.0]);
        // [u,e1] = -2 e2, [u,e2] = 2 e1
        assert_eq!(alg.structure_constants[0][1], vec![0.0, 0.0, -2.0]);
        assert_eq!(alg.structure_constants[0][2], vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn unknown_algebra_rejected() {
        assert!(matches!(builtin_algebra("so4"), Err(Error::Domain(_))));
    }

    #[test]
    fn dependent_or_open_basis_rejected() {
        let dep = LieAlgebraSpec::from_basis(AlgebraName::So2, vec!["u", "2u"], vec![u(), u().scale(2.0)]);
        assert!(matches!(dep, Err(Error::Structure(_))));
        // {e1, e2} alone is not closed: [e1,e2] = 2u
        let open = LieAlgebraSpec::from_basis(AlgebraName::Sl2, vec!["e1", "e2"], vec![e1(), e2()]);
        assert!(matches!(open, Err(Error::Structure(_))));
    }

    #[test]
    fn jacobi_residuals() {
        for name in ["so2", "so3", "sl2"] {
            let alg = builtin_algebra(name).unwrap();
            assert!(jacobi_check(&alg, 50, 7) < 1e-12, "{name}");
        }
        let x = z1();
        assert_eq!(jacobi_sum(&x, &x, &z2()), 0.0);
    }

    #[test]
    fn adjoint_actions() {
        let g = GroupSweep::So2.elements(100);
        let beta = u().scale(1.3);
        for gi in &g {
            assert!(adjoint_group(gi, &beta).unwrap().approx_eq(&beta, 1e-12));
            assert!(coadjoint_group(gi, &beta).unwrap().approx_eq(&beta, 1e-12));
        }
        let id = GroupElement::identity(GroupKind::SO3);
        assert_eq!(adjoint_group(&id, &z2()).unwrap(), z2());
        assert_eq!(adjoint_group(&GroupElement::j(), &z1()).unwrap(), -z1());
        let xi = z3().scale(2.5);
        assert_eq!(coadjoint_group(&GroupElement::j(), &xi).unwrap(), xi);
        assert!(adjoint_group(&GroupElement::j(), &u()).is_err());
    }

    #[test]
    fn group_element_validation() {
        let shear = SquareMatrix::from_rows([[1.0, 1.0], [0.0, 1.0]]);
        assert!(GroupElement::new(shear, GroupKind::SO2).is_err());
        assert!(GroupElement::new(j_reflection(), GroupKind::SO3).is_err());
        assert!(GroupElement::new(j_reflection(), GroupKind::O3).is_ok());
        assert!(GroupElement::new(SquareMatrix::identity(2), GroupKind::O3).is_err());
    }

    #[test]
    fn sweeps_have_expected_sizes() {
        assert_eq!(GroupSweep::So2.elements(100).len(), 100);
        assert_eq!(GroupSweep::So3.elements(10).len(), 30);
        let js = GroupSweep::JConjugation.elements(5);
        assert_eq!(js[0].matrix(), &j_reflection());
        assert!(js.iter().all(|g| (g.matrix().determinant() + 1.0).abs() < 1e-12));
        assert_eq!(GroupSweep::O3Reflections.elements(1).len(), 3);
    }

    #[test]
    fn cartan_split_sl2_and_so3() {
        let sl2 = builtin_algebra("sl2").unwrap();
        let split = cartan_split(&sl2, &AlgebraCocycle::NegInverse).unwrap();
        assert_eq!(split.k_basis, vec![u()]);
        assert_eq!(split.p_basis, vec![e1(), e2()]);

        let so3 = builtin_algebra("so3").unwrap();
        let split = cartan_split(&so3, &AlgebraCocycle::ad_j()).unwrap();
        assert_eq!(split.k_basis, vec![z3()]);
        assert_eq!(split.p_basis, vec![z1(), z2()]);
        assert!(split.inclusion_residual < 1e-12);
    }

    #[test]
    fn cartan_split_identity_involution() {
        let so3 = builtin_algebra("so3").unwrap();
        let id = AlgebraCocycle::AdJ(GroupElement::identity(GroupKind::O3));
        let split = cartan_split(&so3, &id).unwrap();
        assert_eq!(split.k_basis.len(), 3);
        assert!(split.p_basis.is_empty());
    }

    #[test]
    fn cartan_split_rejects_non_involution() {
        // a quarter turn about z maps Z1 -> Z2 -> -Z1: squares to -1 on p
        let r = GroupElement::new(matrix_exp(&z3().scale(PI / 2.0)), GroupKind::O3).unwrap();
        let so3 = builtin_algebra("so3").unwrap();
        assert!(matches!(
            cartan_split(&so3, &AlgebraCocycle::AdJ(r)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn reference_claims_flag_the_sign_slips() {
        let failing: Vec<_> = so3_reference_claims(2.0)
            .into_iter()
            .filter(|c| !c.holds())
            .map(|c| c.label)
            .collect();
        assert_eq!(
            failing,
            vec!["[Z2,Z1] = Z3", "[beta,Z2] = a Z1", "[Z2,[beta,Z2]] = -a Z3"]
        );
    }
}

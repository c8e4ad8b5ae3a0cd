//! Small dense real matrices.
//!
//! Everything in this crate is carried by [`SquareMatrix`]: algebra elements,
//! group elements, dual-space elements (identified with the algebra through
//! the trace pairing) and metric tables. Storage is row-major. Equality is
//! entrywise within a caller-chosen tolerance tier; see [`ALGEBRAIC_TOL`],
//! [`QUADRATURE_TOL`] and [`FINITE_DIFF_TOL`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Tier for identities that are exact in real arithmetic.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tier for results produced by numerical quadrature.
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Tier for results produced by finite differences.
pub const FINITE_DIFF_TOL: f64 = 1e-6;

/// Relative truncation tolerance of the exponential series.
const EXP_SERIES_TOL: f64 = 1e-13;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    /// Builds a matrix from row-major entries. Fails unless `entries.len() == dim²`,
    /// `dim >= 1` and every entry is finite.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return domain("matrix dimension must be at least 1");
        }
        if entries.len() != dim * dim {
            return domain(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            ));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite matrix entry".into()));
        }
        Ok(Self { dim, entries })
    }

    /// Panics on ragged or non-finite input; meant for literals.
    pub fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let entries = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(N, entries).expect("invalid matrix literal")
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|x| x.is_finite())
    }

    /// `true` when `‖X + Xᵀ‖_F <= tol`.
    pub fn is_skew(&self, tol: f64) -> bool {
        (self + &self.transpose()).frobenius_norm() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Frobenius distance; `f64::INFINITY` for mismatched dimensions.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        (self - other).frobenius_norm()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_same_dim(self, other)?;
        Ok(self * other)
    }

    pub fn determinant(&self) -> f64 {
        let m = |i, j| self.get(i, j);
        match self.dim {
            1 => m(0, 0),
            2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
            3 => {
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
            n => {
                // Gaussian elimination with partial pivoting.
                let mut a = self.entries.clone();
                let mut det = 1.0;
                for col in 0..n {
                    let pivot = (col..n)
                        .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
                        .unwrap();
                    if a[pivot * n + col] == 0.0 {
                        return 0.0;
                    }
                    if pivot != col {
                        for k in 0..n {
                            a.swap(col * n + k, pivot * n + k);
                        }
                        det = -det;
                    }
                    let p = a[col * n + col];
                    det *= p;
                    for r in col + 1..n {
                        let f = a[r * n + col] / p;
                        for k in col..n {
                            a[r * n + k] -= f * a[col * n + k];
                        }
                    }
                }
                det
            }
        }
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

fn check_same_dim(x: &SquareMatrix, y: &SquareMatrix) -> Result<()> {
    if x.dim != y.dim {
        return domain(format!("dimension mismatch: {} vs {}", x.dim, y.dim));
    }
    Ok(())
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;
    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;
    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl Mul<f64> for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: f64) -> SquareMatrix {
        self.scale(rhs)
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }
}

impl Neg for SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        -&self
    }
}

/// Scale `s` of the trace pairing `⟨X,Y⟩ = s·tr(XᵀY)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingConvention {
    /// `s = 1/2`, so that `⟨β,β⟩ = a²` for `β = a·u`.
    Half,
    /// `s = 1`, the bare trace form.
    One,
}

impl PairingConvention {
    pub const ALL: [PairingConvention; 2] = [PairingConvention::Half, PairingConvention::One];

    pub fn scale(self) -> f64 {
        match self {
            PairingConvention::Half => 0.5,
            PairingConvention::One => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PairingConvention::Half => "half",
            PairingConvention::One => "one",
        }
    }
}

/// `[X,Y] = XY − YX`.
pub fn commutator(x: &SquareMatrix, y: &SquareMatrix) -> Result<SquareMatrix> {
    check_same_dim(x, y)?;
    Ok(&(x * y) - &(y * x))
}

/// `s·tr(XᵀY)`, computed as `s·Σ X_ij Y_ij`.
pub fn pairing(x: &SquareMatrix, y: &SquareMatrix, conv: PairingConvention) -> Result<f64> {
    check_same_dim(x, y)?;
    Ok(conv.scale() * x.entries.iter().zip(&y.entries).map(|(a, b)| a * b).sum::<f64>())
}

/// Matrix exponential.
///
/// Skew-symmetric 2×2 and 3×3 inputs go through the closed planar rotation and
/// Rodrigues formulas, so their images are rotations to rounding. Everything
/// else uses scaling and squaring of the Taylor series.
pub fn matrix_exp(x: &SquareMatrix) -> SquareMatrix {
    let n = x.dim();
    let skew_tol = 1e-14 * (1.0 + x.frobenius_norm());
    if n == 2 && x.is_skew(skew_tol) {
        let theta = 0.5 * (x.get(1, 0) - x.get(0, 1));
        let (s, c) = theta.sin_cos();
        return SquareMatrix::from_rows([[c, -s], [s, c]]);
    }
    if n == 3 && x.is_skew(skew_tol) {
        return rodrigues(x);
    }
    exp_scaling_squaring(x)
}

fn rodrigues(k: &SquareMatrix) -> SquareMatrix {
    // axis vector of the skew matrix
    let wx = 0.5 * (k.get(2, 1) - k.get(1, 2));
    let wy = 0.5 * (k.get(0, 2) - k.get(2, 0));
    let wz = 0.5 * (k.get(1, 0) - k.get(0, 1));
    let theta2 = wx * wx + wy * wy + wz * wz;
    let theta = theta2.sqrt();
    let (a, b) = if theta < 1e-6 {
        (
            1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0,
            0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0,
        )
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    let kk = SquareMatrix::from_rows([[0.0, -wz, wy], [wz, 0.0, -wx], [-wy, wx, 0.0]]);
    let k2 = &kk * &kk;
    &(&SquareMatrix::identity(3) + &kk.scale(a)) + &k2.scale(b)
}

fn exp_scaling_squaring(x: &SquareMatrix) -> SquareMatrix {
    let n = x.dim();
    let norm = x.frobenius_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let y = x.scale(0.5f64.powi(squarings as i32));
    let mut sum = SquareMatrix::identity(n);
    let mut term = SquareMatrix::identity(n);
    for k in 1..64 {
        term = (&term * &y).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.frobenius_norm() <= EXP_SERIES_TOL * sum.frobenius_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Inverse of a 2×2 or 3×3 matrix via the adjugate.
///
/// Rejects matrices with `|det| <= 1e-12·‖X‖_F^dim`.
pub fn inverse2or3(x: &SquareMatrix) -> Result<SquareMatrix> {
    let n = x.dim();
    if n != 2 && n != 3 {
        return domain(format!("inverse2or3 needs a 2x2 or 3x3 matrix, got {n}x{n}"));
    }
    let det = x.determinant();
    let scale = x.frobenius_norm().powi(n as i32);
    if det.abs() <= ALGEBRAIC_TOL * scale || det == 0.0 {
        return Err(Error::Singular { det });
    }
    let m = |i, j| x.get(i, j);
    let adj = if n == 2 {
        SquareMatrix::from_rows([[m(1, 1), -m(0, 1)], [-m(1, 0), m(0, 0)]])
    } else {
        let c = |r0: usize, r1: usize, c0: usize, c1: usize| m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
        SquareMatrix::from_rows([
            [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
            [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
            [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
        ])
    };
    Ok(adj.scale(1.0 / det))
}

/// Solves `A·x = b` for a small dense system (row-major `a`, `n×n`) by
/// Gaussian elimination with partial pivoting.
pub fn solve_dense(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n * n {
        return domain("solve_dense: system shape mismatch");
    }
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| m[r * n + col].abs().total_cmp(&m[s * n + col].abs()))
            .unwrap();
        if m[pivot * n + col].abs() <= 1e-14 * scale {
            return Err(Error::Singular { det: 0.0 });
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            rhs.swap(col, pivot);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col] / m[col * n + col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                m[r * n + k] -= f * m[col * n + k];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    Ok((0..n).map(|i| rhs[i] / m[i * n + i]).collect())
}

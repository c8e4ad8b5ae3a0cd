//! Exact rational arithmetic for small matrices.
//!
//! Every closed-form quantity in this crate is polynomial or rational in the
//! cone parameter `a`, so evaluating at rational `a` with rational matrices
//! gives exact reference values. Verification oracles use this module; the
//! floating-point code paths never do.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::linalg::SquareMatrix;

pub type Q = Rational64;

pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(numer, denom)
}

pub fn qi(value: i64) -> Q {
    Q::from_integer(value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Q>,
}

impl RationalMatrix {
    pub fn new(dim: usize, entries: Vec<Q>) -> Self {
        assert!(dim >= 1 && entries.len() == dim * dim, "bad rational matrix shape");
        Self { dim, entries }
    }

    pub fn from_int_rows<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self::new(N, rows.iter().flat_map(|r| r.iter().map(|&v| qi(v))).collect())
    }

    /// Converts a float matrix whose entries are dyadic rationals with
    /// denominators up to 2^20 (integers, halves, quarters...).
    pub fn from_f64(m: &SquareMatrix) -> Result<Self> {
        let entries = m
            .entries()
            .iter()
            .map(|&x| {
                Q::approximate_float(x)
                    .filter(|r| {
                        (*r.numer() as f64 / *r.denom() as f64) == x
                            && *r.denom() <= 1 << 20
                            && (*r.denom() as u64).is_power_of_two()
                    })
                    .ok_or_else(|| Error::Numeric(format!("{x} has no small exact rational form")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(m.dim(), entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(dim, vec![Q::zero(); dim * dim])
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Q::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Q {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    pub fn scale(&self, factor: Q) -> Self {
        Self::new(self.dim, self.entries.iter().map(|x| x * factor).collect())
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        Self::new(n, (0..n * n).map(|k| self.get(k % n, k / n)).collect())
    }

    pub fn trace(&self) -> Q {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> Q {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn to_f64(&self) -> SquareMatrix {
        let entries = self
            .entries
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect();
        SquareMatrix::new(self.dim, entries).expect("rational entries are finite")
    }

    pub fn determinant(&self) -> Q {
        let m = |i, j| self.get(i, j);
        match self.dim {
            1 => m(0, 0),
            2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
            3 => {
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
            _ => unimplemented!("exact determinant only for dim <= 3"),
        }
    }

    /// Inverse for dim 2 and 3.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.determinant();
        if det.is_zero() {
            return Err(Error::Singular { det: 0.0 });
        }
        let m = |i, j| self.get(i, j);
        let adj = match self.dim {
            2 => Self::new(2, vec![m(1, 1), -m(0, 1), -m(1, 0), m(0, 0)]),
            3 => {
                let c = |r0: usize, r1: usize, c0: usize, c1: usize| m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
                Self::new(
                    3,
                    vec![
                        c(1, 2, 1, 2),
                        -c(0, 2, 1, 2),
                        c(0, 1, 1, 2),
                        -c(1, 2, 0, 2),
                        c(0, 2, 0, 2),
                        -c(0, 1, 0, 2),
                        c(1, 2, 0, 1),
                        -c(0, 2, 0, 1),
                        c(0, 1, 0, 1),
                    ],
                )
            }
            n => return domain(format!("exact inverse needs dim 2 or 3, got {n}")),
        };
        Ok(adj.scale(det.recip()))
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;
    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim);
        RationalMatrix::new(
            self.dim,
            self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;
    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim);
        RationalMatrix::new(
            self.dim,
            self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = RationalMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum();
            }
        }
        out
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;
    fn neg(self) -> RationalMatrix {
        RationalMatrix::new(self.dim, self.entries.iter().map(|x| -x).collect())
    }
}

pub fn commutator(x: &RationalMatrix, y: &RationalMatrix) -> RationalMatrix {
    &(x * y) - &(y * x)
}

/// `s·tr(XᵀY)` with an exact scale.
pub fn pairing(x: &RationalMatrix, y: &RationalMatrix, scale: Q) -> Q {
    assert_eq!(x.dim, y.dim);
    scale * x.entries.iter().zip(&y.entries).map(|(a, b)| a * b).sum::<Q>()
}

/// Coordinates of `x` in `basis`, by exact solution of the Gram system under
/// the pairing with scale 1/2. Fails when `x` is not in the span.
pub fn coordinates(basis: &[RationalMatrix], x: &RationalMatrix) -> Result<Vec<Q>> {
    let n = basis.len();
    let half = q(1, 2);
    let mut aug: Vec<Vec<Q>> = basis
        .iter()
        .map(|bi| {
            let mut row: Vec<Q> = basis.iter().map(|bj| pairing(bi, bj, half)).collect();
            row.push(pairing(bi, x, half));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::Structure("basis is linearly dependent".into()))?;
        aug.swap(col, pivot);
        let p = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col];
                let pivot_row = aug[col].clone();
                for (v, p) in aug[r].iter_mut().zip(&pivot_row).skip(col) {
                    *v -= f * p;
                }
            }
        }
    }
    let coords: Vec<Q> = aug.iter().map(|row| row[n]).collect();
    let mut rebuilt = RationalMatrix::zeros(x.dim);
    for (c, b) in coords.iter().zip(basis) {
        rebuilt = &rebuilt + &b.scale(*c);
    }
    if rebuilt != *x {
        return Err(Error::Structure("element is not in the span of the basis".into()));
    }
    Ok(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_commutator_and_pairing() {
        let e1 = RationalMatrix::from_int_rows([[0, 1], [1, 0]]);
        let e2 = RationalMatrix::from_int_rows([[1, 0], [0, -1]]);
        let u = RationalMatrix::from_int_rows([[0, -1], [1, 0]]);
        assert_eq!(commutator(&e1, &e2), u.scale(qi(2)));
        assert_eq!(pairing(&u, &u, q(1, 2)), qi(1));
        assert_eq!(
            coordinates(&[u.clone(), e1.clone(), e2.clone()], &commutator(&u, &e1)).unwrap(),
            vec![qi(0), qi(0), qi(-2)]
        );
    }

    #[test]
    fn exact_inverse_and_conversion() {
        let m = RationalMatrix::from_int_rows([[2, 1, 0], [0, 1, 0], [1, 0, 4]]);
        assert_eq!(&m * &m.inverse().unwrap(), RationalMatrix::identity(3));
        let f = SquareMatrix::from_rows([[0.5, -0.25], [3.0, 0.0]]);
        assert_eq!(RationalMatrix::from_f64(&f).unwrap().to_f64(), f);
        assert!(RationalMatrix::from_f64(&SquareMatrix::from_rows([[0.1]])).is_err());
    }

    #[test]
    fn coordinates_reject_outside_span() {
        let u = RationalMatrix::from_int_rows([[0, -1], [1, 0]]);
        let e1 = RationalMatrix::from_int_rows([[0, 1], [1, 0]]);
        assert!(coordinates(&[u], &e1).is_err());
    }
}

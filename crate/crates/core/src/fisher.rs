//! The Souriau–Fisher metric `g_β([β,Z_i],[β,Z_j])` and the convention sweep
//! used to reproduce the reference metric tables.
//!
//! Each entry is `Θ̃(Z_i,[β,Z_j]) + ⟨η,[Z_i,[β,Z_j]]⟩`. Both the pairing scale
//! and the rule producing `η` from `β` are explicit inputs, and
//! [`reproduce_reference_table`] tries every combination.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::lie::{builtin, e1, e2, z1, z2, z3, AlgebraName};
use crate::linalg::{commutator, pairing, PairingConvention, SquareMatrix, ALGEBRAIC_TOL};
use crate::thermo::{AlgebraCocycle, ConeElement, EtaConvention, TwoCocycle};

/// The `a` samples used for table comparisons.
pub const TABLE_SAMPLES: [f64; 3] = [0.5, 1.0, 2.0];

/// Largest acceptable residual of a monomial fit.
pub const MONOMIAL_FIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetricConvention {
    pub pairing: PairingConvention,
    pub eta: EtaConvention,
}

impl MetricConvention {
    pub fn new(pairing: PairingConvention, eta: EtaConvention) -> Self {
        Self { pairing, eta }
    }

    /// Every convention, pairing-major: `(half, grad), (half, minus), ...`.
    pub fn all() -> Vec<MetricConvention> {
        PairingConvention::ALL
            .iter()
            .flat_map(|&p| EtaConvention::ALL.iter().map(move |&e| MetricConvention::new(p, e)))
            .collect()
    }
}

impl fmt::Display for MetricConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pairing={}, eta={}", self.pairing.label(), self.eta.label())
    }
}

/// The 2-cocycle attached to the cone of `beta`: `-X⁻¹` on sl(2,ℝ) for the
/// so(2) cone, `Ad_J` on so(3) for the so(3) cone.
pub fn cone_two_cocycle(beta: &ConeElement, pairing: PairingConvention) -> Result<TwoCocycle> {
    match beta.algebra() {
        AlgebraName::So2 => TwoCocycle::new(AlgebraCocycle::NegInverse, pairing, builtin(AlgebraName::Sl2)?),
        AlgebraName::So3 => TwoCocycle::new(AlgebraCocycle::ad_j(), pairing, builtin(AlgebraName::So3)?),
        AlgebraName::Sl2 => domain("no cone in sl2"),
    }
}

/// `g_β([β,Z_i],[β,Z_j]) = Θ̃(Z_i,[β,Z_j]) + ⟨η,[Z_i,[β,Z_j]]⟩`.
pub fn metric_entry(beta: &ConeElement, zi: &SquareMatrix, zj: &SquareMatrix, conv: MetricConvention) -> Result<f64> {
    let tc = cone_two_cocycle(beta, conv.pairing)?;
    entry_with(beta, &tc, zi, zj, conv)
}

fn entry_with(
    beta: &ConeElement,
    tc: &TwoCocycle,
    zi: &SquareMatrix,
    zj: &SquareMatrix,
    conv: MetricConvention,
) -> Result<f64> {
    let n = beta.matrix().dim();
    if zi.dim() != n || zj.dim() != n {
        return domain(format!("basis elements must be {n}x{n}"));
    }
    let inner = commutator(beta.matrix(), zj)?;
    let cocycle_term = tc.eval(zi, &inner)?;
    let eta = conv.eta.eta_of(beta.matrix())?;
    Ok(cocycle_term + pairing(&eta, &commutator(zi, &inner)?, conv.pairing)?)
}

/// Bases on which the metric is assembled. Some depend on `a`.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricBasis {
    /// `{e1, e2}`, the complement of so(2) in sl(2,ℝ).
    Sl2Complement,
    /// `{e1/(2a²), e2/(2a²)}`.
    Sl2Normalized,
    /// `{Z1, Z2, Z3}`.
    So3Full,
    /// A fixed list of matrices on the given cone.
    Fixed {
        cone: AlgebraName,
        labels: Vec<String>,
        elements: Vec<SquareMatrix>,
    },
}

impl MetricBasis {
    pub fn cone(&self) -> AlgebraName {
        match self {
            MetricBasis::Sl2Complement | MetricBasis::Sl2Normalized => AlgebraName::So2,
            MetricBasis::So3Full => AlgebraName::So3,
            MetricBasis::Fixed { cone, .. } => *cone,
        }
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            MetricBasis::Sl2Complement => vec!["e1".into(), "e2".into()],
            MetricBasis::Sl2Normalized => vec!["e1/(2a^2)".into(), "e2/(2a^2)".into()],
            MetricBasis::So3Full => vec!["Z1".into(), "Z2".into(), "Z3".into()],
            MetricBasis::Fixed { labels, .. } => labels.clone(),
        }
    }

    pub fn elements(&self, a: f64) -> Vec<SquareMatrix> {
        match self {
            MetricBasis::Sl2Complement => vec![e1(), e2()],
            MetricBasis::Sl2Normalized => {
                let s = 1.0 / (2.0 * a * a);
                vec![e1().scale(s), e2().scale(s)]
            }
            MetricBasis::So3Full => vec![z1(), z2(), z3()],
            MetricBasis::Fixed { elements, .. } => elements.clone(),
        }
    }
}

/// `value ≈ coefficient·a^exponent` over the samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialFit {
    pub coefficient: f64,
    /// `None` for an entry that is zero at every sample.
    pub exponent: Option<i32>,
    /// Largest `|value − c·a^k| / max(1, |value|)` over the samples.
    pub residual: f64,
}

impl MonomialFit {
    pub fn is_monomial(&self) -> bool {
        self.residual < MONOMIAL_FIT_TOL
    }
}

/// Fits `values[s] ≈ c·a_s^k` with `k ∈ {-2,…,2}`, interpolating `c` at the
/// first sample and keeping the exponent with the smallest residual.
pub fn fit_monomial(a_samples: &[f64], values: &[f64]) -> MonomialFit {
    if values.iter().all(|v| *v == 0.0) {
        return MonomialFit {
            coefficient: 0.0,
            exponent: None,
            residual: 0.0,
        };
    }
    let mut best = MonomialFit {
        coefficient: f64::NAN,
        exponent: None,
        residual: f64::INFINITY,
    };
    for k in -2..=2 {
        let c = values[0] / a_samples[0].powi(k);
        let residual = a_samples
            .iter()
            .zip(values)
            .map(|(a, v)| (v - c * a.powi(k)).abs() / v.abs().max(1.0))
            .fold(0.0, f64::max);
        if residual < best.residual {
            best = MonomialFit {
                coefficient: c,
                exponent: Some(k),
                residual,
            };
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyKind {
    /// Same magnitude, opposite sign.
    SignOnly,
    Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub a: f64,
    pub row: usize,
    pub col: usize,
    pub expected: f64,
    pub computed: f64,
    pub kind: DiscrepancyKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub basis_labels: Vec<String>,
    pub convention: MetricConvention,
    pub a_samples: Vec<f64>,
    /// One matrix per entry of `a_samples`.
    pub matrices: Vec<SquareMatrix>,
    /// `monomial_fit[i][j]` for entry `(i, j)`.
    pub monomial_fit: Vec<Vec<MonomialFit>>,
    /// Largest `‖G − Gᵀ‖_F` over the samples.
    pub symmetric_defect: f64,
    pub discrepancies: Vec<Discrepancy>,
}

impl MetricReport {
    pub fn matrix_at(&self, a: f64) -> Option<&SquareMatrix> {
        self.a_samples.iter().position(|s| *s == a).map(|i| &self.matrices[i])
    }

    pub fn all_monomial(&self) -> bool {
        self.monomial_fit.iter().flatten().all(MonomialFit::is_monomial)
    }
}

pub fn metric_matrix(basis: &MetricBasis, conv: MetricConvention, a_samples: &[f64]) -> Result<MetricReport> {
    if a_samples.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return domain("a samples must be positive");
    }
    let mut distinct = a_samples.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return domain("at least three distinct a samples are needed for the monomial fit");
    }
    let labels = basis.labels();
    let n = labels.len();
    if n == 0 {
        return domain("empty metric basis");
    }
    let mut matrices = Vec::with_capacity(a_samples.len());
    let mut symmetric_defect = 0.0f64;
    for &a in a_samples {
        let beta = ConeElement::new(a, basis.cone())?;
        let tc = cone_two_cocycle(&beta, conv.pairing)?;
        let zs = basis.elements(a);
        let mut g = SquareMatrix::zeros(n);
        for (i, zi) in zs.iter().enumerate() {
            for (j, zj) in zs.iter().enumerate() {
                g.set(i, j, entry_with(&beta, &tc, zi, zj, conv)?);
            }
        }
        symmetric_defect = symmetric_defect.max(g.distance(&g.transpose()));
        matrices.push(g);
    }
    let monomial_fit = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let values: Vec<f64> = matrices.iter().map(|m| m.get(i, j)).collect();
                    fit_monomial(a_samples, &values)
                })
                .collect()
        })
        .collect();
    Ok(MetricReport {
        basis_labels: labels,
        convention: conv,
        a_samples: a_samples.to_vec(),
        matrices,
        monomial_fit,
        symmetric_defect,
        discrepancies: Vec::new(),
    })
}

/// The metric tables that the sweep tries to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReferenceTable {
    /// `diag(4a², 4a²)` on `{e1, e2}`.
    #[serde(rename = "sl2")]
    Sl2,
    /// `diag(1/a², 1/a²)` on `{e1/(2a²), e2/(2a²)}`.
    #[serde(rename = "sl2-normalized")]
    Sl2Normalized,
    /// `diag(2a², 2a², 0)` on `{Z1, Z2, Z3}`.
    #[serde(rename = "so3")]
    So3,
}

impl ReferenceTable {
    pub const ALL: [ReferenceTable; 3] = [ReferenceTable::Sl2, ReferenceTable::Sl2Normalized, ReferenceTable::So3];

    pub fn name(self) -> &'static str {
        match self {
            ReferenceTable::Sl2 => "sl2",
            ReferenceTable::Sl2Normalized => "sl2-normalized",
            ReferenceTable::So3 => "so3",
        }
    }

    pub fn basis(self) -> MetricBasis {
        match self {
            ReferenceTable::Sl2 => MetricBasis::Sl2Complement,
            ReferenceTable::Sl2Normalized => MetricBasis::Sl2Normalized,
            ReferenceTable::So3 => MetricBasis::So3Full,
        }
    }

    pub fn expected(self, a: f64) -> SquareMatrix {
        match self {
            ReferenceTable::Sl2 => SquareMatrix::from_rows([[4.0 * a * a, 0.0], [0.0, 4.0 * a * a]]),
            ReferenceTable::Sl2Normalized => {
                let v = 1.0 / (a * a);
                SquareMatrix::from_rows([[v, 0.0], [0.0, v]])
            }
            ReferenceTable::So3 => {
                let v = 2.0 * a * a;
                SquareMatrix::from_rows([[v, 0.0, 0.0], [0.0, v, 0.0], [0.0, 0.0, 0.0]])
            }
        }
    }
}

impl std::str::FromStr for ReferenceTable {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        ReferenceTable::ALL.into_iter().find(|t| t.name() == s).map_or_else(
            || {
                domain(format!(
                    "unknown metric table {s:?} (expected sl2, sl2-normalized or so3)"
                ))
            },
            Ok,
        )
    }
}

/// Comparison of one convention against a table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub convention: MetricConvention,
    /// Largest `|computed − expected|`.
    pub max_deviation: f64,
    /// Largest `||computed| − |expected||`.
    pub max_abs_value_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct TableReproduction {
    pub target: ReferenceTable,
    pub best: MetricConvention,
    /// Report under `best`, with every mismatching entry listed.
    pub report: MetricReport,
    /// All conventions in enumeration order.
    pub sweep: Vec<SweepRow>,
}

impl TableReproduction {
    pub fn best_row(&self) -> SweepRow {
        *self
            .sweep
            .iter()
            .find(|r| r.convention == self.best)
            .expect("best comes from the sweep")
    }

    /// Conventions reproducing the table exactly (deviation below 1e-12).
    pub fn exact_conventions(&self) -> Vec<MetricConvention> {
        self.sweep
            .iter()
            .filter(|r| r.max_deviation < ALGEBRAIC_TOL)
            .map(|r| r.convention)
            .collect()
    }
}

fn compare(report: &MetricReport, target: ReferenceTable) -> (SweepRow, Vec<Discrepancy>) {
    let mut max_deviation = 0.0f64;
    let mut max_abs_value_deviation = 0.0f64;
    let mut discrepancies = Vec::new();
    for (&a, g) in report.a_samples.iter().zip(&report.matrices) {
        let want = target.expected(a);
        for row in 0..g.dim() {
            for col in 0..g.dim() {
                let (computed, expected) = (g.get(row, col), want.get(row, col));
                let dev = (computed - expected).abs();
                let abs_dev = (computed.abs() - expected.abs()).abs();
                max_deviation = max_deviation.max(dev);
                max_abs_value_deviation = max_abs_value_deviation.max(abs_dev);
                if dev > ALGEBRAIC_TOL * (1.0 + expected.abs()) {
                    let kind = if abs_dev <= ALGEBRAIC_TOL * (1.0 + expected.abs()) {
                        DiscrepancyKind::SignOnly
                    } else {
                        DiscrepancyKind::Value
                    };
                    discrepancies.push(Discrepancy {
                        a,
                        row,
                        col,
                        expected,
                        computed,
                        kind,
                    });
                }
            }
        }
    }
    let row = SweepRow {
        convention: report.convention,
        max_deviation,
        max_abs_value_deviation,
    };
    (row, discrepancies)
}

/// Sweeps every convention at `a ∈ {1/2, 1, 2}` and keeps the one with the
/// smallest maximal deviation (ties: smallest magnitude deviation, then
/// enumeration order).
pub fn reproduce_reference_table(target: ReferenceTable) -> Result<TableReproduction> {
    let mut best: Option<(SweepRow, MetricReport)> = None;
    let mut sweep = Vec::new();
    for conv in MetricConvention::all() {
        let mut report = metric_matrix(&target.basis(), conv, &TABLE_SAMPLES)?;
        let (row, discrepancies) = compare(&report, target);
        report.discrepancies = discrepancies;
        sweep.push(row);
        let better = match &best {
            None => true,
            Some((b, _)) => {
                (row.max_deviation, row.max_abs_value_deviation) < (b.max_deviation, b.max_abs_value_deviation)
            }
        };
        if better {
            best = Some((row, report));
        }
    }
    let (row, report) = best.expect("the sweep is nonempty");
    Ok(TableReproduction {
        target,
        best: row.convention,
        report,
        sweep,
    })
}

/// Conventions that reproduce every listed table exactly.
pub fn consistent_conventions(targets: &[ReferenceTable]) -> Result<Vec<MetricConvention>> {
    let mut keep = MetricConvention::all();
    for &t in targets {
        let exact = reproduce_reference_table(t)?.exact_conventions();
        keep.retain(|c| exact.contains(c));
    }
    Ok(keep)
}

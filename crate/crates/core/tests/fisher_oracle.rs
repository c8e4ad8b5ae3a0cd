//! Exact-arithmetic oracle for the metric sweep. The cocycles are written
//! here in their linear closed forms (`X ↦ -Xᵀ` on sl(2,ℝ), `X ↦ JXJ` on
//! so(3)) rather than going through the library.

use num_traits::Zero;
use souriau_core::exact::{commutator, pairing, q, qi, RationalMatrix, Q};
use souriau_core::fisher::{
    consistent_conventions, metric_matrix, reproduce_reference_table, MetricBasis, MetricConvention, ReferenceTable,
    TABLE_SAMPLES,
};
use souriau_core::linalg::PairingConvention;
use souriau_core::EtaConvention;

const A_SAMPLES: [(i64, i64); 3] = [(1, 2), (1, 1), (2, 1)];

fn scale_of(p: PairingConvention) -> Q {
    match p {
        PairingConvention::Half => q(1, 2),
        PairingConvention::One => qi(1),
    }
}

struct Setting {
    generator: RationalMatrix,
    theta: fn(&RationalMatrix) -> RationalMatrix,
    basis: fn(Q) -> Vec<RationalMatrix>,
    expected: fn(Q) -> Vec<Vec<Q>>,
}

fn sl2_theta(x: &RationalMatrix) -> RationalMatrix {
    -&x.transpose()
}

fn so3_theta(x: &RationalMatrix) -> RationalMatrix {
    let j = RationalMatrix::from_int_rows([[1, 0, 0], [0, 1, 0], [0, 0, -1]]);
    &(&j * x) * &j
}

fn e1() -> RationalMatrix {
    RationalMatrix::from_int_rows([[0, 1], [1, 0]])
}
fn e2() -> RationalMatrix {
    RationalMatrix::from_int_rows([[1, 0], [0, -1]])
}

fn setting(table: ReferenceTable) -> Setting {
    let u = RationalMatrix::from_int_rows([[0, -1], [1, 0]]);
    let z3 = RationalMatrix::from_int_rows([[0, -1, 0], [1, 0, 0], [0, 0, 0]]);
    match table {
        ReferenceTable::Sl2 => Setting {
            generator: u,
            theta: sl2_theta,
            basis: |_| vec![e1(), e2()],
            expected: |a| vec![vec![qi(4) * a * a, qi(0)], vec![qi(0), qi(4) * a * a]],
        },
        ReferenceTable::Sl2Normalized => Setting {
            generator: u,
            theta: sl2_theta,
            basis: |a| {
                let s = (qi(2) * a * a).recip();
                vec![e1().scale(s), e2().scale(s)]
            },
            expected: |a| {
                let v = (a * a).recip();
                vec![vec![v, qi(0)], vec![qi(0), v]]
            },
        },
        ReferenceTable::So3 => Setting {
            generator: z3,
            theta: so3_theta,
            basis: |_| {
                vec![
                    RationalMatrix::from_int_rows([[0, 0, 0], [0, 0, -1], [0, 1, 0]]),
                    RationalMatrix::from_int_rows([[0, 0, 1], [0, 0, 0], [-1, 0, 0]]),
                    RationalMatrix::from_int_rows([[0, -1, 0], [1, 0, 0], [0, 0, 0]]),
                ]
            },
            expected: |a| {
                let v = qi(2) * a * a;
                vec![vec![v, qi(0), qi(0)], vec![qi(0), v, qi(0)], vec![qi(0), qi(0), qi(0)]]
            },
        },
    }
}

fn exact_metric(s: &Setting, a: Q, conv: MetricConvention) -> Vec<Vec<Q>> {
    let scale = scale_of(conv.pairing);
    let beta = s.generator.scale(a);
    let eta = match conv.eta {
        EtaConvention::GradPhi => beta.scale((a * a).recip()),
        EtaConvention::MinusBeta => -&beta,
        EtaConvention::PlusBeta => beta.clone(),
    };
    let tilde = |x: &RationalMatrix, y: &RationalMatrix| {
        q(1, 2) * (pairing(&(s.theta)(x), y, scale) - pairing(&(s.theta)(y), x, scale))
    };
    let zs = (s.basis)(a);
    zs.iter()
        .map(|zi| {
            zs.iter()
                .map(|zj| {
                    let inner = commutator(&beta, zj);
                    tilde(zi, &inner) + pairing(&eta, &commutator(zi, &inner), scale)
                })
                .collect()
        })
        .collect()
}

fn exact_conventions(table: ReferenceTable) -> Vec<MetricConvention> {
    let s = setting(table);
    MetricConvention::all()
        .into_iter()
        .filter(|&c| {
            A_SAMPLES.iter().all(|&(n, d)| {
                let a = q(n, d);
                exact_metric(&s, a, c) == (s.expected)(a)
            })
        })
        .collect()
}

#[test]
fn float_tables_equal_exact_tables() {
    for table in ReferenceTable::ALL {
        let s = setting(table);
        for conv in MetricConvention::all() {
            let report = metric_matrix(&table.basis(), conv, &TABLE_SAMPLES).unwrap();
            for (k, &(n, d)) in A_SAMPLES.iter().enumerate() {
                let exact = exact_metric(&s, q(n, d), conv);
                let dim = exact.len();
                let m = RationalMatrix::new(dim, exact.into_iter().flatten().collect());
                assert!(
                    report.matrices[k].distance(&m.to_f64()) < 1e-12,
                    "{} {conv} a={n}/{d}",
                    table.name()
                );
            }
        }
    }
}

#[test]
fn sweep_agrees_with_exact_oracle() {
    for table in ReferenceTable::ALL {
        let oracle = exact_conventions(table);
        let sweep = reproduce_reference_table(table).unwrap();
        assert_eq!(sweep.exact_conventions(), oracle, "{}", table.name());
        assert_eq!(oracle.len(), 1, "{} has a unique exact convention", table.name());
        assert_eq!(sweep.best, oracle[0]);
    }
    let sl2 = exact_conventions(ReferenceTable::Sl2)[0];
    assert_eq!(
        sl2,
        MetricConvention::new(PairingConvention::Half, EtaConvention::MinusBeta)
    );
    assert_eq!(exact_conventions(ReferenceTable::Sl2Normalized)[0], sl2);
    let so3 = exact_conventions(ReferenceTable::So3)[0];
    assert_eq!(
        so3,
        MetricConvention::new(PairingConvention::One, EtaConvention::PlusBeta)
    );
    assert!(consistent_conventions(&ReferenceTable::ALL).unwrap().is_empty());
}

#[test]
fn zero_structure_is_exact_under_every_convention() {
    let s = setting(ReferenceTable::So3);
    for conv in MetricConvention::all() {
        for &(n, d) in &A_SAMPLES {
            let g = exact_metric(&s, q(n, d), conv);
            assert!((0..3).all(|k| g[2][k].is_zero() && g[k][2].is_zero()));
            assert!(g[0][1].is_zero() && g[1][0].is_zero());
        }
    }
}

#[test]
fn scaling_laws() {
    let sl2 = reproduce_reference_table(ReferenceTable::Sl2).unwrap();
    let norm = reproduce_reference_table(ReferenceTable::Sl2Normalized).unwrap();
    let so3 = reproduce_reference_table(ReferenceTable::So3).unwrap();
    for (rep, k) in [(&sl2.report, 2), (&norm.report, -2), (&so3.report, 2)] {
        assert!(rep.all_monomial());
        for i in 0..2 {
            assert_eq!(rep.monomial_fit[i][i].exponent, Some(k));
            assert!(rep.monomial_fit[i][i].residual < 1e-9);
        }
        assert!(rep.symmetric_defect < 1e-12);
    }
    let fixed = MetricBasis::So3Full;
    let again = metric_matrix(&fixed, so3.best, &TABLE_SAMPLES).unwrap();
    assert_eq!(again.matrices, so3.report.matrices);
}

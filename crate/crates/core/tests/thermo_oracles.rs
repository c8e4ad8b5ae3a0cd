use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use souriau_core::lie::{builtin, u, GroupSweep};
use souriau_core::linalg::{commutator, pairing, PairingConvention};
use souriau_core::thermo::{
    apply_cocycle, density_moments, density_normalization, group_cocycle_residual, koszul_chi, phi_derivative_fd,
    potentials, scalar_fisher, ChiMethod, FisherMethod,
};
use souriau_core::{AlgebraCocycle, AlgebraName, ConeElement, EtaConvention, TwoCocycle};

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

#[test]
fn legendre_duality_over_six_decades() {
    for a in log_spaced(1e-2, 1e2, 100) {
        for beta in [ConeElement::so2(a).unwrap(), ConeElement::so3(a).unwrap()] {
            let p = potentials(&beta, EtaConvention::GradPhi).unwrap();
            assert!(p.legendre_residual.abs() < 1e-12, "a = {a}");
            assert!(p.chi > 0.0);
            assert!((p.phi + p.chi.ln()).abs() < 1e-12);
            // η = β/a² entrywise
            assert!(p
                .eta
                .approx_eq(&beta.matrix().scale(1.0 / (a * a)), 1e-14 * (1.0 + 1.0 / a)));
        }
    }
}

#[test]
fn gradient_duality_by_finite_differences() {
    for a in log_spaced(1e-2, 1e2, 25) {
        assert_relative_eq!(phi_derivative_fd(a), 1.0 / a, max_relative = 1e-6);
    }
}

#[test]
fn chi_and_density_by_quadrature() {
    for a in [0.5, 1.0, 2.0, 5.0] {
        let b = ConeElement::so2(a).unwrap();
        let closed = 1.0 / (2.0 * a);
        assert!((koszul_chi(&b, ChiMethod::Quadrature).unwrap() - closed).abs() < 1e-8);
        assert!((density_normalization(&b).unwrap() - 1.0).abs() < 1e-8);
        let m = density_moments(&b).unwrap();
        assert!((m.mean_x - closed).abs() < 1e-6);
        assert!((m.var_x - closed * closed).abs() < 1e-6);
        assert_relative_eq!(
            scalar_fisher(&b, FisherMethod::Statistical).unwrap(),
            1.0 / (a * a),
            max_relative = 1e-4
        );
    }
}

#[test]
fn neg_inverse_is_an_involution_on_so2() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let mut s: f64 = rng.gen_range(-10.0..10.0);
        if s.abs() < 1e-3 {
            s = 1.0;
        }
        let x = u().scale(s);
        let back = apply_cocycle(
            &AlgebraCocycle::NegInverse,
            &apply_cocycle(&AlgebraCocycle::NegInverse, &x).unwrap(),
        )
        .unwrap();
        assert!(back.distance(&x) < 1e-12 * (1.0 + s.abs()));
    }
    let so3 = builtin(AlgebraName::So3).unwrap();
    assert!(AlgebraCocycle::ad_j().involution_defect(&so3).unwrap() < 1e-12);
}

#[test]
fn two_cocycles_are_antisymmetric_cocycles() {
    let cases = [
        (AlgebraCocycle::NegInverse, AlgebraName::Sl2),
        (AlgebraCocycle::ad_j(), AlgebraName::So3),
    ];
    for (theta, name) in cases {
        for conv in PairingConvention::ALL {
            let alg = builtin(name).unwrap();
            let tc = TwoCocycle::new(theta.clone(), conv, alg.clone()).unwrap();
            let b = &alg.basis;
            let br = |x, y| commutator(x, y).unwrap();
            for x in b {
                for y in b {
                    assert_eq!(tc.eval(x, y).unwrap(), -tc.eval(y, x).unwrap());
                    for z in b {
                        let cyc = tc.eval(&br(x, y), z).unwrap()
                            + tc.eval(&br(y, z), x).unwrap()
                            + tc.eval(&br(z, x), y).unwrap();
                        assert!(cyc.abs() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn raw_bilinear_form_is_not_antisymmetric() {
    // ⟨Θ(e1), e1⟩ with the linear Θ = -e1 gives -1; the antisymmetrized value is 0
    let sl2 = builtin(AlgebraName::Sl2).unwrap();
    let tc = TwoCocycle::new(AlgebraCocycle::NegInverse, PairingConvention::Half, sl2.clone()).unwrap();
    let e1 = &sl2.basis[1];
    let raw = pairing(&tc.linear_image(e1).unwrap(), e1, PairingConvention::Half).unwrap();
    assert_eq!(raw, -1.0);
    assert_eq!(tc.eval(e1, e1).unwrap(), 0.0);
}

#[test]
fn equivariance_sweeps() {
    for a in [0.5, 1.0, 2.0] {
        let b = ConeElement::so2(a).unwrap();
        assert!(group_cocycle_residual(&b, EtaConvention::GradPhi, &GroupSweep::So2.elements(100)).unwrap() < 1e-12);
        let b3 = ConeElement::so3(a).unwrap();
        assert!(
            group_cocycle_residual(&b3, EtaConvention::GradPhi, &GroupSweep::JConjugation.elements(100)).unwrap()
                < 1e-12
        );
    }
}

use proptest::prelude::*;
use sos_core::analytic::epsilon_finite_t;
use sos_core::fock::{
    coherent_vector, trace_distance, uhlmann_fidelity, weyl_operator, DisplacedThermal, FockRep,
    QuantumState, Space,
};
use sos_core::linalg::{c, hermitian_eigenvalues, real, C64};

fn pointer_pair(d: f64, t: f64, min_dim: usize) -> (QuantumState, QuantumState) {
    let plus = DisplacedThermal::new(real(d), 1.0, t);
    let rep = FockRep::new(plus.auto_rep().dim().max(min_dim)).unwrap();
    (
        plus.state(&rep).unwrap(),
        DisplacedThermal::new(real(-d), 1.0, t).state(&rep).unwrap(),
    )
}

#[test]
fn pointer_fidelity_follows_tanh_law() {
    for d in [0.3, 0.9, 1.5] {
        for t in [0.2, 1.0, 5.0] {
            let (a, b) = pointer_pair(d, t, 64);
            let f = uhlmann_fidelity(&a, &b).unwrap();
            let want = (-4.0 * d * d * (0.5 / t).tanh()).exp();
            assert!((f * f - want).abs() < 1e-5, "D={d} T={t}: {} vs {want}", f * f);
            assert!((want - epsilon_finite_t(d, 1.0, t)).abs() < 1e-15);
        }
    }
}

#[test]
fn nearly_pure_states_have_finite_spectra() {
    // entries span ~140 decades here; the eigensolver must not return NaN
    let (a, _) = pointer_pair(0.3, 0.2, 64);
    assert!(hermitian_eigenvalues(a.matrix()).iter().all(|x| x.is_finite()));
}

#[test]
fn coherent_fidelity_is_overlap_modulus() {
    let rep = FockRep::new(40).unwrap();
    for (x, y) in [(c(0.3, 0.1), c(-0.2, 0.5)), (real(1.0), real(-1.0)), (c(0.0, 1.2), real(0.0))] {
        let a = QuantumState::pure(&coherent_vector(x, &rep).unwrap(), Space::oscillator(40)).unwrap();
        let b = QuantumState::pure(&coherent_vector(y, &rep).unwrap(), Space::oscillator(40)).unwrap();
        let f = uhlmann_fidelity(&a, &b).unwrap();
        let want = (-0.5 * (x - y).norm_sqr()).exp();
        assert!((f - want).abs() < 1e-7, "{f} vs {want}");
        // pure states: D = sqrt(1 - F²)
        let td = trace_distance(&a, &b).unwrap();
        assert!((td - (1.0 - want * want).sqrt()).abs() < 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fidelity_is_unitarily_invariant_and_symmetric(
        d in 0.0f64..1.2, t in 0.3f64..3.0, re in -0.8f64..0.8, im in -0.8f64..0.8,
    ) {
        let (a, b) = pointer_pair(d, t, 48);
        let n = a.dim();
        let rep = FockRep::new(n).unwrap();
        // exact-in-truncation unitary: the Weyl operator of the truncated ladder
        let u = weyl_operator(C64::new(re, im), &rep);
        let rot = |s: &QuantumState| {
            QuantumState::new(&u * s.matrix() * u.adjoint(), Space::oscillator(n)).unwrap()
        };
        let f = uhlmann_fidelity(&a, &b).unwrap();
        let g = uhlmann_fidelity(&rot(&a), &rot(&b)).unwrap();
        let h = uhlmann_fidelity(&b, &a).unwrap();
        prop_assert!((f - g).abs() < 1e-7);
        prop_assert!((f - h).abs() < 1e-7);
    }

    #[test]
    fn fuchs_van_de_graaf_bounds(d in 0.0f64..1.5, t in 0.2f64..4.0) {
        let (a, b) = pointer_pair(d, t, 32);
        let f = uhlmann_fidelity(&a, &b).unwrap();
        let td = trace_distance(&a, &b).unwrap();
        prop_assert!(1.0 - f <= td + 1e-8);
        prop_assert!(td <= (1.0 - f * f).max(0.0).sqrt() + 1e-8);
    }

    #[test]
    fn fidelity_decreases_with_separation(d in 0.05f64..1.2, dd in 0.05f64..0.5, t in 0.3f64..3.0) {
        let (a, b) = pointer_pair(d, t, 48);
        let (c2, e) = pointer_pair(d + dd, t, 48);
        prop_assert!(uhlmann_fidelity(&c2, &e).unwrap() < uhlmann_fidelity(&a, &b).unwrap());
    }
}

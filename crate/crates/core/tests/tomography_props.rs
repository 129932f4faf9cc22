use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tomoctx::angular::EulerAngles;
use tomoctx::qcore::{expectation, projector_from, random_density, random_hermitian, random_state};
use tomoctx::quad::GammaIntegration;
use tomoctx::tomography::{
    dequantizer, dual_symbol, fidelity, pair, quantizer, reconstruct, reconstruct_with, tomogram_of, unitary_tomogram,
    U3Params,
};
use tomoctx::{ComplexMatrix, GridSpec, TwiceJ};

fn spins() -> impl Strategy<Value = TwiceJ> {
    (1u32..=4).prop_map(TwiceJ)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tomograms_are_distributions(j in spins(), seed in any::<u64>(), a in 0.0f64..TAU, b in 0.0f64..=PI) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(j.dim(), &mut rng);
        let tom = tomogram_of(&rho, j).unwrap();
        let dist = tom.distribution(a, b).unwrap();
        prop_assert!(dist.iter().all(|&p| p >= -1e-12));
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tomogram_is_gamma_free(j in spins(), seed in any::<u64>(), a in 0.0f64..TAU, b in 0.0f64..=PI, g in 0.0f64..TAU) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(j.dim(), &mut rng);
        let tom = tomogram_of(&rho, j).unwrap();
        let ang = EulerAngles::new(a, b, g).unwrap();
        for m in j.magnetic() {
            let direct = expectation(&rho, &dequantizer(j, m, &ang).unwrap()).unwrap().re;
            prop_assert!((direct - tom.eval(m, a, b)).abs() < 1e-13);
        }
    }

    #[test]
    fn dual_symbol_is_trace_with_quantizer(j in spins(), seed in any::<u64>(), a in 0.0f64..TAU, b in 0.0f64..=PI) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(j.dim(), &mut rng);
        let dual = dual_symbol(&h, j).unwrap();
        let ang = EulerAngles::new(a, b, 0.0).unwrap();
        for m in j.magnetic() {
            let q = quantizer(j, m, &ang).unwrap();
            prop_assert!((expectation(&h, &q).unwrap().re - dual.eval(m, a, b)).abs() < 1e-13);
        }
    }

    #[test]
    fn unitary_tomogram_on_simplex(t in prop::array::uniform3(0.0f64..=PI / 2.0), f in prop::array::uniform6(0.0f64..TAU)) {
        let w = unitary_tomogram(&U3Params::new(t, f).unwrap());
        prop_assert!(w.iter().all(|&x| x >= -1e-15));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn pairing_reproduces_traces_for_complex_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let grid = GridSpec::default();
    for tj in 1..=3u32 {
        let j = TwiceJ(tj);
        for _ in 0..4 {
            let rho = random_density(j.dim(), &mut rng);
            let obs = random_hermitian(j.dim(), &mut rng);
            let paired = pair(&tomogram_of(&rho, j).unwrap(), &dual_symbol(&obs, j).unwrap(), &grid).unwrap();
            let direct = expectation(&rho, &obs).unwrap().re;
            assert!((paired - direct).abs() < 1e-11, "j={j}: {paired} vs {direct}");
        }
    }
}

#[test]
fn fidelity_kernel_for_complex_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let grid = GridSpec::default();
    for _ in 0..10 {
        let k = random_state(3, &mut rng);
        let psi = random_state(3, &mut rng);
        let expected = k.inner(&psi).unwrap().norm_sqr();
        let tk = tomogram_of(&projector_from(&k), TwiceJ::ONE).unwrap();
        let tp = tomogram_of(&projector_from(&psi), TwiceJ::ONE).unwrap();
        assert!((fidelity(&tk, &tp, &grid).unwrap() - expected).abs() < 1e-12);
    }
    let half = tomogram_of(&ComplexMatrix::identity(2).scale_real(0.5), TwiceJ::HALF).unwrap();
    assert!(fidelity(&half, &half, &grid).is_err());
}

#[test]
fn reconstruction_with_numeric_gamma_matches_analytic() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let grid = GridSpec::new(16, 12, 16).unwrap();
    for tj in [1u32, 2] {
        let h = random_hermitian(tj as usize + 1, &mut rng);
        let tom = tomogram_of(&h, TwiceJ(tj)).unwrap();
        let a = reconstruct(&tom, &grid).unwrap();
        let n = reconstruct_with(&tom, &grid, GammaIntegration::Numeric).unwrap();
        assert!(a.max_abs_diff(&h) < 1e-12);
        assert!(n.max_abs_diff(&h) < 1e-12);
    }
}

#[test]
fn reconstruction_round_trip_default_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let grid = GridSpec::default();
    for tj in 1..=4u32 {
        let h = random_hermitian(tj as usize + 1, &mut rng);
        let back = reconstruct(&tomogram_of(&h, TwiceJ(tj)).unwrap(), &grid).unwrap();
        assert!(back.max_abs_diff(&h) < 1e-10, "2j={tj}");
    }
}

#[test]
fn under_resolved_grid_fails_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let h = random_hermitian(3, &mut rng);
    let back = reconstruct(&tomogram_of(&h, TwiceJ::ONE).unwrap(), &GridSpec::new(4, 4, 4).unwrap()).unwrap();
    assert!(back.max_abs_diff(&h) > 1e-6);
}

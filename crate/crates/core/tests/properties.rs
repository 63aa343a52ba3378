mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toeplitz_opuc::bo::{bo_step, build_bo, BoOptions, Reflection};
use toeplitz_opuc::gi::{born_map, gi_bound_report, h_half_norm, SobolevHalfElement};
use toeplitz_opuc::opuc::verblunsky_from_moments;
use toeplitz_opuc::series::{
    exp_series, log_series, multiply, samples_from_coeffs, BeurlingWeight, LaurentSeries, SpectralGrid,
};
use toeplitz_opuc::toeplitz::{build_section, full_inverse_entry, invert_section};
use toeplitz_opuc::wienerhopf::{
    factorize, reflection_coefficient, szego_d, winding_number, Normalization,
};

use common::*;

fn series_strategy(band: usize, radius: f64) -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec((-radius..radius, -radius..radius), 2 * band + 1).prop_map(move |v| {
        LaurentSeries::from_coeffs(band, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
    })
}

fn seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

fn positive_weight(seed: u64) -> LaurentSeries {
    random_positive_weight(&mut ChaCha8Rng::seed_from_u64(seed), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_submultiplicative(a in series_strategy(6, 1.0), b in series_strategy(9, 1.0)) {
        for nu in builtin_weights() {
            prop_assert!(submultiplicativity_ratio(&a, &b, &nu) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn projections_form_an_algebra(s in series_strategy(12, 1.0)) {
        prop_assert!(projection_algebra_holds(&s));
    }

    #[test]
    fn parseval_on_grid(s in series_strategy(32, 1.0)) {
        prop_assert!(parseval_gap(&s, 128) <= 1e-12);
    }

    #[test]
    fn decay_lemma_inequality(f in series_strategy(32, 1.0), n in 0usize..=16) {
        prop_assert!(decay_lemma_excess(&f, n) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn factors_reconstruct_symbol(s in series_strategy(8, 0.35)) {
        let grid = SpectralGrid::default();
        let phi = exp_series(&s, &grid).unwrap();
        let f = factorize(&phi).unwrap();
        prop_assert!(f.reconstruction_error(&phi, &grid).unwrap() <= 1e-10);
        prop_assert!(f.plus().terms().all(|(k, v)| k >= 0 || v == c(0.0)));
        prop_assert!(f.minus().terms().all(|(k, v)| k <= 0 || v == c(0.0)));
        prop_assert_eq!(f.minus().coeff(0), c(1.0));
        let unit = |a: &LaurentSeries, b: &LaurentSeries| {
            let p = multiply(a, b);
            let g = samples_from_coeffs(&p, grid.sampling_size(p.half_bandwidth())).unwrap();
            g.samples().iter().map(|v| (v - c(1.0)).norm()).fold(0.0, f64::max)
        };
        prop_assert!(unit(f.plus(), f.plus_inv()) <= 1e-10);
        prop_assert!(unit(f.minus(), f.minus_inv()) <= 1e-10);
    }

    #[test]
    fn refactoring_returns_the_same_factors(s in series_strategy(6, 0.3)) {
        let grid = SpectralGrid::default();
        let f = factorize(&exp_series(&s, &grid).unwrap()).unwrap();
        let g = factorize(&multiply(f.plus(), f.minus())).unwrap();
        for k in -40..=40 {
            prop_assert!((f.plus().coeff(k) - g.plus().coeff(k)).norm() <= 1e-10);
            prop_assert!((f.minus().coeff(k) - g.minus().coeff(k)).norm() <= 1e-10);
        }
    }

    #[test]
    fn winding_is_additive(a in series_strategy(4, 0.3), b in series_strategy(4, 0.3), j in -3i64..=3, k in -3i64..=3) {
        let grid = SpectralGrid::default();
        let phi = exp_series(&a, &grid).unwrap().shifted(j);
        let psi = exp_series(&b, &grid).unwrap().shifted(k);
        let m = 1024;
        prop_assert_eq!(winding_number(&phi, m).unwrap(), j);
        prop_assert_eq!(winding_number(&multiply(&phi, &psi), m).unwrap(), j + k);
    }

    #[test]
    fn born_map_is_unimodular(s in series_strategy(8, 0.5)) {
        let f = (&s + &s.conj_reflect()).scale(c(0.5));
        prop_assert!(born_map_modulus_defect(&f) <= 1e-10);
    }

    #[test]
    fn reflection_of_exp_is_born_map(s in series_strategy(6, 0.4)) {
        let grid = SpectralGrid::default();
        let f = (&s + &s.conj_reflect()).scale(c(0.5)).with_coeff(0, c(0.0));
        let r = reflection_coefficient(&exp_series(&f, &grid).unwrap()).unwrap();
        let b = born_map(&SobolevHalfElement::new(f).unwrap(), &grid).unwrap();
        for k in -60..=60 {
            prop_assert!((r.coeff(k) - b.coeff(k)).norm() <= 1e-10);
        }
    }

    #[test]
    fn verblunsky_coefficients_lie_in_the_disc(seed in seed()) {
        prop_assert!(max_alpha_modulus(&positive_weight(seed), 20) < 1.0);
    }

    #[test]
    fn moments_are_scale_invariant(seed in seed(), scale in 0.1f64..10.0) {
        let w = positive_weight(seed);
        let a = verblunsky_from_moments(&w, 12);
        let b = verblunsky_from_moments(&w.scale(c(scale)), 12);
        for (x, y) in a.rows.iter().zip(&b.rows) {
            prop_assert!((x.alpha - y.alpha).norm() <= 1e-12);
        }
    }

    #[test]
    fn reflection_is_unimodular_for_positive_weights(seed in seed()) {
        let r = reflection_coefficient(&positive_weight(seed)).unwrap();
        let g = samples_from_coeffs(&r, 1024).unwrap();
        prop_assert!(g.samples().iter().all(|v| (v.norm() - 1.0).abs() <= 1e-10));
    }

    #[test]
    fn positive_symbols_give_positive_definite_sections(seed in seed(), n in 0usize..40) {
        let t = build_section(&positive_weight(seed), n);
        prop_assert!(t.is_hermitian(0.0));
        prop_assert!(t.is_positive_definite());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn szego_function_at_origin(seed in seed()) {
        let w = positive_weight(seed);
        let l0 = log_series(&w, &SpectralGrid::default()).unwrap().coeff(0);
        let d = szego_d(&w, c(0.0)).unwrap().value;
        prop_assert!((d * d - l0.exp()).norm() <= 1e-10);
    }

    #[test]
    fn square_sum_bound_holds(seed in seed()) {
        let b = gi_bound_report(&positive_weight(seed), 64, &BoOptions::default()).unwrap();
        prop_assert!(b.pass, "lhs {} rhs {}", b.lhs, b.rhs);
        prop_assert!(b.rows.iter().all(|r| r.proxy_pass && r.intermediate_pass));
    }

    #[test]
    fn truncation_doubling_is_stable(seed in seed(), n in 1usize..=20) {
        let w = positive_weight(seed);
        let refl = Reflection::from_weight(&w, &SpectralGrid::default(), Normalization::LogMeanZero).unwrap();
        let small = BoOptions { size: 16, max_size: 16, ..Default::default() };
        let auto = BoOptions::default();
        let a = bo_step(&refl, n, &auto).unwrap();
        let doubled = BoOptions { size: 2 * a.size, max_size: 2 * a.size, ..Default::default() };
        let b = bo_step(&refl, n, &doubled).unwrap();
        prop_assert!((a.alpha - b.alpha).norm() <= 1e-10);
        prop_assert!(bo_step(&refl, n, &small).is_ok());
    }

    #[test]
    fn born_map_is_locally_lipschitz(f in series_strategy(8, 0.3), h in series_strategy(8, 1.0)) {
        let grid = SpectralGrid::default();
        let sym = |s: &LaurentSeries| (s + &s.conj_reflect()).scale(c(0.5));
        let (f, h) = (sym(&f), sym(&h));
        let base = born_map(&SobolevHalfElement::new(f.clone()).unwrap(), &grid).unwrap();
        let dist = |eps: f64| {
            let g = SobolevHalfElement::new(&f + &h.scale(c(eps))).unwrap();
            let d = &born_map(&g, &grid).unwrap() - &base;
            d.terms().map(|(l, v)| (1 + l.unsigned_abs()) as f64 * v.norm_sqr()).sum::<f64>().sqrt()
        };
        let (d1, d2) = (dist(1e-4), dist(2e-4));
        prop_assert!(d1 <= 1e-4 * 10.0 * h_half_norm(&h).unwrap() + 1e-12);
        prop_assert!((d2 / d1 - 2.0).abs() < 0.05, "ratio {}", d2 / d1);
    }
}

#[test]
fn weight_axioms_hold_for_builtins() {
    for nu in builtin_weights() {
        nu.validate(64).unwrap();
    }
    assert!(BeurlingWeight::custom(vec![1.0, 3.0, 3.0, 3.0]).is_ok());
}

#[test]
fn krein_limit_is_approached_at_fixed_entries() {
    let w = LaurentSeries::from_real_terms(&[(-2, 0.1), (-1, -0.35), (0, 1.0), (1, -0.35), (2, 0.1)]);
    let f = factorize(&w).unwrap();
    for (j, k) in [(0, 0), (1, 2), (3, 3)] {
        let exact = full_inverse_entry(&f, j, k);
        let errors: Vec<f64> =
            (6..30).step_by(4).map(|n| (invert_section(&build_section(&w, n)).unwrap()[(j, k)] - exact).norm()).collect();
        for pair in errors.windows(2) {
            assert!(pair[1] <= pair[0] || pair[1] < 1e-14, "{errors:?}");
        }
    }
}

#[test]
fn operator_norm_decreases_on_random_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let w = random_positive_weight(&mut rng, 4);
        let refl = Reflection::from_weight(&w, &SpectralGrid::default(), Normalization::LogMeanZero).unwrap();
        let n0 = toeplitz_opuc::bo::contraction_threshold(&refl, 40).unwrap();
        let mut prev = f64::INFINITY;
        for n in n0..=n0 + 20 {
            let norm = build_bo(&refl, n, refl.nonzero_rows(n).min(128)).operator_norm();
            assert!(norm <= prev + 1e-12);
            prev = norm;
        }
    }
}

//! Random corpora and invariant checks shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use toeplitz_opuc::gi::{born_map, SobolevHalfElement};
use toeplitz_opuc::opuc::verblunsky_from_moments;
use toeplitz_opuc::series::{
    beurling_norm, exp_series, multiply, project_minus, project_plus, samples_from_coeffs, BeurlingWeight,
    LaurentSeries, SpectralGrid,
};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Uniform in the disc of the given radius.
pub fn random_complex<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>())
}

pub fn random_series<R: Rng>(rng: &mut R, band: i64, radius: f64) -> LaurentSeries {
    LaurentSeries::from_terms((-band..=band).map(|k| (k, random_complex(rng, radius))))
}

/// Real-valued series: `f_{-k} = conj(f_k)`.
pub fn random_real_series<R: Rng>(rng: &mut R, band: i64, radius: f64) -> LaurentSeries {
    let half: Vec<Complex64> = (0..=band).map(|_| random_complex(rng, radius)).collect();
    LaurentSeries::from_terms((-band..=band).map(|k| {
        let v = half[k.unsigned_abs() as usize];
        (k, if k == 0 { c(v.re) } else if k > 0 { v } else { v.conj() })
    }))
}

/// `exp` of a random band-8 series with coefficients of modulus at most 0.5.
pub fn random_exp_symbol<R: Rng>(rng: &mut R) -> LaurentSeries {
    exp_series(&random_series(rng, 8, 0.5), &SpectralGrid::default()).unwrap()
}

/// Positive trigonometric polynomial of degree at most `degree` with
/// minimum at least 0.1 on the circle.
pub fn random_positive_weight<R: Rng>(rng: &mut R, degree: i64) -> LaurentSeries {
    let d = rng.gen_range(1..=degree);
    let mut w = random_real_series(rng, d, 0.5).with_coeff(0, c(0.0));
    let m = samples_from_coeffs(&w, 4096).unwrap();
    let min = m.samples().iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    w = w.with_coeff(0, c(0.1 + rng.gen_range(0.0..0.5) - min));
    w
}

pub fn grid_min_real(w: &LaurentSeries) -> f64 {
    let m = (2 * w.half_bandwidth() + 2).next_power_of_two().max(4096);
    let g = samples_from_coeffs(w, m).unwrap();
    g.samples().iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
}

pub fn builtin_weights() -> Vec<BeurlingWeight> {
    vec![BeurlingWeight::Exponential(1.5), BeurlingWeight::Polynomial(2.0), BeurlingWeight::Wiener]
}

/// `max(||ab|| / (||a|| ||b||))` over the pairs; must not exceed one.
pub fn submultiplicativity_ratio(a: &LaurentSeries, b: &LaurentSeries, nu: &BeurlingWeight) -> f64 {
    beurling_norm(&multiply(a, b), nu) / (beurling_norm(a, nu) * beurling_norm(b, nu))
}

/// Whether `P+ + P- = id`, `P+^2 = P+`, `P+ P- = 0`, exactly.
pub fn projection_algebra_holds(s: &LaurentSeries) -> bool {
    let plus = project_plus(s);
    let minus = project_minus(s);
    let band = s.half_bandwidth() as i64;
    (-band..=band).all(|k| plus.coeff(k) + minus.coeff(k) == s.coeff(k))
        && project_plus(&plus) == plus
        && project_plus(&minus).terms().all(|(_, v)| v == c(0.0))
}

/// `|mean |samples|^2 - sum |c_k|^2|`.
pub fn parseval_gap(s: &LaurentSeries, m: usize) -> f64 {
    let g = samples_from_coeffs(s, m).unwrap();
    let energy: f64 = s.terms().map(|(_, v)| v.norm_sqr()).sum();
    (g.mean_square() - energy).abs()
}

/// `||P+(z^{-n} f)||_{L^2} - sqrt(2 pi) sum_{k >= n} |f_k|`; must be `<= 0`.
pub fn decay_lemma_excess(f: &LaurentSeries, n: usize) -> f64 {
    let shifted = project_plus(&f.shifted(-(n as i64)));
    let m = (2 * shifted.half_bandwidth() + 2).next_power_of_two().max(64);
    let lhs = samples_from_coeffs(&shifted, m).unwrap().l2_norm();
    let tail: f64 = f.terms().filter(|&(k, _)| k >= n as i64).map(|(_, v)| v.norm()).sum();
    lhs - TAU.sqrt() * tail
}

/// `max_grid ||B(f)| - 1|`.
pub fn born_map_modulus_defect(f: &LaurentSeries) -> f64 {
    let grid = SpectralGrid::default();
    let b = born_map(&SobolevHalfElement::new(f.clone()).unwrap(), &grid).unwrap();
    let g = samples_from_coeffs(&b, grid.sampling_size(b.half_bandwidth())).unwrap();
    g.samples().iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max)
}

/// Largest `|alpha_n|`, `n < n_max`, from moments.
pub fn max_alpha_modulus(w: &LaurentSeries, n_max: usize) -> f64 {
    verblunsky_from_moments(w, n_max).rows.iter().map(|r| r.alpha.norm()).fold(0.0, f64::max)
}

//! Winding numbers, Wiener-Hopf factorization, the Szegő function and the
//! reflection coefficient of a weight.
//!
//! For a non-vanishing symbol `phi` of winding number zero we write
//! `phi = exp(L)` and split `L = L_+ + L_-` with `L_+` carrying the indices
//! `k >= 0` (including the constant mode) and `L_-` the indices `k < 0`. Then
//! `phi_+ = exp(L_+)` extends analytically into the disc and
//! `phi_- = exp(L_-)` into the exterior with `phi_-(inf) = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{
    beurling_norm, beurling_seminorm, check_nonvanishing, exp_series, log_series, multiply,
    project_minus, project_plus, samples_from_coeffs, unwrap_phase, BeurlingWeight, GridSampling,
    LaurentSeries, SpectralGrid,
};

/// Winding number of `phi` around the origin, read off from the unwrapped
/// argument on an `m`-point grid.
pub fn winding_number(phi: &LaurentSeries, m: usize) -> Result<i64> {
    winding_number_with(phi, m, SpectralGrid::default().vanish_tol)
}

pub fn winding_number_with(phi: &LaurentSeries, m: usize, vanish_tol: f64) -> Result<i64> {
    let g = samples_from_coeffs(phi, m)?;
    check_nonvanishing(g.samples(), vanish_tol)?;
    Ok(unwrap_phase(g.samples()).1)
}

/// `phi = plus * minus` with one-sided factors and their inverses.
#[derive(Clone, Debug, PartialEq)]
pub struct WienerHopfFactorization {
    plus: LaurentSeries,
    minus: LaurentSeries,
    plus_inv: LaurentSeries,
    minus_inv: LaurentSeries,
    log_symbol: LaurentSeries,
    winding: i64,
}

impl WienerHopfFactorization {
    /// Builds the factors from `L = log(phi)`.
    pub fn from_log(log_symbol: LaurentSeries, grid: &SpectralGrid) -> Result<Self> {
        let lp = project_plus(&log_symbol);
        let lm = project_minus(&log_symbol);
        Ok(WienerHopfFactorization {
            plus: exp_series(&lp, grid)?,
            plus_inv: exp_series(&-&lp, grid)?,
            minus: exp_series(&lm, grid)?,
            minus_inv: exp_series(&-&lm, grid)?,
            log_symbol,
            winding: 0,
        })
    }

    /// `phi_+`, supported on `k >= 0`.
    pub fn plus(&self) -> &LaurentSeries {
        &self.plus
    }

    /// `phi_-`, supported on `k <= 0` with `(phi_-)_0 = 1`.
    pub fn minus(&self) -> &LaurentSeries {
        &self.minus
    }

    pub fn plus_inv(&self) -> &LaurentSeries {
        &self.plus_inv
    }

    pub fn minus_inv(&self) -> &LaurentSeries {
        &self.minus_inv
    }

    pub fn log_symbol(&self) -> &LaurentSeries {
        &self.log_symbol
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    /// `phi_+ * phi_-`.
    pub fn product(&self) -> LaurentSeries {
        multiply(&self.plus, &self.minus)
    }

    /// `r = phi_+^{-1} phi_-`, i.e. `exp(L_- - L_+)`.
    pub fn reflection(&self, compress_tol: f64) -> LaurentSeries {
        multiply(&self.plus_inv, &self.minus).compress(compress_tol)
    }

    /// `max_grid |phi_+ phi_- - phi| / max_grid |phi|`.
    pub fn reconstruction_error(&self, phi: &LaurentSeries, grid: &SpectralGrid) -> Result<f64> {
        let diff = &self.product() - phi;
        let m = grid.sampling_size(diff.half_bandwidth());
        let scale = samples_from_coeffs(phi, m)?.max_abs();
        Ok(samples_from_coeffs(&diff, m)?.max_abs() / scale)
    }
}

pub fn factorize(phi: &LaurentSeries) -> Result<WienerHopfFactorization> {
    factorize_with(phi, &SpectralGrid::default())
}

/// Wiener-Hopf factorization of a non-vanishing, winding-zero symbol. The
/// constant Fourier mode of `log(phi)` goes entirely into `phi_+`.
pub fn factorize_with(phi: &LaurentSeries, grid: &SpectralGrid) -> Result<WienerHopfFactorization> {
    WienerHopfFactorization::from_log(log_series(phi, grid)?, grid)
}

/// `max(||phi_+||, ||phi_-||, ||phi_+^{-1}||, ||phi_-^{-1}||)` in the
/// `nu`-norm, or in the `nu`-seminorm of index `n` when given.
pub fn triple_norm(f: &WienerHopfFactorization, nu: &BeurlingWeight, n: Option<usize>) -> f64 {
    [f.plus(), f.minus(), f.plus_inv(), f.minus_inv()]
        .into_iter()
        .map(|s| match n {
            Some(n) => beurling_seminorm(s, nu, n),
            None => beurling_norm(s, nu),
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Interior,
    Exterior,
}

/// Value of the Szegő function at a point off the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SzegoEvaluation {
    pub point: Complex64,
    pub value: Complex64,
    pub side: Side,
}

pub fn szego_d(w: &LaurentSeries, z: Complex64) -> Result<SzegoEvaluation> {
    let grid = SpectralGrid::default();
    szego_d_from_log(&log_series(w, &grid)?, z)
}

/// Szegő function from the coefficients of `log w`:
/// `D_i(z) = exp(L_0/2 + sum_{k>=1} L_k z^k)` inside the disc and
/// `D_e(z) = exp(-L_0/2 - sum_{k>=1} L_{-k} z^{-k})` outside.
pub fn szego_d_from_log(log_w: &LaurentSeries, z: Complex64) -> Result<SzegoEvaluation> {
    let modulus = z.norm();
    if (modulus - 1.0).abs() <= 1e-14 {
        return Err(Error::PointOnCircle(z));
    }
    let half = log_w.coeff(0) * 0.5;
    let band = log_w.half_bandwidth() as i64;
    let (exponent, side) = if modulus < 1.0 {
        let tail = horner((1..=band).map(|k| log_w.coeff(k)), z);
        (half + tail, Side::Interior)
    } else {
        let tail = horner((1..=band).map(|k| log_w.coeff(-k)), z.inv());
        (-half - tail, Side::Exterior)
    };
    Ok(SzegoEvaluation { point: z, value: exponent.exp(), side })
}

// sum_{k>=1} c_k x^k for coefficients c_1, c_2, ...
fn horner(coeffs: impl DoubleEndedIterator<Item = Complex64>, x: Complex64) -> Complex64 {
    coeffs.rev().fold(Complex64::new(0.0, 0.0), |acc, c| (acc + c) * x)
}

/// Szegő function by trapezoidal quadrature of the Herglotz integral on an
/// `m`-point grid. Independent of the coefficient route; used as a cross-check.
pub fn szego_d_quadrature(w: &LaurentSeries, z: Complex64, m: usize) -> Result<Complex64> {
    if (z.norm() - 1.0).abs() <= 1e-14 {
        return Err(Error::PointOnCircle(z));
    }
    let g: GridSampling = samples_from_coeffs(w, m)?;
    check_nonvanishing(g.samples(), SpectralGrid::default().vanish_tol)?;
    let (phases, winding) = unwrap_phase(g.samples());
    if winding != 0 {
        return Err(Error::NonzeroWinding(winding));
    }
    let mean_phase = phases.iter().sum::<f64>() / m as f64;
    let shift = std::f64::consts::TAU * (mean_phase / std::f64::consts::TAU).round();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (v, p)) in g.samples().iter().zip(&phases).enumerate() {
        let e = Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / m as f64);
        let log_v = Complex64::new(v.norm().ln(), p - shift);
        acc += log_v * (e + z) / (e - z);
    }
    Ok((acc / (2.0 * m as f64)).exp())
}

/// How a weight is scaled before its reflection coefficient is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Divide `w` by `exp((log w)_0)` so that `(log w)_0 = 0`.
    #[default]
    LogMeanZero,
    /// Use `w` as given; fail with [`Error::UnnormalizedWeight`] unless
    /// `(log w)_0 = 0` already.
    Strict,
    /// Use `w` as given even if `(log w)_0 != 0`.
    AllowUnnormalized,
}

/// Tolerance on `|(log w)_0|` accepted as already normalized.
pub const NORMALIZED_TOL: f64 = 1e-12;

/// `log w` after applying the normalization policy.
pub fn normalized_log(w: &LaurentSeries, grid: &SpectralGrid, mode: Normalization) -> Result<LaurentSeries> {
    let log = log_series(w, grid)?;
    let l0 = log.coeff(0);
    match mode {
        Normalization::LogMeanZero => Ok(log.with_coeff(0, Complex64::new(0.0, 0.0))),
        Normalization::Strict if l0.norm() > NORMALIZED_TOL => Err(Error::UnnormalizedWeight(l0)),
        Normalization::Strict | Normalization::AllowUnnormalized => Ok(log),
    }
}

pub fn reflection_coefficient(w: &LaurentSeries) -> Result<LaurentSeries> {
    reflection_coefficient_with(w, &SpectralGrid::default(), Normalization::LogMeanZero)
}

/// `r = delta_+^{-1} delta_-^{-1} = phi_+^{-1} phi_-` for the (normalized) weight.
pub fn reflection_coefficient_with(
    w: &LaurentSeries,
    grid: &SpectralGrid,
    mode: Normalization,
) -> Result<LaurentSeries> {
    let f = WienerHopfFactorization::from_log(normalized_log(w, grid, mode)?, grid)?;
    Ok(f.reflection(grid.compress_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn example1(a: f64) -> LaurentSeries {
        LaurentSeries::from_real_terms(&[(-1, -a / 2.0), (0, 1.0), (1, -a / 2.0)])
    }

    fn assert_series_close(a: &LaurentSeries, b: &LaurentSeries, tol: f64) {
        let band = a.half_bandwidth().max(b.half_bandwidth()) as i64;
        for k in -band..=band {
            assert!((a.coeff(k) - b.coeff(k)).norm() <= tol, "k = {k}: {} vs {}", a.coeff(k), b.coeff(k));
        }
    }

    #[test]
    fn winding_of_monomials_and_products() {
        assert_eq!(winding_number(&LaurentSeries::monomial(3, c(1.0)), 64).unwrap(), 3);
        let two_plus_z = LaurentSeries::from_real_terms(&[(0, 2.0), (1, 1.0)]);
        assert_eq!(winding_number(&two_plus_z, 64).unwrap(), 0);
        let prod = multiply(&LaurentSeries::monomial(1, c(1.0)), &two_plus_z);
        assert_eq!(winding_number(&prod, 64).unwrap(), 1);
        assert!(matches!(
            winding_number(&LaurentSeries::zero(), 8),
            Err(Error::NearVanishingSymbol { .. })
        ));
    }

    #[test]
    fn trivial_symbol_factors_trivially() {
        let f = factorize(&LaurentSeries::one()).unwrap();
        assert_series_close(f.plus(), &LaurentSeries::one(), 1e-15);
        assert_series_close(f.minus(), &LaurentSeries::one(), 0.0);
    }

    #[test]
    fn factors_of_product_of_linear_terms() {
        let plus = LaurentSeries::from_real_terms(&[(0, 1.0), (1, -0.5)]);
        let minus = LaurentSeries::from_real_terms(&[(0, 1.0), (-1, -0.5)]);
        let f = factorize(&multiply(&plus, &minus)).unwrap();
        assert_series_close(f.plus(), &plus, 1e-10);
        assert_series_close(f.minus(), &minus, 1e-10);

        let g = factorize(&multiply(&plus, &minus).scale(c(0.8))).unwrap();
        assert_series_close(g.plus(), &plus.scale(c(0.8)), 1e-10);
        assert_series_close(g.minus(), &minus, 1e-10);
        assert!(g.plus().is_analytic_type());
        assert!(g.minus().is_coanalytic_type());
        assert_eq!(g.minus().coeff(0), c(1.0));
        assert_eq!(g.minus_inv().coeff(0), c(1.0));
    }

    #[test]
    fn factorization_errors() {
        assert_eq!(factorize(&LaurentSeries::monomial(1, c(1.0))), Err(Error::NonzeroWinding(1)));
        let vanishing = LaurentSeries::from_real_terms(&[(-1, 0.5), (0, 1.0), (1, 0.5)]);
        assert!(matches!(factorize(&vanishing), Err(Error::NearVanishingSymbol { .. })));
    }

    #[test]
    fn triple_norms_of_factored_symbol() {
        let plus = LaurentSeries::from_real_terms(&[(0, 1.0), (1, -0.5)]);
        let minus = LaurentSeries::from_real_terms(&[(0, 1.0), (-1, -0.5)]);
        let f = factorize(&multiply(&plus, &minus)).unwrap();
        assert_abs_diff_eq!(triple_norm(&f, &BeurlingWeight::Wiener, None), 2.0, epsilon = 1e-10);
        // Only the inverse factors reach |k| >= 2: sum_{k>=2} 0.5^k = 0.5.
        assert_abs_diff_eq!(triple_norm(&f, &BeurlingWeight::Wiener, Some(2)), 0.5, epsilon = 1e-10);

        let one = factorize(&LaurentSeries::one()).unwrap();
        assert_abs_diff_eq!(triple_norm(&one, &BeurlingWeight::Wiener, None), 1.0, epsilon = 1e-15);
        assert_eq!(triple_norm(&one, &BeurlingWeight::Wiener, Some(1)), 0.0);
    }

    #[test]
    fn szego_function_of_example_weight() {
        let w = example1(0.8);
        let d0 = szego_d(&w, c(0.0)).unwrap();
        assert_eq!(d0.side, Side::Interior);
        assert_abs_diff_eq!(d0.value.re, 0.8f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(szego_d(&LaurentSeries::one(), c(3.0)).unwrap().value.re, 1.0, epsilon = 1e-15);
        assert!(matches!(szego_d(&w, Complex64::new(0.0, 1.0)), Err(Error::PointOnCircle(_))));

        for z in [Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.1), Complex64::new(1.7, -0.4)] {
            let series = szego_d(&w, z).unwrap().value;
            let quad = szego_d_quadrature(&w, z, 1024).unwrap();
            assert!((series - quad).norm() <= 1e-8, "{series} vs {quad}");
        }
    }

    #[test]
    fn exterior_branch_is_reflected_interior_for_positive_weights() {
        let w = LaurentSeries::from_terms([
            (-2, Complex64::new(0.1, -0.05)),
            (-1, Complex64::new(-0.2, 0.1)),
            (0, c(1.5)),
            (1, Complex64::new(-0.2, -0.1)),
            (2, Complex64::new(0.1, 0.05)),
        ]);
        let z = Complex64::new(1.3, 0.8);
        let de = szego_d(&w, z).unwrap().value;
        let di = szego_d(&w, (z.conj()).inv()).unwrap().value;
        assert!((de - di.conj().inv()).norm() < 1e-12);
    }

    #[test]
    fn reflection_of_normalized_example() {
        let r = reflection_coefficient(&example1(0.8)).unwrap();
        for k in 0..30 {
            assert_abs_diff_eq!(r.coeff(k).re, 0.75 * 0.5f64.powi(k as i32), epsilon = 1e-10);
        }
        assert_abs_diff_eq!(r.coeff(-1).re, -0.5, epsilon = 1e-10);
        for k in 2..30 {
            assert_abs_diff_eq!(r.coeff(-k).norm(), 0.0, epsilon = 1e-10);
        }
        let unit = reflection_coefficient(&LaurentSeries::one()).unwrap();
        assert_series_close(&unit, &LaurentSeries::one(), 1e-15);
    }

    #[test]
    fn reflection_normalization_policy() {
        let grid = SpectralGrid::default();
        let w = example1(0.8);
        assert!(matches!(
            reflection_coefficient_with(&w, &grid, Normalization::Strict),
            Err(Error::UnnormalizedWeight(_))
        ));
        let raw = reflection_coefficient_with(&w, &grid, Normalization::AllowUnnormalized).unwrap();
        let norm = reflection_coefficient_with(&w, &grid, Normalization::LogMeanZero).unwrap();
        // the unnormalized r carries the extra factor exp(-(log w)_0) = 1/0.8
        assert_abs_diff_eq!(raw.coeff(0).re, norm.coeff(0).re / 0.8, epsilon = 1e-12);
        let scaled = w.scale(c(1.0 / 0.8));
        assert!(reflection_coefficient_with(&scaled, &grid, Normalization::Strict).is_ok());
    }
}

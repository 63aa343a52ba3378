//! The half-order Sobolev norm, the Born map `f -> exp(-P_+ f + P_- f)` and
//! the square-sum bound
//! `(sum_{n >= n0} n |alpha_{n-1}|^2)^{1/2} <= rho / (1 - rho^2)` with
//! `rho^2 = sum_{n >= n0} (n+1) |r_n|^2`.

use num_complex::Complex64;

use crate::bo::{bo_steps, BoOptions, Reflection};
use crate::error::{Error, Result};
use crate::series::{exp_series, samples_from_coeffs, LaurentSeries, SpectralGrid};

/// Relative tolerance on `|f_{-k} - conj(f_k)|`.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// `n0` is the first index with `rho < 1 - RHO_MARGIN`.
pub const RHO_MARGIN: f64 = 1e-9;

/// A real-valued function on the circle with its `H^{1/2}` norm.
#[derive(Clone, Debug, PartialEq)]
pub struct SobolevHalfElement {
    f: LaurentSeries,
    norm: f64,
}

impl SobolevHalfElement {
    pub fn new(f: LaurentSeries) -> Result<Self> {
        let defect = f.symmetry_defect();
        if defect > SYMMETRY_TOL * f.max_abs_coeff().max(1.0) {
            return Err(Error::SymmetryViolation(defect));
        }
        let norm = f
            .terms()
            .map(|(l, c)| (1 + l.unsigned_abs()) as f64 * c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok(SobolevHalfElement { f, norm })
    }

    pub fn series(&self) -> &LaurentSeries {
        &self.f
    }

    /// `(sum_l (1 + |l|) |f_l|^2)^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.norm
    }
}

pub fn h_half_norm(f: &LaurentSeries) -> Result<f64> {
    Ok(SobolevHalfElement::new(f.clone())?.norm())
}

/// `B(f) = exp(-sum_{k>0} f_k z^k + sum_{k<0} f_k z^k)`. The exponent is
/// purely imaginary on the circle, so `|B(f)| = 1` there.
pub fn born_map(f: &SobolevHalfElement, grid: &SpectralGrid) -> Result<LaurentSeries> {
    let exponent = LaurentSeries::from_terms(f.f.terms().filter(|&(k, _)| k != 0).map(|(k, c)| {
        (k, if k > 0 { -c } else { c })
    }));
    exp_series(&exponent, grid)
}

/// `(sum_{n >= n0} (n+1) |r_n|^2)^{1/2}` over the stored band.
pub fn rho(r: &LaurentSeries, n0: usize) -> f64 {
    r.terms()
        .filter(|&(n, _)| n >= n0 as i64)
        .map(|(n, c)| (n + 1) as f64 * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GiRow {
    pub n: usize,
    /// `alpha_{n-1}`.
    pub alpha: Complex64,
    /// `n |alpha_{n-1}|^2`.
    pub weighted: f64,
    /// `n ||(1 - A)^{-1} A e_0||^2`.
    pub intermediate: f64,
    /// `n ||A e_0||^2`.
    pub proxy: f64,
    pub intermediate_pass: bool,
    pub proxy_pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GIBound {
    pub n0: usize,
    pub rho: f64,
    /// `(sum_{n0 <= n <= n_max} n |alpha_{n-1}|^2)^{1/2}`; truncating at
    /// `n_max` only lowers it.
    pub lhs: f64,
    /// `rho / (1 - rho^2)`.
    pub rhs: f64,
    pub n_max: usize,
    /// `rho^4 / (1 - rho^2)^2`.
    pub intermediate_bound: f64,
    /// `rho^4`.
    pub proxy_bound: f64,
    pub rows: Vec<GiRow>,
    pub pass: bool,
}

fn check_positive(w: &LaurentSeries, grid: &SpectralGrid) -> Result<()> {
    let defect = w.symmetry_defect();
    if defect > SYMMETRY_TOL * w.max_abs_coeff() {
        return Err(Error::SymmetryViolation(defect));
    }
    let g = samples_from_coeffs(w, grid.sampling_size(w.half_bandwidth()))?;
    let min = g.samples().iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::Domain(format!("weight is not positive (min {min:e})")));
    }
    Ok(())
}

/// Picks the smallest `n0` with `rho(n0) < 1` and checks the bound with
/// Verblunsky coefficients from the fixed-point route up to `n_max`.
pub fn gi_bound_report(w: &LaurentSeries, n_max: usize, opts: &BoOptions) -> Result<GIBound> {
    check_positive(w, &opts.grid)?;
    let refl = Reflection::from_weight(w, &opts.grid, opts.normalization)?;
    let n0 = (0..=n_max)
        .find(|&n| rho(refl.r(), n) < 1.0 - RHO_MARGIN)
        .ok_or(Error::NoContraction { n_max })?;
    let rho = rho(refl.r(), n0);
    let s = 1.0 - rho * rho;
    let intermediate_bound = rho.powi(4) / (s * s);
    let proxy_bound = rho.powi(4);
    let mut rows = Vec::new();
    for step in bo_steps(&refl, n0.max(1)..=n_max, opts) {
        let step = step?;
        let n = step.n as f64;
        let intermediate = n * step.mu_tail_sq;
        let proxy = n * step.a_e0_sq;
        rows.push(GiRow {
            n: step.n,
            alpha: step.alpha,
            weighted: n * step.alpha.norm_sqr(),
            intermediate,
            proxy,
            intermediate_pass: intermediate <= intermediate_bound * (1.0 + 1e-12) + 1e-15,
            proxy_pass: proxy <= proxy_bound + 1e-10,
        });
    }
    let lhs = rows.iter().map(|r| r.weighted).sum::<f64>().sqrt();
    let rhs = rho / s;
    let pass = lhs <= rhs && rows.iter().all(|r| r.intermediate_pass && r.proxy_pass);
    Ok(GIBound { n0, rho, lhs, rhs, n_max, intermediate_bound, proxy_bound, rows, pass })
}

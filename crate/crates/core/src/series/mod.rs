//! Laurent series on the unit circle.
//!
//! A [`LaurentSeries`] stores the coefficients `c_k`, `-N <= k <= N`, of a
//! function `s(z) = sum c_k z^k` on `|z| = 1`. Nonlinear operations (exp, log,
//! pointwise inversion) go through samples on an equispaced grid of the circle
//! (see [`grid`]); products are exact Cauchy convolutions.

mod grid;
mod weight;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use grid::{coeffs_from_samples, samples_from_coeffs, GridSampling, SpectralGrid};
pub use weight::{beurling_norm, beurling_seminorm, growth_rate, BeurlingWeight};

/// Which side of the coefficient band a series is allowed to occupy.
///
/// The flag is a guarantee: an `Analytic` series has `c_k == 0.0` exactly for
/// every `k < 0`, a `CoAnalytic` one for every `k > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    Full,
    Analytic,
    CoAnalytic,
}

impl Support {
    fn allows(self, k: i64) -> bool {
        match self {
            Support::Full => true,
            Support::Analytic => k >= 0,
            Support::CoAnalytic => k <= 0,
        }
    }

    fn meet(self, other: Support) -> Support {
        if self == other {
            self
        } else {
            Support::Full
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    band: usize,
    // coeffs[k + band] = c_k
    coeffs: Vec<Complex64>,
    support: Support,
}

impl LaurentSeries {
    /// Builds a series from the dense coefficient vector `c_{-band} .. c_{band}`.
    ///
    /// Panics if `coeffs.len() != 2 * band + 1`.
    pub fn from_coeffs(band: usize, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), 2 * band + 1, "coefficient vector must span [-band, band]");
        LaurentSeries { band, coeffs, support: Support::Full }
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let band = terms.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * band + 1];
        for (k, c) in terms {
            coeffs[(k + band as i64) as usize] += c;
        }
        LaurentSeries { band, coeffs, support: Support::Full }
    }

    pub fn from_real_terms(terms: &[(i64, f64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(k, c)| (k, Complex64::new(c, 0.0))))
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        LaurentSeries { band: 0, coeffs: vec![c], support: Support::Full }
    }

    /// `c * z^k`.
    pub fn monomial(k: i64, c: Complex64) -> Self {
        Self::from_terms([(k, c)])
    }

    pub fn half_bandwidth(&self) -> usize {
        self.band
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn is_analytic_type(&self) -> bool {
        self.support == Support::Analytic
    }

    pub fn is_coanalytic_type(&self) -> bool {
        self.support == Support::CoAnalytic
    }

    /// Coefficient `c_k`; exactly zero outside the stored band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.band {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.band as i64) as usize]
        }
    }

    /// Iterates `(k, c_k)` over the stored band.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let band = self.band as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - band, c))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluates `sum c_k z^k` at an arbitrary nonzero point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.terms() {
            if c != Complex64::new(0.0, 0.0) {
                acc += c * z.powi(k as i32);
            }
        }
        acc
    }

    /// Restricts the series to the given side, zeroing the other side exactly.
    pub fn masked(mut self, support: Support) -> Self {
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            let k = i as i64 - self.band as i64;
            if !support.allows(k) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        self.support = support;
        self
    }

    /// Replaces a single coefficient, growing the band if needed. Keeps the
    /// support flag only if `k` is admissible for it.
    pub fn with_coeff(self, k: i64, c: Complex64) -> Self {
        let support = self.support;
        let mut out = self.widened(k.unsigned_abs() as usize);
        let band = out.band as i64;
        out.coeffs[(k + band) as usize] = c;
        if !support.allows(k) {
            out.support = Support::Full;
        }
        out
    }

    fn widened(self, band: usize) -> Self {
        if band <= self.band {
            return self;
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * band + 1];
        let off = band - self.band;
        coeffs[off..off + self.coeffs.len()].copy_from_slice(&self.coeffs);
        LaurentSeries { band, coeffs, support: self.support }
    }

    /// Cuts the band down to `band`, discarding `|k| > band`.
    pub fn truncated(&self, band: usize) -> Self {
        if band >= self.band {
            return self.clone();
        }
        let off = self.band - band;
        LaurentSeries {
            band,
            coeffs: self.coeffs[off..off + 2 * band + 1].to_vec(),
            support: self.support,
        }
    }

    /// Zeroes coefficients with `|c_k| < tol * max |c_k|` and shrinks the band
    /// to the outermost surviving coefficient.
    pub fn compress(&self, tol: f64) -> Self {
        let cutoff = tol * self.max_abs_coeff();
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            if c.norm() < cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        let outer = out
            .terms()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(k, _)| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        out.truncated(outer)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        LaurentSeries {
            band: self.band,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
            support: self.support,
        }
    }

    /// Coefficients `c_k rho^k`, i.e. the series evaluated on the circle of radius `rho`.
    pub fn dilated(&self, rho: f64) -> Self {
        let band = self.band as i64;
        LaurentSeries {
            band: self.band,
            coeffs: self.coeffs.iter().enumerate().map(|(i, &c)| c * rho.powi((i as i64 - band) as i32)).collect(),
            support: self.support,
        }
    }

    /// Multiplication by `z^n`.
    pub fn shifted(&self, n: i64) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k + n, c)))
    }

    /// Coefficients of `conj(s(z))` on the circle: `b_k = conj(c_{-k})`.
    pub fn conj_reflect(&self) -> Self {
        let support = match self.support {
            Support::Full => Support::Full,
            Support::Analytic => Support::CoAnalytic,
            Support::CoAnalytic => Support::Analytic,
        };
        LaurentSeries {
            band: self.band,
            coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
            support,
        }
    }

    /// `max_k |c_k - conj(c_{-k})|`; zero iff the series is real-valued on the circle.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.coeffs.len();
        (0..n)
            .map(|i| (self.coeffs[i] - self.coeffs[n - 1 - i].conj()).norm())
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let band = self.band.max(other.band);
        let coeffs = (-(band as i64)..=band as i64)
            .map(|k| f(self.coeff(k), other.coeff(k)))
            .collect();
        LaurentSeries { band, coeffs, support: self.support.meet(other.support) }
    }
}

impl Default for LaurentSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms().filter(|(_, c)| c.norm() > 0.0) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        multiply(self, rhs)
    }
}

/// Cauchy product `c_k = sum_j a_j b_{k-j}`; the band is `N_a + N_b`.
pub fn multiply(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
    let band = a.band + b.band;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * band + 1];
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &y) in b.coeffs.iter().enumerate() {
            // (i - Na) + (j - Nb) + band = i + j
            coeffs[i + j] += x * y;
        }
    }
    LaurentSeries { band, coeffs, support: a.support.meet(b.support) }
}

/// Riesz projection onto `k >= 0`.
pub fn project_plus(s: &LaurentSeries) -> LaurentSeries {
    s.clone().masked(Support::Analytic)
}

/// Complementary projection onto `k < 0`, so that
/// `project_plus(s) + project_minus(s) == s` coefficientwise.
pub fn project_minus(s: &LaurentSeries) -> LaurentSeries {
    s.clone().masked(Support::CoAnalytic).with_coeff(0, Complex64::new(0.0, 0.0))
}

/// Samples `s` on a grid large enough for its band.
fn sample(s: &LaurentSeries, grid: &SpectralGrid) -> Result<GridSampling> {
    samples_from_coeffs(s, grid.sampling_size(s.half_bandwidth()))
}

/// Continuous branch of the argument along the grid, and the winding number
/// read off from the total increment.
pub(crate) fn unwrap_phase(samples: &[Complex64]) -> (Vec<f64>, i64) {
    let mut phases = Vec::with_capacity(samples.len());
    let mut theta = samples[0].arg();
    phases.push(theta);
    for w in samples.windows(2) {
        theta += (w[1] / w[0]).arg();
        phases.push(theta);
    }
    let closing = (samples[0] / samples[samples.len() - 1]).arg();
    let total = theta + closing - phases[0];
    let winding = (total / std::f64::consts::TAU).round() as i64;
    (phases, winding)
}

pub(crate) fn check_nonvanishing(samples: &[Complex64], vanish_tol: f64) -> Result<()> {
    let (min, max) = samples
        .iter()
        .map(|v| v.norm())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if max == 0.0 || min <= vanish_tol * max {
        return Err(Error::NearVanishingSymbol { min, max });
    }
    Ok(())
}

/// Logarithm of a non-vanishing, winding-zero series.
///
/// The branch is continuous along the circle; the overall multiple of `2 pi i`
/// is fixed so that `Im c_0` lies in `(-pi, pi]`.
pub fn log_series(s: &LaurentSeries, grid: &SpectralGrid) -> Result<LaurentSeries> {
    let g = sample(s, grid)?;
    check_nonvanishing(g.samples(), grid.vanish_tol)?;
    let (mut phases, winding) = unwrap_phase(g.samples());
    if winding != 0 {
        return Err(Error::NonzeroWinding(winding));
    }
    let mean = phases.iter().sum::<f64>() / phases.len() as f64;
    let mut shift = std::f64::consts::TAU * (mean / std::f64::consts::TAU).round();
    if mean - shift <= -std::f64::consts::PI {
        shift -= std::f64::consts::TAU;
    }
    phases.iter_mut().for_each(|p| *p -= shift);
    let logs = g
        .samples()
        .iter()
        .zip(&phases)
        .map(|(v, &p)| Complex64::new(v.norm().ln(), p))
        .collect();
    let out = coeffs_from_samples(&GridSampling::new(logs)?, grid.band)?;
    Ok(out.compress(grid.compress_tol))
}

/// Pointwise exponential. One-sided inputs yield one-sided outputs with the
/// exact constant term `exp(c_0)`.
pub fn exp_series(s: &LaurentSeries, grid: &SpectralGrid) -> Result<LaurentSeries> {
    let g = sample(s, grid)?;
    let exps = g.samples().iter().map(|v| v.exp()).collect();
    let mut out = coeffs_from_samples(&GridSampling::new(exps)?, grid.band)?;
    if s.support != Support::Full {
        out = out.masked(s.support).with_coeff(0, s.coeff(0).exp());
    }
    Ok(out.compress(grid.compress_tol))
}

/// Pointwise reciprocal `1/s` on the circle.
pub fn invert_series(s: &LaurentSeries, grid: &SpectralGrid) -> Result<LaurentSeries> {
    let g = sample(s, grid)?;
    check_nonvanishing(g.samples(), grid.vanish_tol)?;
    let inv = g.samples().iter().map(|v| v.inv()).collect();
    let out = coeffs_from_samples(&GridSampling::new(inv)?, grid.band)?;
    Ok(out.compress(grid.compress_tol))
}

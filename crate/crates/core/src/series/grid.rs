use num_complex::Complex64;
use rustfft::FftPlanner;

use super::LaurentSeries;
use crate::error::{Error, Result};

/// Default half-bandwidth of computed series.
pub const DEFAULT_BAND: usize = 256;
/// Default number of grid points on the circle.
pub const DEFAULT_GRID: usize = 1024;

/// Sampling parameters shared by the grid-based operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralGrid {
    /// Minimum number of sample points (a power of two).
    pub size: usize,
    /// Half-bandwidth of series produced from samples.
    pub band: usize,
    /// Relative threshold below which `min |s| / max |s|` counts as vanishing.
    pub vanish_tol: f64,
    /// Relative threshold used by [`LaurentSeries::compress`] on grid outputs.
    pub compress_tol: f64,
}

impl Default for SpectralGrid {
    fn default() -> Self {
        SpectralGrid { size: DEFAULT_GRID, band: DEFAULT_BAND, vanish_tol: 1e-8, compress_tol: 1e-15 }
    }
}

impl SpectralGrid {
    pub fn new(size: usize, band: usize) -> Result<Self> {
        if !size.is_power_of_two() || size < 2 * band + 2 {
            return Err(Error::BandAliasing { band, grid: size });
        }
        Ok(SpectralGrid { size, band, ..Default::default() })
    }

    /// Number of samples used for an input of half-bandwidth `band`: the
    /// configured size, enlarged to the next admissible power of two.
    pub fn sampling_size(&self, band: usize) -> usize {
        let need = (2 * band.max(self.band) + 2).next_power_of_two();
        self.size.max(need)
    }
}

/// Values of a series at `z_m = exp(2 pi i m / M)`, `m = 0..M`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSampling {
    samples: Vec<Complex64>,
}

impl GridSampling {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() < 2 || !samples.len().is_power_of_two() {
            return Err(Error::BandAliasing { band: 0, grid: samples.len() });
        }
        Ok(GridSampling { samples })
    }

    pub fn size(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// `(1/M) sum |s_m|^2`.
    pub fn mean_square(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    /// `L^2(|dz|)` norm approximated on the grid: `sqrt(2 pi * mean |s|^2)`.
    pub fn l2_norm(&self) -> f64 {
        (std::f64::consts::TAU * self.mean_square()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn check_grid(band: usize, size: usize) -> Result<()> {
    if !size.is_power_of_two() || size < 2 * band + 2 {
        return Err(Error::BandAliasing { band, grid: size });
    }
    Ok(())
}

/// Evaluates `s` on the `M`-point grid: sample `m` is `sum_k c_k e^{2 pi i m k / M}`.
pub fn samples_from_coeffs(s: &LaurentSeries, m: usize) -> Result<GridSampling> {
    let band = s.half_bandwidth();
    check_grid(band, m)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (k, c) in s.terms() {
        buf[k.rem_euclid(m as i64) as usize] = c;
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    Ok(GridSampling { samples: buf })
}

/// Discrete inverse of [`samples_from_coeffs`], folding indices into `[-band, band]`.
pub fn coeffs_from_samples(g: &GridSampling, band: usize) -> Result<LaurentSeries> {
    let m = g.size();
    check_grid(band, m)?;
    let mut buf = g.samples.clone();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let coeffs = (-(band as i64)..=band as i64)
        .map(|k| buf[k.rem_euclid(m as i64) as usize] * scale)
        .collect();
    Ok(LaurentSeries::from_coeffs(band, coeffs))
}

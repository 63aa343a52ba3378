//! Two weights whose Verblunsky coefficients are known in closed form.
//!
//! - `w(theta) = 1 - a cos(theta)`, `0 < a < 1`, with
//!   `mu_pm = 1/a +- sqrt(1/a^2 - 1)` and
//!   `alpha_n = -(mu_+ - mu_-) / (mu_+^{n+2} - mu_-^{n+2})`.
//! - The Rogers-Szegő-type weight with `alpha_n = (-1)^n q^{(n+1)/2}`, whose
//!   Szegő function is an infinite product and whose Schur-type function is
//!   `S(z) = -q^{1/2} z / (1 + q^{1/2} z)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{coeffs_from_samples, GridSampling, LaurentSeries, SpectralGrid};

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("{name} = {x} must lie in (0, 1)")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Example1 {
    pub a: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
}

impl Example1 {
    pub fn new(a: f64) -> Result<Self> {
        let (mu_plus, mu_minus) = ex1_mu(a)?;
        Ok(Example1 { a, mu_plus, mu_minus })
    }

    /// `1 - a cos(theta)`: coefficients `-a/2, 1, -a/2`.
    pub fn weight(&self) -> LaurentSeries {
        LaurentSeries::from_real_terms(&[(-1, -self.a / 2.0), (0, 1.0), (1, -self.a / 2.0)])
    }

    pub fn alpha(&self, n: usize) -> f64 {
        let k = n as i32 + 2;
        -(self.mu_plus - self.mu_minus) / (self.mu_plus.powi(k) - self.mu_minus.powi(k))
    }

    /// `sqrt(a / (2 mu_-)) (1 - z / mu_+)`.
    pub fn d_i(&self, z: Complex64) -> Complex64 {
        (self.a / (2.0 * self.mu_minus)).sqrt() * (1.0 - z / self.mu_plus)
    }

    /// `mu_+ - mu_-`, the limit of `-alpha_n mu_+^{n+2}`.
    pub fn residue(&self) -> f64 {
        self.mu_plus - self.mu_minus
    }
}

pub fn ex1_mu(a: f64) -> Result<(f64, f64)> {
    check_unit_interval("a", a)?;
    let inv = 1.0 / a;
    let root = (inv * inv - 1.0).sqrt();
    Ok((inv + root, inv - root))
}

pub fn ex1_alpha(a: f64, n: usize) -> Result<f64> {
    Ok(Example1::new(a)?.alpha(n))
}

pub fn ex1_di(a: f64, z: Complex64) -> Result<Complex64> {
    Ok(Example1::new(a)?.d_i(z))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Example2 {
    pub q: f64,
    /// Number of factors kept in the product for `D_i`.
    pub terms: usize,
}

impl Example2 {
    pub fn new(q: f64, terms: usize) -> Result<Self> {
        check_unit_interval("q", q)?;
        if terms == 0 {
            return Err(Error::Domain("product needs at least one factor".into()));
        }
        Ok(Example2 { q, terms })
    }

    pub fn alpha(&self, n: usize) -> f64 {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * self.q.powf((n as f64 + 1.0) / 2.0)
    }

    pub fn s(&self, z: Complex64) -> Complex64 {
        let s = self.q.sqrt();
        -s * z / (1.0 + s * z)
    }

    /// The simple pole `-q^{-1/2}` of `S`.
    pub fn pole(&self) -> f64 {
        -1.0 / self.q.sqrt()
    }

    /// `prod_{j < terms} (1 - q^{j+1})^{1/2} (1 + q^{j+1/2} z)`.
    pub fn d_i(&self, z: Complex64) -> Complex64 {
        (0..self.terms).fold(Complex64::new(1.0, 0.0), |acc, j| {
            let j = j as f64;
            acc * (1.0 - self.q.powf(j + 1.0)).sqrt() * (1.0 + self.q.powf(j + 0.5) * z)
        })
    }

    /// `q^terms`, the size of the first omitted factor's deviation from one.
    pub fn tail_bound(&self) -> f64 {
        self.q.powi(self.terms as i32)
    }

    /// `|D_i|^2` sampled on the grid and converted to coefficients.
    pub fn weight(&self, grid: &SpectralGrid) -> Result<LaurentSeries> {
        let m = grid.size;
        let samples = (0..m)
            .map(|k| Complex64::new(self.d_i(Complex64::from_polar(1.0, TAU * k as f64 / m as f64)).norm_sqr(), 0.0))
            .collect();
        let w = coeffs_from_samples(&GridSampling::new(samples)?, grid.band.min(m / 2 - 1))?;
        // the samples are real, so only rounding breaks the conjugate symmetry
        let sym = LaurentSeries::from_terms(w.terms().map(|(k, c)| (k, (c + w.coeff(-k).conj()) * 0.5)));
        Ok(sym.compress(grid.compress_tol))
    }

    /// Residue of `S` at its pole by the trapezoidal rule on a circle of
    /// `radius` around it.
    pub fn residue(&self, radius: f64, points: usize) -> Complex64 {
        let centre = Complex64::new(self.pole(), 0.0);
        let sum: Complex64 = (0..points)
            .map(|k| {
                let e = Complex64::from_polar(radius, TAU * k as f64 / points as f64);
                self.s(centre + e) * e
            })
            .sum();
        sum / points as f64
    }
}

pub fn ex2_alpha(q: f64, n: usize) -> Result<f64> {
    Ok(Example2::new(q, 1)?.alpha(n))
}

pub fn ex2_s(q: f64, z: Complex64) -> Result<Complex64> {
    Ok(Example2::new(q, 1)?.s(z))
}

pub fn ex2_di(q: f64, z: Complex64, terms: usize) -> Result<Complex64> {
    Ok(Example2::new(q, terms)?.d_i(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::samples_from_coeffs;
    use crate::wienerhopf::szego_d;
    use approx::assert_abs_diff_eq;

    #[test]
    fn example1_roots() {
        assert_eq!(ex1_mu(0.8).unwrap(), (2.0, 0.5));
        for a in [0.1, 0.5, 0.9, 0.999999] {
            let (p, m) = ex1_mu(a).unwrap();
            assert_abs_diff_eq!(p * m, 1.0, epsilon = 1e-12);
            assert!(0.0 < m && m < 1.0);
        }
        let (p, m) = ex1_mu(1.0 - 1e-12).unwrap();
        assert!((p - 1.0).abs() < 1e-5 && (m - 1.0).abs() < 1e-5);
        assert!(ex1_mu(1.0).is_err() && ex1_mu(0.0).is_err());
    }

    #[test]
    fn example1_coefficients() {
        assert_abs_diff_eq!(ex1_alpha(0.8, 0).unwrap(), -0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(ex1_alpha(0.8, 1).unwrap(), -4.0 / 21.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ex1_alpha(0.8, 2).unwrap(), -8.0 / 85.0, epsilon = 1e-15);
        let ex = Example1::new(0.8).unwrap();
        assert_abs_diff_eq!(-ex.alpha(30) * 2f64.powi(32), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn example1_szego_function() {
        let ex = Example1::new(0.8).unwrap();
        assert_abs_diff_eq!(ex.d_i(Complex64::new(0.0, 0.0)).re, 0.8f64.sqrt(), epsilon = 1e-15);
        assert_eq!(ex.d_i(Complex64::new(2.0, 0.0)).norm(), 0.0);
        for k in 0..20 {
            let z = Complex64::from_polar(0.05 * k as f64, 0.7 * k as f64);
            let d = szego_d(&ex.weight(), z).unwrap().value;
            assert!((d - ex.d_i(z)).norm() < 1e-8);
        }
    }

    #[test]
    fn example1_weight_factors() {
        let ex = Example1::new(0.8).unwrap();
        let g = samples_from_coeffs(&ex.weight(), 256).unwrap();
        for (k, v) in g.samples().iter().enumerate() {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / 256.0);
            let rhs = ex.a / (2.0 * ex.mu_minus) * (1.0 - z / ex.mu_plus).norm_sqr();
            assert_abs_diff_eq!(v.re, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn example2_closed_forms() {
        assert_eq!(ex2_alpha(0.25, 0).unwrap(), 0.5);
        assert_eq!(ex2_alpha(0.25, 1).unwrap(), -0.25);
        assert_eq!(ex2_alpha(0.25, 2).unwrap(), 0.125);
        assert_eq!(ex2_s(0.25, Complex64::new(0.0, 0.0)).unwrap().norm(), 0.0);
        let ex = Example2::new(0.25, 60).unwrap();
        let res = ex.residue(0.5, 64);
        assert_abs_diff_eq!(res.re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(res.im, 0.0, epsilon = 1e-12);
        assert!(ex.tail_bound() < 1e-12);
        assert!(Example2::new(1.5, 10).is_err());
    }

    #[test]
    fn example2_weight_is_real_and_positive() {
        let ex = Example2::new(0.25, 60).unwrap();
        let w = ex.weight(&SpectralGrid::default()).unwrap();
        assert_eq!(w.symmetry_defect(), 0.0);
        assert!(w.half_bandwidth() < 30);
        let g = samples_from_coeffs(&w, 1024).unwrap();
        assert!(g.samples().iter().all(|v| v.re > 0.0));
    }
}

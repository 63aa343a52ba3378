//! Monic orthogonal polynomials on the unit circle from the moments of a
//! weight, and the Verblunsky coefficients `alpha_{n-1} = -conj(Phi_n(0))`.
//!
//! Every degree is solved independently by a dense system in the moments
//! `c_j = w_j`; no recurrence is shared with the fixed-point route in
//! [`crate::bo`], so the two can check each other.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// Relative pivot threshold for the moment systems.
pub const MOMENT_PIVOT_TOL: f64 = 1e-12;

/// `Phi_n(z) = z^n + ...` with coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPolynomial {
    coeffs: Vec<Complex64>,
}

impl MonicPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn at_zero(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `max_{0 <= j < n} |sum_k (Phi_n)_k w_{j-k}|`.
    pub fn orthogonality_residual(&self, w: &LaurentSeries) -> f64 {
        (0..self.degree() as i64)
            .map(|j| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c * w.coeff(j - k as i64))
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Solves `sum_{k=0}^{n} (Phi_n)_k w_{j-k} = 0`, `j = 0..n-1`, with
/// `(Phi_n)_n = 1`.
pub fn monic_opuc(w: &LaurentSeries, n: usize) -> Result<MonicPolynomial> {
    let one = Complex64::new(1.0, 0.0);
    if n == 0 {
        return Ok(MonicPolynomial { coeffs: vec![one] });
    }
    let gram = DMatrix::from_fn(n, n, |j, k| w.coeff(j as i64 - k as i64));
    let rhs = DVector::from_fn(n, |j, _| -w.coeff(j as i64 - n as i64));
    let scale = gram.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lu = gram.lu();
    let pivot = lu.u().diagonal().iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
    if scale == 0.0 || pivot < MOMENT_PIVOT_TOL * scale {
        return Err(Error::SingularMomentSection { n, pivot });
    }
    let x = lu.solve(&rhs).ok_or(Error::SingularMomentSection { n, pivot })?;
    let mut coeffs: Vec<Complex64> = x.iter().copied().collect();
    coeffs.push(one);
    Ok(MonicPolynomial { coeffs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Moments,
    Bo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Moments => "moments",
            Method::Bo => "bo",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Ok,
    /// Solved, but below the degree from which the fixed-point operator is
    /// known to contract.
    BelowThreshold,
    Failed(Error),
}

/// One degree `n`: `alpha` is `alpha_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerblunskyRow {
    pub n: usize,
    pub alpha: Complex64,
    pub phi_n_zero: Complex64,
    pub method: Method,
    /// Trace-norm bound of the fixed-point operator (fixed-point route only).
    pub diag: Option<f64>,
    pub status: RowStatus,
}

impl VerblunskyRow {
    pub fn failed(n: usize, method: Method, err: Error) -> Self {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        VerblunskyRow { n, alpha: nan, phi_n_zero: nan, method, diag: None, status: RowStatus::Failed(err) }
    }

    pub fn is_failed(&self) -> bool {
        matches!(self.status, RowStatus::Failed(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerblunskyReport {
    pub method: Method,
    /// Rows for `n = 1..=n_max`.
    pub rows: Vec<VerblunskyRow>,
    /// Smallest `n` from which the fixed-point operator contracts.
    pub n0: Option<usize>,
}

impl VerblunskyReport {
    /// `alpha_m`, taken from the row of degree `m + 1`.
    pub fn alpha(&self, m: usize) -> Option<Complex64> {
        self.rows.iter().find(|r| r.n == m + 1 && !r.is_failed()).map(|r| r.alpha)
    }

    pub fn failed_rows(&self) -> impl Iterator<Item = &VerblunskyRow> {
        self.rows.iter().filter(|r| r.is_failed())
    }
}

/// Verblunsky coefficients `alpha_0 .. alpha_{n_max-1}` by dense moment
/// solves. Singular systems are reported per row.
pub fn verblunsky_from_moments(w: &LaurentSeries, n_max: usize) -> VerblunskyReport {
    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| match monic_opuc(w, n) {
            Ok(p) => VerblunskyRow {
                n,
                alpha: -p.at_zero().conj(),
                phi_n_zero: p.at_zero(),
                method: Method::Moments,
                diag: None,
                status: RowStatus::Ok,
            },
            Err(e) => VerblunskyRow::failed(n, Method::Moments, e),
        })
        .collect();
    VerblunskyReport { method: Method::Moments, rows, n0: None }
}

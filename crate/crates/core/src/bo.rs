//! Verblunsky coefficients through the fixed-point equation
//! `mu = e_0 + A^(n) mu` built from the reflection coefficient `r` of a weight.
//!
//! The operator acts on sequences indexed by `l >= 0` with entries
//! `A^(n)_{l,p} = sum_{t >= 0} r_{l+t+n+1} (r^{-1})_{-(t+n+1+p)}`; for real
//! weights `(r^{-1})_{-m} = conj(r_m)` and `A^(n) = G G^*` is Hermitian
//! positive semidefinite. From the solution,
//! `Phi_n(0) = sum_l mu_l (r^{-1})_{-n-l}`.

use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::geometric_ratio;
use crate::opuc::{Method, RowStatus, VerblunskyReport, VerblunskyRow};
use crate::series::{
    beurling_norm, growth_rate, invert_series, samples_from_coeffs, BeurlingWeight, LaurentSeries,
    SpectralGrid,
};
use crate::wienerhopf::{reflection_coefficient_with, winding_number_with, Normalization};

/// Largest accepted residual `max |(I - A) mu - e_0|`.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;
/// Change in `alpha` below which doubling the truncation stops.
pub const TRUNCATION_TOL: f64 = 1e-10;
/// Trace bound under which the Neumann series is run as a cross-check.
pub const NEUMANN_BOUND: f64 = 0.5;

/// `r` and `r^{-1}` of a weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Reflection {
    r: LaurentSeries,
    r_inv: LaurentSeries,
    real: bool,
}

impl Reflection {
    pub fn from_weight(w: &LaurentSeries, grid: &SpectralGrid, mode: Normalization) -> Result<Self> {
        let r = reflection_coefficient_with(w, grid, mode)?;
        let real = w.symmetry_defect() <= 1e-12 * w.max_abs_coeff();
        Self::from_series(r, grid, real)
    }

    /// `real` selects the Hermitian form of the operator; it is only valid
    /// when `|r| = 1` on the circle.
    pub fn from_series(r: LaurentSeries, grid: &SpectralGrid, real: bool) -> Result<Self> {
        let r_inv = invert_series(&r, grid).map_err(|e| match e {
            Error::NearVanishingSymbol { min, .. } => Error::ReflectionNotInvertible { min },
            other => other,
        })?;
        Ok(Reflection { r, r_inv, real })
    }

    pub fn r(&self) -> &LaurentSeries {
        &self.r
    }

    pub fn r_inv(&self) -> &LaurentSeries {
        &self.r_inv
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// `sum_{m > n} (1 + m) |r_m|^2`, a bound on the trace norm of `A^(n)`.
    pub fn trace_bound(&self, n: usize) -> f64 {
        self.r
            .terms()
            .filter(|&(m, _)| m > n as i64)
            .map(|(m, c)| (1 + m) as f64 * c.norm_sqr())
            .sum()
    }

    fn band(&self) -> usize {
        self.r.half_bandwidth().max(self.r_inv.half_bandwidth())
    }

    /// Number of rows of `A^(n)` that can be nonzero.
    pub fn nonzero_rows(&self, n: usize) -> usize {
        self.band().saturating_sub(n).max(1)
    }
}

/// The `L x L` truncation of `A^(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BOOperator {
    n: usize,
    matrix: DMatrix<Complex64>,
}

pub fn build_bo(refl: &Reflection, n: usize, size: usize) -> BOOperator {
    let inner = refl.band().saturating_sub(n);
    let shift = n as i64 + 1;
    let g = DMatrix::from_fn(size, inner, |l, t| refl.r.coeff(l as i64 + t as i64 + shift));
    let h = if refl.real {
        g.adjoint()
    } else {
        DMatrix::from_fn(inner, size, |t, p| refl.r_inv.coeff(-(t as i64 + shift + p as i64)))
    };
    BOOperator { n, matrix: g * h }
}

impl BOOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, l: usize, p: usize) -> Complex64 {
        self.matrix[(l, p)]
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        self.matrix.clone().singular_values().sum()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.matrix.clone().singular_values().max()
    }

    /// `A e_0`, the first column.
    pub fn apply_e0(&self) -> DVector<Complex64> {
        self.matrix.column(0).into_owned()
    }
}

/// Solution of `mu = e_0 + A mu` on the truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct MuTilde {
    pub n: usize,
    pub coeffs: DVector<Complex64>,
    pub residual: f64,
    /// `max |mu_neumann - mu|` when the Neumann series was run.
    pub neumann_gap: Option<f64>,
}

fn unit(size: usize) -> DVector<Complex64> {
    DVector::from_fn(size, |i, _| Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0))
}

/// Dense LU solve of `(I - A) mu = e_0`. `trace_bound` decides whether the
/// Neumann cross-check is run and is reported on failure.
pub fn solve_mu(a: &BOOperator, trace_bound: f64) -> Result<MuTilde> {
    let size = a.size();
    let e0 = unit(size);
    let system = DMatrix::<Complex64>::identity(size, size) - &a.matrix;
    let fail = |residual| Error::ContractionFailure { n: a.n, bound: trace_bound, residual };
    let mu = system.clone().lu().solve(&e0).ok_or(fail(f64::INFINITY))?;
    let residual = (&system * &mu - &e0).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if !(residual <= SOLVE_RESIDUAL_TOL) {
        return Err(fail(residual));
    }
    let neumann_gap = (trace_bound < NEUMANN_BOUND).then(|| {
        let mut x = e0.clone();
        for _ in 0..500 {
            let next = &e0 + &a.matrix * &x;
            let step = (&next - &x).iter().map(|c| c.norm()).fold(0.0, f64::max);
            x = next;
            if step <= 1e-17 {
                break;
            }
        }
        (&x - &mu).iter().map(|c| c.norm()).fold(0.0, f64::max)
    });
    Ok(MuTilde { n: a.n, coeffs: mu, residual, neumann_gap })
}

/// `Phi_n(0) = sum_l mu_l (r^{-1})_{-n-l}`.
pub fn phi_n_zero(mu: &MuTilde, r_inv: &LaurentSeries) -> Complex64 {
    mu.coeffs
        .iter()
        .enumerate()
        .map(|(l, &m)| m * r_inv.coeff(-(mu.n as i64) - l as i64))
        .sum()
}

/// `Phi_n(0) - (r^{-1})_{-n} = sum_l (A mu)_l (r^{-1})_{-n-l}`, formed without
/// cancellation.
pub fn born_correction(a: &BOOperator, mu: &MuTilde, r_inv: &LaurentSeries) -> Complex64 {
    let a_mu = &a.matrix * &mu.coeffs;
    a_mu.iter()
        .enumerate()
        .map(|(l, &v)| v * r_inv.coeff(-(a.n as i64) - l as i64))
        .sum()
}

/// Truncation and normalization settings for the fixed-point route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoOptions {
    pub grid: SpectralGrid,
    /// Initial truncation size `L`.
    pub size: usize,
    /// Upper limit for the automatic doubling of `L`.
    pub max_size: usize,
    pub normalization: Normalization,
}

impl Default for BoOptions {
    fn default() -> Self {
        BoOptions {
            grid: SpectralGrid::default(),
            size: 64,
            max_size: 1024,
            normalization: Normalization::LogMeanZero,
        }
    }
}

/// Everything computed for one degree `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoStep {
    pub n: usize,
    /// Truncation size finally used.
    pub size: usize,
    /// `alpha_{n-1}`.
    pub alpha: Complex64,
    pub phi_n_zero: Complex64,
    /// `Phi_n(0) - (r^{-1})_{-n}`.
    pub correction: Complex64,
    pub trace_bound: f64,
    pub residual: f64,
    pub neumann_gap: Option<f64>,
    /// `||mu - e_0||^2 = ||(I - A)^{-1} A e_0||^2`.
    pub mu_tail_sq: f64,
    /// `||A e_0||^2`.
    pub a_e0_sq: f64,
}

struct Solved {
    op: BOOperator,
    mu: MuTilde,
    alpha: Complex64,
    phi0: Complex64,
}

fn solve_at(refl: &Reflection, n: usize, size: usize, bound: f64) -> Result<Solved> {
    let op = build_bo(refl, n, size);
    let mu = solve_mu(&op, bound)?;
    let phi0 = phi_n_zero(&mu, &refl.r_inv);
    let alpha = if refl.real {
        -mu.coeffs
            .iter()
            .enumerate()
            .map(|(l, m)| m.conj() * refl.r.coeff((n + l) as i64))
            .sum::<Complex64>()
    } else {
        -phi0.conj()
    };
    Ok(Solved { op, mu, alpha, phi0 })
}

/// Solves degree `n`, doubling `L` until `alpha` moves by less than
/// [`TRUNCATION_TOL`] or the truncation covers every nonzero row.
pub fn bo_step(refl: &Reflection, n: usize, opts: &BoOptions) -> Result<BoStep> {
    let bound = refl.trace_bound(n);
    let cap = refl.nonzero_rows(n).min(opts.max_size.max(1));
    let mut size = opts.size.max(1).min(cap);
    let mut cur = solve_at(refl, n, size, bound)?;
    while size < cap {
        let next_size = (2 * size).min(cap);
        let next = solve_at(refl, n, next_size, bound)?;
        let delta = (next.alpha - cur.alpha).norm();
        cur = next;
        size = next_size;
        if delta < TRUNCATION_TOL {
            break;
        }
    }
    let a_e0 = cur.op.apply_e0();
    let mu_tail_sq = cur.mu.coeffs.iter().enumerate().map(|(l, m)| {
        if l == 0 { (m - Complex64::new(1.0, 0.0)).norm_sqr() } else { m.norm_sqr() }
    });
    Ok(BoStep {
        n,
        size,
        alpha: cur.alpha,
        phi_n_zero: cur.phi0,
        correction: born_correction(&cur.op, &cur.mu, &refl.r_inv),
        trace_bound: bound,
        residual: cur.mu.residual,
        neumann_gap: cur.mu.neumann_gap,
        mu_tail_sq: mu_tail_sq.sum(),
        a_e0_sq: a_e0.iter().map(|c| c.norm_sqr()).sum(),
    })
}

/// Steps for every `n` in the range, computed in parallel and returned in order.
pub fn bo_steps(refl: &Reflection, n_range: RangeInclusive<usize>, opts: &BoOptions) -> Vec<Result<BoStep>> {
    n_range.into_par_iter().map(|n| bo_step(refl, n, opts)).collect()
}

/// Smallest `n <= n_max` whose trace bound is below one.
pub fn contraction_threshold(refl: &Reflection, n_max: usize) -> Option<usize> {
    (0..=n_max).find(|&n| refl.trace_bound(n) < 1.0)
}

pub fn verblunsky_bo(w: &LaurentSeries, n_max: usize, opts: &BoOptions) -> Result<VerblunskyReport> {
    let refl = Reflection::from_weight(w, &opts.grid, opts.normalization)?;
    Ok(verblunsky_from_reflection(&refl, n_max, opts))
}

/// Rows `n = 1..=n_max`; degrees whose trace bound is at least one are
/// attempted and flagged, failed solves are reported per row.
pub fn verblunsky_from_reflection(refl: &Reflection, n_max: usize, opts: &BoOptions) -> VerblunskyReport {
    let rows = bo_steps(refl, 1..=n_max, opts)
        .into_iter()
        .zip(1..)
        .map(|(step, n)| match step {
            Ok(s) => VerblunskyRow {
                n,
                alpha: s.alpha,
                phi_n_zero: s.phi_n_zero,
                method: Method::Bo,
                diag: Some(s.trace_bound),
                status: if s.trace_bound < 1.0 { RowStatus::Ok } else { RowStatus::BelowThreshold },
            },
            Err(e) => {
                let mut row = VerblunskyRow::failed(n, Method::Bo, e);
                row.diag = Some(refl.trace_bound(n));
                row
            }
        })
        .collect();
    VerblunskyReport { method: Method::Bo, rows, n0: contraction_threshold(refl, n_max) }
}

/// Whether a weight lies in the class required for weighted summability.
#[derive(Clone, Debug, PartialEq)]
pub struct Admissibility {
    pub growth_rate: f64,
    pub weighted_norm: f64,
    /// `w` has no zeros in `exp(-A) <= |z| <= exp(A)`: it is non-vanishing
    /// with winding zero on both boundary circles.
    pub annulus_ok: bool,
}

pub fn admissibility(w: &LaurentSeries, nu: &BeurlingWeight, grid: &SpectralGrid) -> Admissibility {
    let rate = growth_rate(nu, 1000);
    let circle_ok = |radius: f64| {
        let dilated = w.dilated(radius);
        let m = grid.sampling_size(dilated.half_bandwidth());
        samples_from_coeffs(&dilated, m).is_ok()
            && matches!(winding_number_with(&dilated, m, grid.vanish_tol), Ok(0))
    };
    let annulus_ok = circle_ok(1.0) && (rate <= 0.0 || (circle_ok(rate.exp()) && circle_ok((-rate).exp())));
    Admissibility { growth_rate: rate, weighted_norm: beurling_norm(w, nu), annulus_ok }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaxterRow {
    pub n: usize,
    pub phi_abs: f64,
    pub nu_n: f64,
    /// `nu_n |Phi_n(0)|`.
    pub increment: f64,
    pub partial_sum: f64,
    /// `increment_n / increment_{n-1}`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaxterReport {
    pub rows: Vec<BaxterRow>,
    pub n0: Option<usize>,
    /// Geometric ratio of the increments fitted over the second half of the rows.
    pub fitted_ratio: Option<f64>,
    /// `false` flags increments that do not decay.
    pub decaying: bool,
    pub admissibility: Admissibility,
}

fn ratio(cur: f64, prev: Option<f64>) -> Option<f64> {
    prev.filter(|&p| p > 0.0).map(|p| cur / p)
}

/// Partial sums of `nu_n |Phi_n(0)|` for `n = 1..=n_max`, summed from the
/// contraction threshold on.
pub fn baxter_report(w: &LaurentSeries, nu: &BeurlingWeight, n_max: usize, opts: &BoOptions) -> Result<BaxterReport> {
    let refl = Reflection::from_weight(w, &opts.grid, opts.normalization)?;
    let report = verblunsky_from_reflection(&refl, n_max, opts);
    if let Some(row) = report.failed_rows().next() {
        if let RowStatus::Failed(e) = &row.status {
            return Err(e.clone());
        }
    }
    let start = report.n0.unwrap_or(n_max + 1).max(1);
    let mut rows = Vec::with_capacity(report.rows.len());
    let mut sum = 0.0;
    let mut prev = None;
    for r in &report.rows {
        let nu_n = nu.value(r.n as i64);
        let phi_abs = r.phi_n_zero.norm();
        let increment = nu_n * phi_abs;
        if r.n >= start {
            sum += increment;
        }
        rows.push(BaxterRow { n: r.n, phi_abs, nu_n, increment, partial_sum: sum, ratio: ratio(increment, prev) });
        prev = Some(increment);
    }
    let fitted_ratio = geometric_ratio(rows.iter().filter(|r| r.n > n_max / 2).map(|r| (r.n, r.increment)));
    Ok(BaxterReport {
        rows,
        n0: report.n0,
        decaying: fitted_ratio.is_none_or(|q| q < 1.0),
        fitted_ratio,
        admissibility: admissibility(w, nu, &opts.grid),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BornRow {
    pub n: usize,
    pub phi_n_zero: Complex64,
    /// `(r^{-1})_{-n}`.
    pub leading: Complex64,
    /// `d_n = Phi_n(0) - (r^{-1})_{-n}`.
    pub difference: Complex64,
    /// `nu_n^3 |d_n|`.
    pub weighted: f64,
    pub partial_sum: f64,
    /// `|d_n| / |d_{n-1}|`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BornReport {
    pub rows: Vec<BornRow>,
    pub n0: Option<usize>,
}

impl BornReport {
    /// Least-squares geometric ratio of `|d_n|` over `range`.
    pub fn fitted_ratio(&self, range: RangeInclusive<usize>) -> Option<f64> {
        geometric_ratio(
            self.rows.iter().filter(|r| range.contains(&r.n)).map(|r| (r.n, r.difference.norm())),
        )
    }

    /// `weighted_n` of the last row, i.e. the last increment of the partial sums.
    pub fn last_increment(&self) -> Option<f64> {
        self.rows.last().map(|r| r.weighted)
    }
}

/// Differences between `Phi_n(0)` and its leading term `(r^{-1})_{-n}`,
/// weighted by `nu_n^3`. `nu` must increase on `n >= 0`.
pub fn born_report(w: &LaurentSeries, nu: &BeurlingWeight, n_max: usize, opts: &BoOptions) -> Result<BornReport> {
    if !nu.is_increasing(n_max as i64 + 1) {
        return Err(Error::InvalidWeight(format!("{nu} is not increasing")));
    }
    let refl = Reflection::from_weight(w, &opts.grid, opts.normalization)?;
    let n0 = contraction_threshold(&refl, n_max);
    let start = n0.unwrap_or(n_max + 1).max(1);
    let mut rows = Vec::with_capacity(n_max);
    let mut sum = 0.0;
    let mut prev = None;
    for step in bo_steps(&refl, 1..=n_max, opts) {
        let s = step?;
        let d = s.correction.norm();
        let weighted = nu.value(s.n as i64).powi(3) * d;
        if s.n >= start {
            sum += weighted;
        }
        rows.push(BornRow {
            n: s.n,
            phi_n_zero: s.phi_n_zero,
            leading: refl.r_inv.coeff(-(s.n as i64)),
            difference: s.correction,
            weighted,
            partial_sum: sum,
            ratio: ratio(d, prev),
        });
        prev = Some(d);
    }
    Ok(BornReport { rows, n0 })
}

/// `alpha_{n-1} * pole^{n+1}` for each row; tends to a multiple of the residue
/// of the Schur-type function at a simple pole of modulus greater than one.
pub fn residue_sequence(report: &VerblunskyReport, pole: Complex64) -> Vec<(usize, Complex64)> {
    report
        .rows
        .iter()
        .filter(|r| !r.is_failed())
        .map(|r| (r.n, r.alpha * pole.powi(r.n as i32 + 1)))
        .collect()
}

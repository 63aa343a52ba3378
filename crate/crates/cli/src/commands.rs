//! Subcommand implementations. Each returns the process exit code on success.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;
use toeplitz_opuc::bo::{baxter_report, born_report, verblunsky_bo, BoOptions};
use toeplitz_opuc::closedforms::{Example1, Example2};
use toeplitz_opuc::gi::gi_bound_report;
use toeplitz_opuc::opuc::{verblunsky_from_moments, VerblunskyReport, VerblunskyRow};
use toeplitz_opuc::series::{log_series, BeurlingWeight, LaurentSeries, SpectralGrid};
use toeplitz_opuc::toeplitz::{build_section, invert_section, theorem1_report_with, Probe};
use toeplitz_opuc::wienerhopf::{factorize_with, winding_number_with, Normalization};
use toeplitz_opuc::Error as CoreError;

use crate::spec::{coefficient_map, SymbolSpec};
use crate::{Common, Example1Args, Example2Args, ExampleOutput, MethodArg, NormalizeArg};

/// Largest tolerated disagreement between the two coefficient routes.
pub const DELTA_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid symbol specification: {0}")]
    Spec(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Io { .. } => "Io",
            CliError::Spec(_) => "InvalidSymbolSpec",
            CliError::Usage(_) => "Usage",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// 17 significant digits, independent of locale. Negative zero prints as zero.
fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_spec(path: &Path) -> Result<SymbolSpec> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    Ok(serde_json::from_str(&text)?)
}

fn grid_of(a: &Common) -> Result<SpectralGrid> {
    Ok(SpectralGrid::new(a.grid, a.band)?)
}

fn weight_of(a: &Common, default: &str) -> Result<BeurlingWeight> {
    Ok(a.weight.as_deref().unwrap_or(default).parse()?)
}

fn normalization(a: &Common, default: NormalizeArg) -> Normalization {
    match a.normalize.unwrap_or(default) {
        NormalizeArg::None => Normalization::Strict,
        NormalizeArg::LogMeanZero => Normalization::LogMeanZero,
    }
}

/// The symbol for the Toeplitz commands, rescaled only on request.
fn toeplitz_symbol(a: &Common, grid: &SpectralGrid) -> Result<LaurentSeries> {
    let phi = read_spec(&a.symbol)?.resolve(grid)?;
    if a.normalize == Some(NormalizeArg::LogMeanZero) {
        let l0 = log_series(&phi, grid)?.coeff(0);
        return Ok(phi.scale((-l0).exp()));
    }
    Ok(phi)
}

fn bo_options(a: &Common, grid: SpectralGrid) -> BoOptions {
    BoOptions { grid, size: a.bo_size, normalization: normalization(a, NormalizeArg::LogMeanZero), ..Default::default() }
}

#[derive(Serialize)]
struct FactorsJson {
    winding: i64,
    reconstruction_error: f64,
    log_symbol: BTreeMap<i64, [f64; 2]>,
    plus: BTreeMap<i64, [f64; 2]>,
    minus: BTreeMap<i64, [f64; 2]>,
    plus_inv: BTreeMap<i64, [f64; 2]>,
    minus_inv: BTreeMap<i64, [f64; 2]>,
}

pub fn factorize(a: &Common) -> Result<u8> {
    let grid = grid_of(a)?;
    let phi = toeplitz_symbol(a, &grid)?;
    let f = factorize_with(&phi, &grid)?;
    let tol = grid.compress_tol;
    let json = FactorsJson {
        winding: f.winding(),
        reconstruction_error: f.reconstruction_error(&phi, &grid)?,
        log_symbol: coefficient_map(&f.log_symbol().compress(tol)),
        plus: coefficient_map(&f.plus().compress(tol)),
        minus: coefficient_map(&f.minus().compress(tol)),
        plus_inv: coefficient_map(&f.plus_inv().compress(tol)),
        minus_inv: coefficient_map(&f.minus_inv().compress(tol)),
    };
    let mut text = serde_json::to_string_pretty(&json)?;
    text.push('\n');
    emit(&a.out, &text)?;
    Ok(0)
}

pub fn winding(a: &Common) -> Result<u8> {
    let grid = grid_of(a)?;
    let phi = read_spec(&a.symbol)?.resolve(&grid)?;
    let k = winding_number_with(&phi, grid.sampling_size(phi.half_bandwidth()), grid.vanish_tol)?;
    emit(&a.out, &format!("{k}\n"))?;
    Ok(0)
}

pub fn invert(a: &Common) -> Result<u8> {
    let grid = grid_of(a)?;
    let n = a.n.ok_or_else(|| CliError::Usage("invert needs --n".into()))?;
    let phi = toeplitz_symbol(a, &grid)?;
    let inv = invert_section(&build_section(&phi, n))?;
    let mut text = String::from("j,k,re,im\n");
    for j in 0..=n {
        for k in 0..=n {
            let v = inv[(j, k)];
            writeln!(text, "{j},{k},{},{}", num(v.re), num(v.im)).unwrap();
        }
    }
    emit(&a.out, &text)?;
    Ok(0)
}

fn parse_index(s: &str) -> Option<(bool, usize)> {
    let s = s.trim();
    match s.strip_prefix('n') {
        Some("") => Some((true, 0)),
        Some(rest) => rest.strip_prefix('-')?.trim().parse().ok().map(|d| (true, d)),
        None => s.parse().ok().map(|v| (false, v)),
    }
}

/// Parses `j,k` pairs separated by `;`. Both indices are either absolute or
/// of the form `n` / `n-d`.
pub fn parse_probes(s: &str) -> Result<Vec<Probe>> {
    let bad = || CliError::Usage(format!("cannot parse probes '{s}'"));
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (j, k) = p.split_once(',').ok_or_else(bad)?;
            match (parse_index(j).ok_or_else(bad)?, parse_index(k).ok_or_else(bad)?) {
                ((false, j), (false, k)) => Ok(Probe::Head(j, k)),
                ((true, j), (true, k)) => Ok(Probe::Tail(j, k)),
                _ => Err(bad()),
            }
        })
        .collect()
}

pub fn theorem1(a: &Common) -> Result<u8> {
    let grid = grid_of(a)?;
    let phi = toeplitz_symbol(a, &grid)?;
    let nu = weight_of(a, "wiener")?;
    let probes = parse_probes(a.probes.as_deref().unwrap_or("0,0;n,n"))?;
    let (nmin, nmax) = (a.nmin.unwrap_or(8), a.nmax.unwrap_or(24));
    if nmin > nmax {
        return Err(CliError::Usage(format!("empty range {nmin}..={nmax}")));
    }
    let report = theorem1_report_with(&phi, &nu, nmin..=nmax, &probes, &grid)?;
    let mut text = String::from("n,j,k,error,bound,c_calibrated,pass\n");
    for r in &report.rows {
        let c = report.c_for(r.probe);
        writeln!(text, "{},{},{},{},{},{},{}", r.n, r.j, r.k, num(r.error), num(r.bound), num(c), r.pass).unwrap();
    }
    emit(&a.out, &text)?;
    for fit in &report.fits {
        eprintln!("probe {}: c = {}, fitted rate = {}", fit.probe, num(fit.c), opt_num(fit.rate));
    }
    if report.has_singular() {
        eprintln!("error: SingularSection: some sections are singular");
        return Ok(4);
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn first_failure(reports: &[&VerblunskyReport]) -> Option<u8> {
    let mut code = None;
    for r in reports.iter().flat_map(|r| r.failed_rows()) {
        if let toeplitz_opuc::opuc::RowStatus::Failed(e) = &r.status {
            eprintln!("row n={} ({}): {}: {e}", r.n, r.method, e.name());
            code.get_or_insert(match e {
                CoreError::SingularSection { .. } | CoreError::SingularMomentSection { .. } => 4,
                CoreError::NoContraction { .. } => 6,
                _ => 1,
            });
        }
    }
    code
}

fn verblunsky_line(text: &mut String, row: &VerblunskyRow, delta: Option<f64>) {
    write!(text, "{},{},{},{},{}", row.n, num(row.alpha.re), num(row.alpha.im), row.method, opt_num(row.diag)).unwrap();
    if let Some(d) = delta {
        write!(text, ",{}", num(d)).unwrap();
    }
    text.push('\n');
}

pub fn verblunsky(a: &Common) -> Result<u8> {
    let grid = grid_of(a)?;
    let w = read_spec(&a.symbol)?.resolve(&grid)?;
    let nmax = a.nmax.unwrap_or(20);
    let opts = bo_options(a, grid);
    let mut text = String::from("n,alpha_re,alpha_im,method,diag");
    let code = match a.method {
        MethodArg::Moments | MethodArg::Bo => {
            let report =
                if a.method == MethodArg::Moments { verblunsky_from_moments(&w, nmax) } else { verblunsky_bo(&w, nmax, &opts)? };
            text.push('\n');
            for row in &report.rows {
                verblunsky_line(&mut text, row, None);
            }
            first_failure(&[&report]).unwrap_or(0)
        }
        MethodArg::Both => {
            let moments = verblunsky_from_moments(&w, nmax);
            let bo = verblunsky_bo(&w, nmax, &opts)?;
            text.push_str(",delta\n");
            let mut worst: f64 = 0.0;
            for (m, b) in moments.rows.iter().zip(&bo.rows) {
                let delta = (m.alpha - b.alpha).norm();
                if !m.is_failed() && !b.is_failed() {
                    worst = worst.max(delta);
                }
                verblunsky_line(&mut text, m, Some(delta));
                verblunsky_line(&mut text, b, Some(delta));
            }
            match first_failure(&[&moments, &bo]) {
                Some(code) => code,
                None if worst > DELTA_TOL => {
                    eprintln!("methods disagree: max delta {}", num(worst));
                    5
                }
                None => 0,
            }
        }
    };
    emit(&a.out, &text)?;
    Ok(code)
}

pub fn baxter(a: &Common) -> Result<u8> {
    let grid = grid_of(a)?;
    let w = read_spec(&a.symbol)?.resolve(&grid)?;
    let nu = weight_of(a, "wiener")?;
    let report = baxter_report(&w, &nu, a.nmax.unwrap_or(20), &bo_options(a, grid))?;
    let mut text = String::from("n,phi_abs,nu_n,increment,partial_sum,ratio\n");
    for r in &report.rows {
        writeln!(
            text,
            "{},{},{},{},{},{}",
            r.n,
            num(r.phi_abs),
            num(r.nu_n),
            num(r.increment),
            num(r.partial_sum),
            opt_num(r.ratio)
        )
        .unwrap();
    }
    emit(&a.out, &text)?;
    let adm = &report.admissibility;
    eprintln!(
        "n0 = {:?}, fitted ratio = {}, decaying = {}, growth rate = {}, annulus ok = {}",
        report.n0,
        opt_num(report.fitted_ratio),
        report.decaying,
        num(adm.growth_rate),
        adm.annulus_ok
    );
    Ok(0)
}

pub fn born(a: &Common) -> Result<u8> {
    let grid = grid_of(a)?;
    let w = read_spec(&a.symbol)?.resolve(&grid)?;
    let nu = weight_of(a, "exp:1.9")?;
    let report = born_report(&w, &nu, a.nmax.unwrap_or(20), &bo_options(a, grid))?;
    let mut text = String::from("n,phi_re,phi_im,leading_re,leading_im,d_re,d_im,weighted,partial_sum,ratio\n");
    for r in &report.rows {
        writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n,
            num(r.phi_n_zero.re),
            num(r.phi_n_zero.im),
            num(r.leading.re),
            num(r.leading.im),
            num(r.difference.re),
            num(r.difference.im),
            num(r.weighted),
            num(r.partial_sum),
            opt_num(r.ratio)
        )
        .unwrap();
    }
    emit(&a.out, &text)?;
    if let Some(n) = report.rows.last().map(|r| r.n) {
        eprintln!("fitted ratio over n = {}..={n}: {}", n.min(6), opt_num(report.fitted_ratio(n.min(6)..=n)));
    }
    Ok(0)
}

pub fn gi(a: &Common) -> Result<u8> {
    let grid = grid_of(a)?;
    let w = read_spec(&a.symbol)?.resolve(&grid)?;
    let b = gi_bound_report(&w, a.nmax.unwrap_or(64), &bo_options(a, grid))?;
    let mut text = String::from("n,alpha_re,alpha_im,weighted,intermediate,proxy,intermediate_pass,proxy_pass\n");
    for r in &b.rows {
        writeln!(
            text,
            "{},{},{},{},{},{},{},{}",
            r.n,
            num(r.alpha.re),
            num(r.alpha.im),
            num(r.weighted),
            num(r.intermediate),
            num(r.proxy),
            r.intermediate_pass,
            r.proxy_pass
        )
        .unwrap();
    }
    writeln!(
        text,
        "{} n0={} rho={} lhs={} rhs={}",
        if b.pass { "PASS" } else { "FAIL" },
        b.n0,
        num(b.rho),
        num(b.lhs),
        num(b.rhs)
    )
    .unwrap();
    emit(&a.out, &text)?;
    Ok(if b.pass { 0 } else { 1 })
}

/// Extra column computed from `(m, alpha_m)` on the fixed-point route.
type ExtraColumn<'a> = (&'a str, &'a dyn Fn(usize, Complex64) -> f64);

/// `alpha_0 .. alpha_{nmax-1}` from the closed form and both computed routes.
fn example_table(
    w: &LaurentSeries,
    out: &ExampleOutput,
    grid: SpectralGrid,
    closed: impl Fn(usize) -> f64,
    extra: Option<ExtraColumn>,
) -> Result<String> {
    let moments = verblunsky_from_moments(w, out.nmax);
    let bo = verblunsky_bo(w, out.nmax, &BoOptions { grid, ..Default::default() })?;
    let mut text = String::from("n,alpha_closed,alpha_moments,alpha_bo");
    if let Some((name, _)) = extra {
        write!(text, ",{name}").unwrap();
    }
    text.push('\n');
    for m in 0..out.nmax {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let am = moments.alpha(m).unwrap_or(nan);
        let ab = bo.alpha(m).unwrap_or(nan);
        write!(text, "{m},{},{},{}", num(closed(m)), num(am.re), num(ab.re)).unwrap();
        if let Some((_, f)) = extra {
            write!(text, ",{}", num(f(m, ab))).unwrap();
        }
        text.push('\n');
    }
    Ok(text)
}

pub fn example1(a: &Example1Args) -> Result<u8> {
    let grid = SpectralGrid::new(a.output.grid, a.output.band)?;
    let ex = Example1::new(a.a)?;
    let residue = |n: usize, alpha: Complex64| -alpha.re * ex.mu_plus.powi(n as i32 + 2);
    let text = example_table(&ex.weight(), &a.output, grid, |n| ex.alpha(n), Some(("residue_estimate", &residue)))?;
    emit(&a.output.out, &text)?;
    eprintln!("mu_+ = {}, mu_- = {}, residue = {}", num(ex.mu_plus), num(ex.mu_minus), num(ex.residue()));
    Ok(0)
}

pub fn example2(a: &Example2Args) -> Result<u8> {
    let grid = SpectralGrid::new(a.output.grid, a.output.band)?;
    let ex = Example2::new(a.q, a.terms)?;
    let text = example_table(&ex.weight(&grid)?, &a.output, grid, |n| ex.alpha(n), None)?;
    emit(&a.output.out, &text)?;
    let radius = 0.5 * (ex.pole().abs() - 1.0);
    let res = ex.residue(radius, 256);
    eprintln!("pole = {}, residue of S = {} {:+}i, product tail = {}", num(ex.pole()), num(res.re), num(res.im), num(ex.tail_bound()));
    Ok(0)
}

//! JSON description of a symbol or weight.
//!
//! ```json
//! {"coefficients": {"-1": [-0.4, 0], "0": [1, 0], "1": [-0.4, 0]}}
//! {"example1": {"a": 0.8}}
//! {"example2": {"q": 0.25, "terms": 60}}
//! {"exp_of": {"coefficients": {"1": [0.3, 0]}}}
//! {"product": [{"example1": {"a": 0.5}}, {"coefficients": {"0": [2, 0]}}]}
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use toeplitz_opuc::closedforms::{Example1, Example2};
use toeplitz_opuc::series::{exp_series, multiply, LaurentSeries, SpectralGrid};
use toeplitz_opuc::{Error, Result};

fn default_terms() -> usize {
    60
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    Coefficients(BTreeMap<i64, [f64; 2]>),
    Example1 {
        a: f64,
    },
    Example2 {
        q: f64,
        #[serde(default = "default_terms")]
        terms: usize,
    },
    ExpOf(Box<SymbolSpec>),
    Product(Vec<SymbolSpec>),
}

impl SymbolSpec {
    pub fn resolve(&self, grid: &SpectralGrid) -> Result<LaurentSeries> {
        match self {
            SymbolSpec::Coefficients(map) => {
                if let Some(k) = map.keys().find(|k| k.unsigned_abs() as usize > grid.band) {
                    return Err(Error::Domain(format!("index {k} lies outside the band {}", grid.band)));
                }
                Ok(LaurentSeries::from_terms(map.iter().map(|(&k, &[re, im])| (k, Complex64::new(re, im)))))
            }
            SymbolSpec::Example1 { a } => Ok(Example1::new(*a)?.weight()),
            SymbolSpec::Example2 { q, terms } => Example2::new(*q, *terms)?.weight(grid),
            SymbolSpec::ExpOf(inner) => exp_series(&inner.resolve(grid)?, grid),
            SymbolSpec::Product(parts) => parts
                .iter()
                .try_fold(LaurentSeries::one(), |acc, p| Ok(multiply(&acc, &p.resolve(grid)?))),
        }
    }
}

/// Coefficients as an index -> `[re, im]` map, skipping exact zeros.
pub fn coefficient_map(s: &LaurentSeries) -> BTreeMap<i64, [f64; 2]> {
    s.terms().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).map(|(k, c)| (k, [c.re, c.im])).collect()
}

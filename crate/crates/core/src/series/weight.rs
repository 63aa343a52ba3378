use std::fmt;
use std::str::FromStr;

use super::LaurentSeries;
use crate::error::{Error, Result};

/// An even, submultiplicative sequence `nu_j >= 1` defining a weighted
/// coefficient algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum BeurlingWeight {
    /// `gamma^|j|`, `gamma >= 1`.
    Exponential(f64),
    /// `(1 + |j|)^alpha`, `alpha >= 0`.
    Polynomial(f64),
    /// `nu_j = 1`.
    Wiener,
    /// Table `nu_0, nu_1, ...` extended evenly; indices past the end reuse the
    /// last entry.
    Custom(Vec<f64>),
}

impl BeurlingWeight {
    pub fn exponential(gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidWeight(format!("exponential base {gamma} < 1")));
        }
        Ok(BeurlingWeight::Exponential(gamma))
    }

    pub fn polynomial(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidWeight(format!("polynomial exponent {alpha} < 0")));
        }
        Ok(BeurlingWeight::Polynomial(alpha))
    }

    pub fn custom(table: Vec<f64>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::InvalidWeight("empty table".into()));
        }
        let w = BeurlingWeight::Custom(table);
        w.validate(64)?;
        Ok(w)
    }

    pub fn value(&self, j: i64) -> f64 {
        let j = j.unsigned_abs();
        match self {
            BeurlingWeight::Exponential(gamma) => gamma.powf(j as f64),
            BeurlingWeight::Polynomial(alpha) => (1.0 + j as f64).powf(*alpha),
            BeurlingWeight::Wiener => 1.0,
            BeurlingWeight::Custom(table) => table[(j as usize).min(table.len() - 1)],
        }
    }

    /// Checks `nu_j >= 1`, `nu_j = nu_{-j}` and `nu_{j+k} <= nu_j nu_k` for
    /// `|j|, |k| <= window`.
    pub fn validate(&self, window: i64) -> Result<()> {
        for j in -window..=window {
            let nj = self.value(j);
            if !(nj >= 1.0) {
                return Err(Error::InvalidWeight(format!("nu_{j} = {nj} < 1")));
            }
            if nj != self.value(-j) {
                return Err(Error::InvalidWeight(format!("nu_{j} != nu_{}", -j)));
            }
            for k in -window..=window {
                let lhs = self.value(j + k);
                let rhs = nj * self.value(k);
                if lhs > rhs * (1.0 + 1e-12) {
                    return Err(Error::InvalidWeight(format!(
                        "nu_{} = {lhs} > nu_{j} nu_{k} = {rhs}",
                        j + k
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether `nu_j <= nu_k` for `0 <= j < k <= window`.
    pub fn is_increasing(&self, window: i64) -> bool {
        (0..window).all(|j| self.value(j) <= self.value(j + 1))
    }
}

impl fmt::Display for BeurlingWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeurlingWeight::Exponential(g) => write!(f, "exp:{g}"),
            BeurlingWeight::Polynomial(a) => write!(f, "poly:{a}"),
            BeurlingWeight::Wiener => write!(f, "wiener"),
            BeurlingWeight::Custom(t) => write!(f, "custom:{}", t.len()),
        }
    }
}

/// Parses `exp:<gamma>`, `poly:<alpha>` or `wiener`.
impl FromStr for BeurlingWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidWeight(format!("cannot parse weight '{s}'"));
        match s.split_once(':') {
            None if s == "wiener" => Ok(BeurlingWeight::Wiener),
            Some(("exp", v)) => BeurlingWeight::exponential(v.parse().map_err(|_| bad())?),
            Some(("poly", v)) => BeurlingWeight::polynomial(v.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }
}

/// `||s||_nu = sum_j nu_j |s_j|` over the stored band.
pub fn beurling_norm(s: &LaurentSeries, nu: &BeurlingWeight) -> f64 {
    beurling_seminorm(s, nu, 0)
}

/// `||s||_{nu,n} = sum_{|j| >= n} nu_j |s_j|`.
pub fn beurling_seminorm(s: &LaurentSeries, nu: &BeurlingWeight, n: usize) -> f64 {
    s.terms()
        .filter(|(k, _)| k.unsigned_abs() as usize >= n)
        .map(|(k, c)| nu.value(k) * c.norm())
        .sum()
}

/// `min_{1 <= k <= K} log(nu_k) / k`.
///
/// By subadditivity this is an upper approximation of the growth rate
/// `A(nu) = inf_k log(nu_k) / k`; it is exact for exponential and Wiener
/// weights and decreases to zero in `K` for polynomial ones.
pub fn growth_rate(nu: &BeurlingWeight, k_max: usize) -> f64 {
    (1..=k_max.max(1))
        .map(|k| nu.value(k as i64).ln() / k as f64)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn norms_of_simple_series() {
        let one = LaurentSeries::one();
        for nu in [BeurlingWeight::Exponential(2.0), BeurlingWeight::Polynomial(3.0), BeurlingWeight::Wiener] {
            assert_eq!(beurling_norm(&one, &nu), 1.0);
        }
        let s = LaurentSeries::from_real_terms(&[(-1, 1.0), (1, 1.0)]);
        assert_eq!(beurling_norm(&s, &BeurlingWeight::Exponential(2.0)), 4.0);
        assert_eq!(beurling_seminorm(&s, &BeurlingWeight::Wiener, 2), 0.0);

        let w = LaurentSeries::from_real_terms(&[(-1, -0.4), (0, 1.0), (1, -0.4)]);
        assert_abs_diff_eq!(beurling_norm(&w, &BeurlingWeight::Exponential(2.0)), 2.6, epsilon = 1e-15);
    }

    #[test]
    fn seminorm_of_geometric_band() {
        let terms: Vec<_> = (-8..=8).map(|k: i64| (k, 0.5f64.powi(k.abs() as i32))).collect();
        let s = LaurentSeries::from_real_terms(&terms);
        let expected = 2.0 * (3..=8).map(|k| 0.5f64.powi(k)).sum::<f64>();
        assert_abs_diff_eq!(beurling_seminorm(&s, &BeurlingWeight::Wiener, 3), expected, epsilon = 1e-15);
        assert_eq!(
            beurling_seminorm(&s, &BeurlingWeight::Exponential(1.5), 0),
            beurling_norm(&s, &BeurlingWeight::Exponential(1.5))
        );
    }

    #[test]
    fn growth_rates() {
        assert_abs_diff_eq!(growth_rate(&BeurlingWeight::Exponential(2.0), 50), 2f64.ln(), epsilon = 1e-14);
        assert_eq!(growth_rate(&BeurlingWeight::Wiener, 50), 0.0);
        let poly = BeurlingWeight::Polynomial(2.0);
        let a100 = growth_rate(&poly, 100);
        let a10000 = growth_rate(&poly, 10_000);
        assert!(a10000 < a100 && a10000 < 2e-3);
    }

    #[test]
    fn validator_accepts_builtins_and_rejects_bad_tables() {
        for nu in [BeurlingWeight::Exponential(1.7), BeurlingWeight::Polynomial(2.5), BeurlingWeight::Wiener] {
            nu.validate(64).unwrap();
        }
        assert!(BeurlingWeight::custom(vec![1.0, 0.5]).is_err());
        // nu_2 = 10 > nu_1^2 = 4
        assert!(BeurlingWeight::custom(vec![1.0, 2.0, 10.0]).is_err());
        assert!(BeurlingWeight::custom(vec![1.0, 2.0, 3.0, 4.0]).is_ok());
        assert!(BeurlingWeight::exponential(0.9).is_err());
        assert!(BeurlingWeight::polynomial(-1.0).is_err());
    }

    #[test]
    fn parse_weights() {
        assert_eq!("exp:1.5".parse::<BeurlingWeight>().unwrap(), BeurlingWeight::Exponential(1.5));
        assert_eq!("poly:2".parse::<BeurlingWeight>().unwrap(), BeurlingWeight::Polynomial(2.0));
        assert_eq!("wiener".parse::<BeurlingWeight>().unwrap(), BeurlingWeight::Wiener);
        assert!("exp:x".parse::<BeurlingWeight>().is_err());
        assert!("gauss".parse::<BeurlingWeight>().is_err());
    }
}

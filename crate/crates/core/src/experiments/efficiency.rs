use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffCase {
    AEq1,
    ANe1,
}

impl fmt::Display for EffCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EffCase::AEq1 => "a_eq_1",
            EffCase::ANe1 => "a_ne_1",
        })
    }
}

impl FromStr for EffCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a_eq_1" | "1" => Ok(EffCase::AEq1),
            "a_ne_1" | "ne1" => Ok(EffCase::ANe1),
            other => Err(Error::InvalidConfig(format!("unknown efficiency case `{other}` (expected a_eq_1 or a_ne_1)"))),
        }
    }
}

/// Exponent of the rate ratio; base `n` for `a = 1`, `(log n)/n` otherwise.
pub fn efficiency_exponent(k: u32, m: u32, case: EffCase) -> f64 {
    let (k, m, km) = (k as f64, m as f64, k.min(m) as f64);
    match case {
        EffCase::AEq1 => -2.0 * km / (2.0 * k + 1.0) + 2.0 * m / (2.0 * m + 1.0),
        EffCase::ANe1 => (2.0 * km - 1.0) / (2.0 * k + 1.0) - (2.0 * m - 1.0) / (2.0 * m + 1.0),
    }
}

/// Rate with `2^J1 ~ n^(1/(2k+1))` relative to the optimal rate for
/// Sobolev regularity `m`.
pub fn efficiency(k: u32, m: u32, n: u64, case: EffCase) -> f64 {
    let n = n as f64;
    let base = match case {
        EffCase::AEq1 => n,
        EffCase::ANe1 => n.ln() / n,
    };
    base.powf(efficiency_exponent(k, m, case))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffRow {
    pub k: u32,
    pub m: u32,
    pub case: EffCase,
    pub eff: f64,
}

/// Rows ordered by case, then `m`, then `k`.
pub fn efficiency_table(n: u64, k_max: u32, ms: &[u32], cases: &[EffCase]) -> Result<Vec<EffRow>> {
    if k_max == 0 || ms.iter().any(|&m| m == 0) {
        return Err(Error::InvalidConfig("k and m must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::InvalidConfig(format!("n = {n} must be at least 2")));
    }
    let mut rows = Vec::with_capacity(cases.len() * ms.len() * k_max as usize);
    for &case in cases {
        for &m in ms {
            for k in 1..=k_max {
                rows.push(EffRow { k, m, case, eff: efficiency(k, m, n, case) });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_one() {
        for m in [1, 25, 50, 75] {
            assert_eq!(efficiency(m, m, 1000, EffCase::AEq1), 1.0);
            assert_eq!(efficiency(m, m, 1000, EffCase::ANe1), 1.0);
        }
    }

    #[test]
    fn spot_value() {
        let e = efficiency(400, 1, 1000, EffCase::AEq1);
        assert!((e / 98.3 - 1.0).abs() < 1e-3, "{e}");
    }

    #[test]
    fn oversmoothing_costs_efficiency() {
        for m in [1, 5, 25] {
            assert!(efficiency(2 * m, m, 1000, EffCase::AEq1) > 1.0);
        }
    }

    #[test]
    fn nondecreasing_beyond_m() {
        for m in [1, 25, 50, 75] {
            let mut prev = 1.0;
            for k in m..=400 {
                let e = efficiency(k, m, 1000, EffCase::AEq1);
                assert!(e >= prev);
                prev = e;
            }
        }
    }

    #[test]
    fn undersmoothed_levels_are_near_one_not_one() {
        // k < m gives a small positive exponent.
        let e = efficiency(1, 25, 1000, EffCase::AEq1);
        assert!(e > 1.0);
        assert!((efficiency_exponent(1, 25, EffCase::AEq1) - (2.0 * 25.0 / 51.0 - 2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn table_shape() {
        let rows = efficiency_table(1000, 400, &[1, 25, 50, 75], &[EffCase::AEq1, EffCase::ANe1]).unwrap();
        assert_eq!(rows.len(), 400 * 4 * 2);
        assert!(efficiency_table(1000, 0, &[1], &[EffCase::AEq1]).is_err());
        assert_eq!("a_ne_1".parse::<EffCase>().unwrap(), EffCase::ANe1);
    }
}

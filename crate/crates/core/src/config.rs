//! Runtime limits. Every cap here is configuration, not a constant of the
//! algorithms; the CLI reads overrides from the environment.

use std::env;

pub const ENV_SIEVE_CEILING: &str = "AUTRATIO_SIEVE_CEILING";
pub const ENV_ORACLE_MAX_ORDER: &str = "AUTRATIO_ORACLE_MAX_ORDER";
pub const ENV_ORACLE_MAX_WORK: &str = "AUTRATIO_ORACLE_MAX_WORK";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    /// Largest group order the brute-force oracle accepts.
    pub max_order: u64,
    /// Upper bound on `|G|^rank`.
    pub max_work: u128,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_order: 200,
            max_work: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Hard ceiling on the prime sieve.
    pub sieve_ceiling: u64,
    pub oracle: OracleCaps,
    /// Fractional bits used by certified log-space arithmetic.
    pub precision_bits: u32,
    /// Largest number of odd prime indices a symbolic group may have and
    /// still be expanded into an explicit decomposition.
    pub materialize_cap: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            sieve_ceiling: 100_000_000,
            oracle: OracleCaps::default(),
            precision_bits: 160,
            materialize_cap: 10_000,
        }
    }
}

impl Config {
    /// Defaults overridden by `AUTRATIO_*` environment variables. Values that
    /// fail to parse are ignored.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Some(v) = read_env(ENV_SIEVE_CEILING) {
            cfg.sieve_ceiling = v as u64;
        }
        if let Some(v) = read_env(ENV_ORACLE_MAX_ORDER) {
            cfg.oracle.max_order = v as u64;
        }
        if let Some(v) = read_env(ENV_ORACLE_MAX_WORK) {
            cfg.oracle.max_work = v;
        }
        cfg
    }
}

fn read_env(key: &str) -> Option<u128> {
    let raw = env::var(key).ok()?;
    let raw = raw.trim().replace('_', "");
    if let Ok(v) = raw.parse::<u128>() {
        return Some(v);
    }
    // accept 1e8 style
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite() && *v >= 1.0 && *v < 1e38)
        .map(|v| v as u128)
}

//! Size bounds and tuning knobs, loadable from a TOML file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every field has a default, so a config file only lists what it overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Largest dense `(x, y, t)` grid the factoring engine will allocate.
    pub max_dense_cells: usize,
    /// Largest degree bound accepted by the constant-degree algorithms.
    pub max_delta: u32,
    /// Degree bound of the isolation scheme behind the projection map.
    /// `None` uses the factor degree bound itself.
    pub psi_scheme_degree: Option<u32>,
    /// Largest scheme size (number of exponent vectors checked for collisions).
    pub max_scheme_monomials: usize,
    /// Largest number of pairs an exhaustive sum-of-univariates oracle may hold.
    pub su_oracle_cap: u64,
    /// Number of pairs used when the exhaustive oracle is too large.
    pub su_sample: usize,
    /// Upper limit on primes used by one modular reconstruction.
    pub max_primes: usize,
    /// Stop the sparse-factor search once every low-degree projected factor is explained.
    pub early_exit: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_dense_cells: 4_000_000,
            max_delta: 3,
            psi_scheme_degree: None,
            max_scheme_monomials: 5_000,
            su_oracle_cap: 100_000,
            su_sample: 64,
            max_primes: 600,
            early_exit: true,
        }
    }
}

impl Config {
    pub fn from_toml_str(s: &str) -> Result<Config> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}

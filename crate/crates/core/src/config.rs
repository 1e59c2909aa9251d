//! Optional JSON overrides for field moduli and size limits.
//!
//! ```json
//! { "moduli": { "9": [2, 2, 1] }, "group_cap": 60000, "brute_dim_limit": 6 }
//! ```
//! Moduli are coefficient lists, constant term first, keyed by q.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::DEFAULT_BRUTE_DIM_LIMIT;
use crate::error::{Error, Result};
use crate::field::{prime_power, GaloisField};
use crate::symplectic::DEFAULT_GROUP_CAP;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub moduli: BTreeMap<u64, Vec<u32>>,
    pub group_cap: Option<u128>,
    pub brute_dim_limit: Option<usize>,
}

impl Config {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn group_cap(&self) -> u128 {
        self.group_cap.unwrap_or(DEFAULT_GROUP_CAP)
    }

    pub fn brute_dim_limit(&self) -> usize {
        self.brute_dim_limit.unwrap_or(DEFAULT_BRUTE_DIM_LIMIT)
    }

    /// GF(q) with `modulus` if given, else the configured modulus for q, else the default.
    pub fn field(&self, q: u64, modulus: Option<Vec<u32>>) -> Result<GaloisField> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        if p == 2 {
            return Err(Error::UnsupportedCharacteristic(format!("q = {q} is even")));
        }
        let modulus = modulus.or_else(|| self.moduli.get(&q).cloned());
        GaloisField::new(p, e, modulus)
    }
}

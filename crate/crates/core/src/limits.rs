//! Bounds on field sizes and brute-force search spaces.

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Environment variable overriding [`Limits::max_search`].
pub const MAX_SEARCH_ENV: &str = "SSLOCI_MAX_SEARCH";

/// Field tables are dense `q × q` arrays of `u16`; fields above this order are refused
/// regardless of configuration.
pub const HARD_FIELD_CAP: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest field order `q` accepted by `make_field`.
    pub max_field_order: u64,
    /// Largest nominal search space an oracle or enumeration will walk.
    pub max_search: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_field_order: 121,
            max_search: 1 << 26,
        }
    }
}

impl Limits {
    /// Defaults, with `max_search` taken from `SSLOCI_MAX_SEARCH` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = std::env::var(MAX_SEARCH_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            limits.max_search = v;
        }
        limits
    }

    pub fn with_max_search(mut self, max_search: u64) -> Self {
        self.max_search = max_search;
        self
    }

    pub fn with_max_field_order(mut self, q: u64) -> Self {
        self.max_field_order = q;
        self
    }

    pub(crate) fn check_search(&self, what: &str, size: &BigInt) -> Result<()> {
        if *size > BigInt::from(self.max_search) {
            Err(Error::too_large(what, size.clone(), self.max_search))
        } else {
            Ok(())
        }
    }
}

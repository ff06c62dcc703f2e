//! Exhaustive-search budgets, adjustable through `HASS_BUDGET_OVERRIDE`.

use hass_core::ases::{DEFAULT_COALITION_BUDGET, DEFAULT_RETRY_BOUND};
use hass_core::bbrpoly::DEFAULT_EXHAUSTIVE_N;
use hass_core::setsys::DEFAULT_MAX_N;

use crate::CliError;

pub const ENV_VAR: &str = "HASS_BUDGET_OVERRIDE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Largest `n` for set-system construction.
    pub setsys_n: usize,
    /// Largest `n` for exhaustive polynomial verification.
    pub poly_n: usize,
    /// Largest party count for coalition enumeration.
    pub parties: usize,
    /// Resampling bound of the encoder.
    pub retries: u32,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            setsys_n: DEFAULT_MAX_N,
            poly_n: DEFAULT_EXHAUSTIVE_N,
            parties: DEFAULT_COALITION_BUDGET,
            retries: DEFAULT_RETRY_BOUND,
        }
    }
}

impl Budgets {
    /// Parses `key=value` pairs separated by commas, e.g.
    /// `setsys_n=7,parties=24`.
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let mut b = Self::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("{ENV_VAR}: expected key=value, got {item:?}")))?;
            let bad = |_| CliError::usage(format!("{ENV_VAR}: {key} needs a non-negative integer"));
            match key.trim() {
                "setsys_n" => b.setsys_n = value.trim().parse().map_err(bad)?,
                "poly_n" => b.poly_n = value.trim().parse().map_err(bad)?,
                "parties" => b.parties = value.trim().parse().map_err(bad)?,
                "retries" => b.retries = value.trim().parse().map_err(bad)?,
                other => return Err(CliError::usage(format!("{ENV_VAR}: unknown budget {other:?}"))),
            }
        }
        Ok(b)
    }

    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var(ENV_VAR) {
            Ok(spec) => Self::parse(&spec),
            Err(_) => Ok(Self::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides() {
        let b = Budgets::parse("setsys_n=7, parties=24").unwrap();
        assert_eq!((b.setsys_n, b.parties), (7, 24));
        assert_eq!(b.retries, DEFAULT_RETRY_BOUND);
        assert_eq!(Budgets::parse("").unwrap(), Budgets::default());
        assert!(Budgets::parse("colour=3").is_err());
        assert!(Budgets::parse("parties").is_err());
        assert!(Budgets::parse("parties=-1").is_err());
    }
}

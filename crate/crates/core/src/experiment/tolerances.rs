//! Versioned defaults for every pass/fail threshold, overridable per run.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TOLERANCE_TABLE_VERSION: &str = "1";

const DEFAULTS: &[(&str, f64)] = &[
    // exact operator identities
    ("identity", 1e-10),
    ("nilpotency", 1e-12),
    ("clifford", 1e-10),
    ("g_spectrum", 1e-9),
    ("flow", 1e-10),
    ("car", 1e-10),
    ("cross_spectrum", 1e-9),
    ("ceiling_relative", 1e-9),
    ("ceiling_overlap", 1e-8),
    ("norm", 1e-10),
    ("overlap", 1e-10),
    ("exact", 1e-12),
    ("local_rotation", 1e-9),
    ("witten_spectrum", 1e-8),
    // lower bound on the residual of a candidate that must fail
    ("counterexample_min", 1e-3),
    // upper bound on the BCS differences
    ("bcs_bound", 1.0),
    // extrapolated limits
    ("gaussian_relative", 0.01),
    ("weyl_stability", 1e-3),
    ("weyl_phase", 0.01),
    ("odlro_relative", 0.02),
    ("pair_band", 0.02),
    ("constancy", 0.01),
    // fitted exponents and slopes
    ("rate_window", 0.2),
    ("phase_slope", 0.05),
    ("growth_exponent", 0.05),
    ("variance_slope", 0.05),
    ("free_growth_relative", 0.1),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(DEFAULTS.iter().map(|(k, v)| (k.to_string(), *v)).collect())
    }
}

impl Tolerances {
    pub fn get(&self, key: &str) -> f64 {
        *self
            .0
            .get(key)
            .unwrap_or_else(|| panic!("tolerance `{key}` missing from the defaults table"))
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !self.0.contains_key(key) {
            return Err(Error::Config {
                field: "tol",
                message: format!("unknown tolerance `{key}`"),
            });
        }
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Config {
                field: "tol",
                message: format!("tolerance `{key}` must be finite and non-negative, got {value}"),
            });
        }
        self.0.insert(key.to_string(), value);
        Ok(())
    }

    /// Applies a JSON object of overrides, e.g. `{"flow": 1e-9}`.
    pub fn merge_json(&mut self, text: &str) -> Result<()> {
        let overrides: BTreeMap<String, f64> = serde_json::from_str(text).map_err(|e| Error::Config {
            field: "tol-file",
            message: e.to_string(),
        })?;
        for (k, v) in overrides {
            self.set(&k, v)?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            field: "tol-file",
            message: format!("{}: {e}", path.display()),
        })?;
        self.merge_json(&text)
    }

    /// Parses `key=value`.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair.split_once('=').ok_or_else(|| Error::Config {
            field: "tol",
            message: format!("expected key=value, got `{pair}`"),
        })?;
        let value: f64 = v.trim().parse().map_err(|_| Error::Config {
            field: "tol",
            message: format!("`{v}` is not a number"),
        })?;
        self.set(k.trim(), value)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut t = Tolerances::default();
        assert_eq!(t.get("flow"), 1e-10);
        t.merge_json(r#"{"flow": 1e-8}"#).unwrap();
        assert_eq!(t.get("flow"), 1e-8);
        t.set_pair("phase_slope=0.1").unwrap();
        assert_eq!(t.get("phase_slope"), 0.1);
        assert!(matches!(t.set("nope", 1.0), Err(Error::Config { field: "tol", .. })));
        assert!(t.set("flow", -1.0).is_err());
        assert!(matches!(t.merge_json("[1]"), Err(Error::Config { field: "tol-file", .. })));
    }
}

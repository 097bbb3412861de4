//! `--config` file support: a flat JSON object whose keys mirror the long
//! flags of the invoked subcommand (plus the global `seed` and `out`).
//! Values given on the command line win over file values, which win over
//! built-in defaults.

use crate::out::{usage, Result};
use std::path::Path;

/// Parsed configuration file with typed, validated accessors.
pub struct FileCfg {
    value: serde_json::Map<String, serde_json::Value>,
}

impl FileCfg {
    /// An empty configuration (no file given).
    pub fn empty() -> Self {
        FileCfg {
            value: serde_json::Map::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| usage(format!("config {} is not valid JSON: {e}", path.display())))?;
        match value {
            serde_json::Value::Object(map) => Ok(FileCfg { value: map }),
            _ => Err(usage(format!(
                "config {} must be a JSON object of flag values",
                path.display()
            ))),
        }
    }

    /// Rejects keys the invoked subcommand does not understand.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.value.keys() {
            if !allowed.contains(&key.as_str()) && !["seed", "out"].contains(&key.as_str()) {
                return Err(usage(format!(
                    "config key `{key}` is not recognised here; expected one of: seed, out, {}",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn str(&self, key: &str) -> Result<Option<String>> {
        match self.value.get(key) {
            None => Ok(None),
            Some(serde_json::Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(usage(format!("config key `{key}` must be a string"))),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.value.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Number(n)) => n
                .as_f64()
                .map(Some)
                .ok_or_else(|| usage(format!("config key `{key}` must be a number"))),
            Some(_) => Err(usage(format!("config key `{key}` must be a number"))),
        }
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        match self.value.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Number(n)) => n
                .as_u64()
                .map(Some)
                .ok_or_else(|| usage(format!("config key `{key}` must be a nonnegative integer"))),
            Some(_) => Err(usage(format!(
                "config key `{key}` must be a nonnegative integer"
            ))),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        Ok(self.u64(key)?.map(|v| v as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_str(s: &str) -> FileCfg {
        let value: serde_json::Value = serde_json::from_str(s).unwrap();
        match value {
            serde_json::Value::Object(map) => FileCfg { value: map },
            _ => panic!("test config must be an object"),
        }
    }

    #[test]
    fn accessors_check_types_and_keys() {
        let cfg = from_str(r#"{"form": "r2", "a": 0.3, "seed": 7}"#);
        assert_eq!(cfg.str("form").unwrap().as_deref(), Some("r2"));
        assert_eq!(cfg.f64("a").unwrap(), Some(0.3));
        assert_eq!(cfg.u64("seed").unwrap(), Some(7));
        assert_eq!(cfg.str("missing").unwrap(), None);
        assert!(cfg.f64("form").is_err());
        assert!(cfg.check_keys(&["form", "a"]).is_ok());
        assert!(cfg.check_keys(&["grid"]).is_err());
    }
}

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::groebner::DEFAULT_SPAIR_BUDGET;

/// Environment variable that overrides the configured cache directory.
pub const CACHE_ENV: &str = "HILBLOC_CACHE_DIR";

/// Settings read from a JSON config file; every key is optional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub spair_budget: usize,
    pub trunc_default: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 1, spair_budget: DEFAULT_SPAIR_BUDGET, trunc_default: 6, cache_dir: None }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Cache directory by precedence: explicit flag, environment, config
    /// file, then `$HOME/.cache/hilbloc`.
    pub fn resolve_cache_dir(&self, flag: Option<&Path>) -> Option<PathBuf> {
        if let Some(p) = flag {
            return Some(p.to_path_buf());
        }
        if let Some(p) = std::env::var_os(CACHE_ENV).filter(|p| !p.is_empty()) {
            return Some(PathBuf::from(p));
        }
        if let Some(p) = &self.cache_dir {
            return Some(p.clone());
        }
        std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("hilbloc"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"seed": 9, "cache_dir": "/tmp/x"}"#).unwrap();
        let c = Config::load(&p).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.spair_budget, DEFAULT_SPAIR_BUDGET);
        assert_eq!(c.cache_dir, Some(PathBuf::from("/tmp/x")));
        assert_eq!(c.resolve_cache_dir(Some(Path::new("/y"))), Some(PathBuf::from("/y")));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"sede": 9}"#).unwrap();
        assert!(Config::load(&p).is_err());
    }
}

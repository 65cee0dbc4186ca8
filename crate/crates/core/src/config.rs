//! Runtime settings, loaded from the TOML file named by `BRAIDWORD_CONFIG`.
//! Command-line flags override file values.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::DEFAULT_FUSE;
use crate::oracle::DEFAULT_CROSSING_LIMIT;
use crate::rewrite::Budget;

pub const CONFIG_ENV: &str = "BRAIDWORD_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    #[default]
    Human,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub max_states: usize,
    pub max_slices: Option<usize>,
    pub crossing_limit: usize,
    pub braid_fuse: u64,
    pub output: OutputMode,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        let budget = Budget::default();
        Config {
            max_states: budget.max_states,
            max_slices: budget.max_slices,
            crossing_limit: DEFAULT_CROSSING_LIMIT,
            braid_fuse: DEFAULT_FUSE,
            output: OutputMode::Human,
            seed: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("`{0}` must be positive")]
    NotPositive(&'static str),
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let c: Config = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Config::from_toml(&text)
    }

    /// The file named by `BRAIDWORD_CONFIG`, or the defaults when unset.
    pub fn from_env() -> Result<Self, ConfigError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Config::load(Path::new(&p)),
            _ => Ok(Config::default()),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let checks = [
            ("max_states", self.max_states as u64),
            ("max_slices", self.max_slices.map_or(1, |s| s as u64)),
            ("crossing_limit", self.crossing_limit as u64),
            ("braid_fuse", self.braid_fuse),
        ];
        match checks.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(ConfigError::NotPositive(name)),
            None => Ok(()),
        }
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.max_states, self.max_slices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c = Config::from_toml("max_states = 500\noutput = \"json\"\n").unwrap();
        assert_eq!(c.max_states, 500);
        assert_eq!(c.output, OutputMode::Json);
        assert_eq!(c.braid_fuse, DEFAULT_FUSE);
        assert_eq!(Config::from_toml("").unwrap(), Config::default());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(
            Config::from_toml("max_states = 0"),
            Err(ConfigError::NotPositive("max_states"))
        ));
        assert!(matches!(
            Config::from_toml("max_slices = 0"),
            Err(ConfigError::NotPositive("max_slices"))
        ));
        assert!(matches!(Config::from_toml("colour = 1"), Err(ConfigError::Toml(_))));
    }

    #[test]
    fn load_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "seed = 7\ncrossing_limit = 12").unwrap();
        let c = Config::load(&p).unwrap();
        assert_eq!((c.seed, c.crossing_limit), (7, 12));
        assert!(matches!(
            Config::load(&dir.path().join("missing")),
            Err(ConfigError::Io { .. })
        ));
    }
}

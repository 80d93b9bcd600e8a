use std::path::{Path, PathBuf};

use serde::Deserialize;

use quatforms::{Error, Result};

pub const CACHE_ENV: &str = "QUATFORMS_CACHE_DIR";

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub cache_dir: Option<PathBuf>,
    pub precision: u32,
    pub truncation: usize,
    pub prime_bound: u64,
    pub conductor_bound: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { cache_dir: None, precision: 8, truncation: 20, prime_bound: 100, conductor_bound: 12 }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Input(format!("cannot read config {}: {e}", p.display())))?;
                toml::from_str(&text).map_err(|e| Error::Input(format!("bad config {}: {e}", p.display())))?
            }
            None => Config::default(),
        };
        if let Some(dir) = std::env::var_os(CACHE_ENV) {
            cfg.cache_dir = Some(PathBuf::from(dir));
        }
        if cfg.precision == 0 || cfg.truncation == 0 || cfg.prime_bound < 3 || cfg.conductor_bound == 0 {
            return Err(Error::Input("configuration bounds must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn cache_dir(&self) -> PathBuf {
        if let Some(d) = &self.cache_dir {
            return d.clone();
        }
        match std::env::var_os("XDG_CACHE_HOME") {
            Some(x) => PathBuf::from(x).join("quatforms"),
            None => match std::env::var_os("HOME") {
                Some(h) => PathBuf::from(h).join(".cache").join("quatforms"),
                None => std::env::temp_dir().join("quatforms-cache"),
            },
        }
    }
}

//! Run configuration: caps, prime, seed, execution mode.
//!
//! Files use one `key: value` pair per line; `#` starts a comment.

use std::path::Path;

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::pgroups::is_prime;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub prime: u32,
    /// Largest element set an enumeration may build.
    pub enum_cap: usize,
    /// Largest truncation degree any escalation may reach.
    pub degree_cap: u32,
    /// Largest recursion depth of the free separation algorithm.
    pub depth_cap: usize,
    /// Automorphisms tried, in order, to raise syllable length.
    pub normalization: Vec<String>,
    pub seed: u64,
    pub execution: Execution,
}

pub const NORMALIZATIONS: &[&str] = &["swap", "twist1", "twist2"];

impl Default for Config {
    fn default() -> Self {
        Config {
            prime: 2,
            enum_cap: 1_000_000,
            degree_cap: 24,
            depth_cap: 64,
            normalization: vec!["swap".into(), "twist1".into(), "twist2".into()],
            seed: 0,
            execution: Execution::default(),
        }
    }
}

impl Config {
    pub fn with_prime(p: u32) -> Self {
        Config { prime: p, ..Config::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.prime as u64) {
            return Err(Error::Precondition(format!("{} is not prime", self.prime)));
        }
        if self.enum_cap == 0 || self.degree_cap < 2 || self.depth_cap == 0 {
            return Err(Error::Precondition("caps must be positive (degree cap at least 2)".into()));
        }
        for n in &self.normalization {
            if !NORMALIZATIONS.contains(&n.as_str()) {
                return Err(Error::Precondition(format!("unknown normalization {n:?}")));
            }
        }
        Ok(())
    }

    /// Applies one `key: value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Precondition(format!("bad value {value:?} for {what}"));
        match key {
            "prime" => self.prime = value.parse().map_err(|_| bad(key))?,
            "enum-cap" => self.enum_cap = value.parse().map_err(|_| bad(key))?,
            "degree-cap" => self.degree_cap = value.parse().map_err(|_| bad(key))?,
            "depth-cap" => self.depth_cap = value.parse().map_err(|_| bad(key))?,
            "seed" => self.seed = value.parse().map_err(|_| bad(key))?,
            "execution" => self.execution = Execution::parse(value).ok_or_else(|| bad(key))?,
            "normalization" => {
                self.normalization =
                    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
            }
            _ => return Err(Error::Precondition(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once(':')
                .ok_or(Error::Parse { line: i + 1, msg: format!("expected key: value, got {line:?}") })?;
            cfg.set(k.trim(), v.trim()).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    /// Loads the file named by `RESPK_CONFIG`, or the defaults.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os("RESPK_CONFIG") {
            Some(path) => Config::load(Path::new(&path)),
            None => Ok(Config::default()),
        }
    }
}

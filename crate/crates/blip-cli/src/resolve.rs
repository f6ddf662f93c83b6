//! Three-level option resolution: flag > config file > built-in default.

use std::path::Path;

use crate::{CliResult, Failure};

/// The parsed TOML config file, one table per subcommand.
pub struct ConfigFile {
    root: Option<toml::Table>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(ConfigFile { root: None });
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
        let root: toml::Table = text
            .parse()
            .map_err(|e| Failure::config(format!("config {}: {e}", path.display())))?;
        Ok(ConfigFile { root: Some(root) })
    }

    /// The section for one subcommand, if present.
    pub fn section(&self, name: &str) -> Section<'_> {
        let table = self
            .root
            .as_ref()
            .and_then(|r| r.get(name))
            .and_then(|v| v.as_table());
        Section { name: name.to_string(), table }
    }
}

pub struct Section<'a> {
    name: String,
    table: Option<&'a toml::Table>,
}

impl Section<'_> {
    fn get(&self, key: &str) -> Option<&toml::Value> {
        self.table.and_then(|t| t.get(key))
    }

    fn bad(&self, key: &str, want: &str) -> Failure {
        Failure::config(format!("config [{}] {key}: expected {want}", self.name))
    }

    pub fn f64(&self, flag: Option<f64>, key: &str, default: f64) -> CliResult<f64> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_float()
                .or_else(|| v.as_integer().map(|i| i as f64))
                .ok_or_else(|| self.bad(key, "a number")),
        }
    }

    pub fn u32(&self, flag: Option<u32>, key: &str, default: u32) -> CliResult<u32> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_integer()
                .and_then(|i| u32::try_from(i).ok())
                .ok_or_else(|| self.bad(key, "a nonnegative integer")),
        }
    }

    pub fn opt_u32(&self, flag: Option<u32>, key: &str) -> CliResult<Option<u32>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_integer()
                .and_then(|i| u32::try_from(i).ok())
                .map(Some)
                .ok_or_else(|| self.bad(key, "a nonnegative integer")),
        }
    }

    /// Seeds accept decimal or 0x-prefixed hexadecimal, as integer or string.
    pub fn seed(&self, flag: Option<&str>, key: &str, default: u64) -> CliResult<u64> {
        let parse = |s: &str| {
            blip::fields::parse_seed(s).map_err(|e| Failure::config(format!("{key}: {e}")))
        };
        if let Some(s) = flag {
            return parse(s);
        }
        match self.get(key) {
            None => Ok(default),
            Some(toml::Value::Integer(i)) => u64::try_from(*i)
                .map_err(|_| self.bad(key, "a nonnegative integer")),
            Some(toml::Value::String(s)) => parse(s),
            Some(_) => Err(self.bad(key, "an integer or seed string")),
        }
    }

    pub fn string(&self, flag: Option<String>, key: &str, default: &str) -> CliResult<String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            None => Ok(default.to_string()),
            Some(v) => v.as_str().map(str::to_string).ok_or_else(|| self.bad(key, "a string")),
        }
    }

    /// Size ladders come as `--n 500,2000,8000` or a TOML array.
    pub fn sizes(&self, flag: Option<&str>, key: &str, default: &[u32]) -> CliResult<Vec<u32>> {
        if let Some(s) = flag {
            return parse_size_list(s).map_err(Failure::config);
        }
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(toml::Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_integer()
                        .and_then(|i| u32::try_from(i).ok())
                        .ok_or_else(|| self.bad(key, "an array of positive integers"))
                })
                .collect(),
            Some(toml::Value::String(s)) => parse_size_list(s).map_err(Failure::config),
            Some(_) => Err(self.bad(key, "an array of sizes")),
        }
    }
}

pub fn parse_size_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|part| part.trim().parse::<u32>().map_err(|e| format!("size `{part}`: {e}")))
        .collect()
}

/// Strict front-end range check for the mark probability.
pub fn validate_open_p(p: f64) -> CliResult<()> {
    if !(p.is_finite() && 0.0 < p && p < 1.0) {
        return Err(Failure::config(format!("parameter p: {p} not in the open interval (0, 1)")));
    }
    Ok(())
}

//! Flat `key = value` configuration files. Command-line flags take precedence.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

const KNOWN_KEYS: &[&str] = &[
    "threads", "cache_dir", "format", "output", "d", "d1", "d2", "e", "a", "gmin", "gmax", "t_order", "smax", "nmax",
    "amax", "d2max", "nilmax", "connected", "disconnected",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
            let key = k.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{}'", i + 1, k.trim())));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key '{key}': cannot parse '{v}'"))),
        }
    }

    /// The flag if given, else the config value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.get(key)?,
        })
    }

    /// Boolean switches: set by the flag or by `key = true` in the file.
    pub fn switch(&self, flag: bool, key: &str) -> CliResult<bool> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_precedence() {
        let c = ConfigFile::parse("# comment\nd1 = 2\ngmax=1\nconnected = true\n").unwrap();
        assert_eq!(c.pick::<u32>(None, "d1", 1).unwrap(), 2);
        assert_eq!(c.pick(Some(3u32), "d1", 1).unwrap(), 3);
        assert_eq!(c.pick::<u32>(None, "d2", 1).unwrap(), 1);
        assert!(c.switch(false, "connected").unwrap());
        assert!(ConfigFile::parse("bogus = 1").is_err());
        assert!(ConfigFile::parse("d1 2").is_err());
        assert!(ConfigFile::parse("d1 = x").unwrap().get::<u32>("d1").is_err());
    }
}

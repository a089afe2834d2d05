use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use super::CliError;

/// Keys a config file may set; each mirrors the long flag of the same name.
pub const KNOWN_KEYS: &[&str] = &[
    "va", "vb", "t", "t2", "phi", "pulses", "grid", "param", "vary", "format", "out", "seed",
    "cutoff", "r-max", "samples", "gains", "points",
];

/// `key = value` settings, one per line; `#` starts a comment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", lineno + 1))
            })?;
            let key = key.trim().to_ascii_lowercase().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The flag value if given, else the parsed config value.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|s| {
                s.parse::<T>()
                    .map_err(|e| CliError::Usage(format!("config key '{key}': {e}")))
            })
            .transpose()
    }

    pub fn pick_or<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    pub fn pick_list(&self, flag: Vec<f64>, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        if !flag.is_empty() {
            return Ok(Some(flag));
        }
        self.raw(key)
            .map(|s| {
                s.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|e| CliError::Usage(format!("config key '{key}': {e}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

/// Inclusive linear grid written `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (k as f64 / last)
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("grid '{s}' must be start:stop:count"));
        };
        let start: f64 = start
            .trim()
            .parse()
            .map_err(|e| format!("grid start: {e}"))?;
        let stop: f64 = stop.trim().parse().map_err(|e| format!("grid stop: {e}"))?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|e| format!("grid count: {e}"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err(format!("grid '{s}' has non-finite bounds"));
        }
        if count < 2 {
            return Err(format!("grid count must be at least 2, got {count}"));
        }
        Ok(Self { start, stop, count })
    }
}

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::CliError;

/// `key = value` pairs from a config file. Keys are long flag names;
/// underscores and hyphens are interchangeable.
#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

fn normalise(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('_', "-")
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", n + 1)))?;
            let key = normalise(k);
            if key.is_empty() {
                return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Config { values })
    }
}

/// Resolves each setting from its flag, then the config file, then a
/// default, and records what was used for the manifest.
pub struct Resolver<'a> {
    config: &'a Config,
    used: BTreeSet<String>,
    pub record: Vec<(String, String)>,
}

impl<'a> Resolver<'a> {
    pub fn new(config: &'a Config) -> Self {
        Resolver { config, used: BTreeSet::new(), record: Vec::new() }
    }

    pub fn opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.used.insert(key.to_string());
        let value = match flag {
            Some(v) => Some(v),
            None => match self.config.values.get(key) {
                Some(text) => Some(
                    text.parse::<T>()
                        .map_err(|e| CliError::Usage(format!("config value for '{key}' ({text}): {e}")))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.record.push((key.to_string(), v.to_string()));
        }
        Ok(value)
    }

    pub fn or<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.opt(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.record.push((key.to_string(), default.to_string()));
                Ok(default)
            }
        }
    }

    pub fn required<T>(&mut self, key: &str, flag: Option<T>) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        self.opt(key, flag)?.ok_or_else(|| CliError::Usage(format!("missing required --{key}")))
    }

    pub fn bool_flag(&mut self, key: &str, flag: bool) -> Result<bool, CliError> {
        let v = flag || self.opt::<bool>(key, None)?.unwrap_or(false);
        self.record.retain(|(k, _)| k != key);
        if v {
            self.record.push((key.to_string(), String::new()));
        }
        Ok(v)
    }

    /// Fails on config keys that no setting of this command consumed.
    pub fn finish(&self) -> Result<(), CliError> {
        let global = ["threads", "config"];
        let unknown: Vec<&String> =
            self.config.values.keys().filter(|k| !self.used.contains(*k) && !global.contains(&k.as_str())).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Usage(format!("config keys not used by this command: {unknown:?}")))
        }
    }
}

/// One line of JSON on stderr describing a run.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub threads: usize,
    pub params: BTreeMap<String, String>,
    /// Explicit command line reproducing the run.
    pub rerun: String,
}

impl Manifest {
    pub fn new(command: &str, seed: Option<u64>, threads: usize, record: &[(String, String)]) -> Self {
        let mut rerun = format!("pnglab --threads {threads} {command}");
        let mut params = BTreeMap::new();
        for (k, v) in record {
            if v.is_empty() {
                rerun.push_str(&format!(" --{k}"));
            } else {
                rerun.push_str(&format!(" --{k} {v}"));
            }
            params.insert(k.clone(), v.clone());
        }
        Manifest { version: env!("CARGO_PKG_VERSION"), command: command.to_string(), seed, threads, params, rerun }
    }

    pub fn emit(&self) {
        if let Ok(line) = serde_json::to_string(self) {
            eprintln!("{line}");
        }
    }
}

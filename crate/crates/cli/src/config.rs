//! The flat `key = value` configuration format.
//!
//! ```text
//! # extinction run
//! alpha = 0.25
//! gamma = 1.0
//! tau.max = 60
//! replicas = 20000
//! ```
//!
//! One assignment per line. `#` starts a comment that runs to the end of the
//! line. Keys are dotted lowercase identifiers (`[a-z][a-z0-9_]*`, joined by
//! `.`). Numbers are decimal, optionally with an exponent; lists are
//! comma-separated. Blank lines are ignored and a key may appear only once.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{}: {reason}", location(path, *line))]
    Parse {
        path: PathBuf,
        line: Option<usize>,
        reason: String,
    },
    #[error("invalid `{key}`: {constraint}")]
    Validation { key: String, constraint: String },
}

fn location(path: &Path, line: Option<usize>) -> String {
    match line {
        Some(l) => format!("{}:{l}", path.display()),
        None => path.display().to_string(),
    }
}

impl ConfigError {
    pub(crate) fn validation(key: &str, constraint: impl Into<String>) -> Self {
        Self::Validation {
            key: key.to_string(),
            constraint: constraint.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    line: usize,
    value: String,
}

/// A syntactically valid config file, before any key is interpreted.
#[derive(Clone, Debug, PartialEq)]
pub struct RawConfig {
    path: PathBuf,
    entries: BTreeMap<String, Entry>,
}

fn valid_key(key: &str) -> bool {
    key.split('.').all(|part| {
        let mut chars = part.chars();
        matches!(chars.next(), Some('a'..='z'))
            && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
    })
}

impl RawConfig {
    pub fn parse_str(path: impl Into<PathBuf>, text: &str) -> Result<Self, ConfigError> {
        let path = path.into();
        let err = |line, reason: String| ConfigError::Parse {
            path: path.clone(),
            line: Some(line),
            reason,
        };
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(err(
                    line,
                    format!("expected `key = value`, found `{content}`"),
                ));
            };
            let (key, value) = (key.trim(), value.trim());
            if !valid_key(key) {
                return Err(err(
                    line,
                    format!("malformed key `{key}` (dotted lowercase expected)"),
                ));
            }
            if value.is_empty() {
                return Err(err(line, format!("missing value for `{key}`")));
            }
            if let Some(first) = entries.get(key) {
                return Err(err(
                    line,
                    format!("duplicate key `{key}` (first set on line {})", first.line),
                ));
            }
            entries.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }
        Ok(Self { path, entries })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    /// Keys and raw values, sorted by key.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .map(|(k, e)| (k.clone(), e.value.clone()))
            .collect()
    }
}

/// Reads and tokenizes a config file. Unknown keys and out-of-range values are
/// reported later, when the file is bound to an experiment.
pub fn parse_config(path: &Path) -> Result<RawConfig, ConfigError> {
    let bytes = std::fs::read(path).map_err(|e| ConfigError::Parse {
        path: path.to_path_buf(),
        line: None,
        reason: format!("cannot read config: {e}"),
    })?;
    let text = String::from_utf8(bytes).map_err(|e| ConfigError::Parse {
        path: path.to_path_buf(),
        line: None,
        reason: format!("config is not valid UTF-8: {e}"),
    })?;
    RawConfig::parse_str(path, &text)
}

/// Typed, tracked access to a [`RawConfig`]. Every key read is recorded with
/// its resolved value, so defaults show up in the manifest and leftover keys
/// can be rejected.
pub(crate) struct Params<'a> {
    raw: &'a RawConfig,
    used: BTreeSet<String>,
    resolved: BTreeMap<String, String>,
}

impl<'a> Params<'a> {
    pub(crate) fn new(raw: &'a RawConfig) -> Self {
        Self {
            raw,
            used: BTreeSet::new(),
            resolved: BTreeMap::new(),
        }
    }

    fn lexical(&self, key: &str, reason: String) -> ConfigError {
        ConfigError::Parse {
            path: self.raw.path.clone(),
            line: self.raw.entries.get(key).map(|e| e.line),
            reason,
        }
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        self.used.insert(key.to_string());
        self.raw.get(key)
    }

    fn number(&self, key: &str, text: &str) -> Result<f64, ConfigError> {
        let v: f64 = text.parse().map_err(|_| {
            self.lexical(
                key,
                format!("`{key}`: expected a decimal number, found `{text}`"),
            )
        })?;
        // `inf` and `nan` parse as f64 but are not decimal numbers.
        if v.is_finite() && text.bytes().any(|b| b.is_ascii_digit()) {
            Ok(v)
        } else {
            Err(self.lexical(
                key,
                format!("`{key}`: expected a decimal number, found `{text}`"),
            ))
        }
    }

    pub(crate) fn opt_f64(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        let Some(text) = self.take(key) else {
            return Ok(None);
        };
        let v = self.number(key, text)?;
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(Some(v))
    }

    pub(crate) fn f64(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.opt_f64(key)?.unwrap_or(default);
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    pub(crate) fn required_f64(&mut self, key: &str) -> Result<f64, ConfigError> {
        self.opt_f64(key)?
            .ok_or_else(|| ConfigError::validation(key, format!("`{key}` is required")))
    }

    pub(crate) fn opt_u64(&mut self, key: &str) -> Result<Option<u64>, ConfigError> {
        let Some(text) = self.take(key) else {
            return Ok(None);
        };
        let v: u64 = text.parse().map_err(|_| {
            self.lexical(
                key,
                format!("`{key}`: expected a non-negative integer, found `{text}`"),
            )
        })?;
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(Some(v))
    }

    pub(crate) fn u64(&mut self, key: &str, default: u64) -> Result<u64, ConfigError> {
        let v = self.opt_u64(key)?.unwrap_or(default);
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    pub(crate) fn usize(&mut self, key: &str, default: usize) -> Result<usize, ConfigError> {
        let v = self.u64(key, default as u64)?;
        usize::try_from(v).map_err(|_| ConfigError::validation(key, format!("{key} fits in usize")))
    }

    pub(crate) fn opt_list(&mut self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        let Some(text) = self.take(key) else {
            return Ok(None);
        };
        let values = text
            .split(',')
            .map(|item| self.number(key, item.trim()))
            .collect::<Result<Vec<f64>, _>>()?;
        self.resolved.insert(key.to_string(), join(&values));
        Ok(Some(values))
    }

    pub(crate) fn list(&mut self, key: &str, default: &[f64]) -> Result<Vec<f64>, ConfigError> {
        let v = self.opt_list(key)?.unwrap_or_else(|| default.to_vec());
        self.resolved.insert(key.to_string(), join(&v));
        Ok(v)
    }

    pub(crate) fn opt_string(&mut self, key: &str) -> Option<String> {
        let v = self.take(key)?.to_string();
        self.resolved.insert(key.to_string(), v.clone());
        Some(v)
    }

    pub(crate) fn string(&mut self, key: &str, default: &str) -> String {
        let v = self.opt_string(key).unwrap_or_else(|| default.to_string());
        self.resolved.insert(key.to_string(), v.clone());
        v
    }

    /// Rejects keys that were never read, reporting the earliest one.
    pub(crate) fn finish(self, experiment: &str) -> Result<BTreeMap<String, String>, ConfigError> {
        let unknown = self
            .raw
            .entries
            .iter()
            .filter(|(k, _)| !self.used.contains(*k))
            .min_by_key(|(_, e)| e.line);
        match unknown {
            Some((key, _)) => Err(ConfigError::validation(
                key,
                format!("unknown key for `{experiment}`"),
            )),
            None => Ok(self.resolved),
        }
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Constraint checks that name the key and the violated condition.
pub(crate) fn ensure(
    ok: bool,
    key: &str,
    constraint: impl Into<String>,
) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::validation(key, constraint))
    }
}

pub(crate) fn positive(key: &str, v: f64) -> Result<f64, ConfigError> {
    ensure(v > 0.0, key, format!("{key} > 0"))?;
    Ok(v)
}

pub(crate) fn unit_interval(key: &str, v: f64) -> Result<f64, ConfigError> {
    ensure((0.0..=1.0).contains(&v), key, format!("{key} ∈ [0,1]"))?;
    Ok(v)
}

pub(crate) fn at_least(key: &str, v: usize, min: usize) -> Result<usize, ConfigError> {
    ensure(v >= min, key, format!("{key} ≥ {min}"))?;
    Ok(v)
}

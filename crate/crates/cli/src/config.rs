//! Optional config file: either a JSON object or `key = value` lines.
//! Keys are flag names without the leading dashes; `_` and `-` are
//! interchangeable. Command-line flags take precedence.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct Config {
    values: HashMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        if text.trim_start().starts_with('{') {
            let obj: serde_json::Map<String, serde_json::Value> = serde_json::from_str(text)
                .map_err(|e| CliError::Usage(format!("invalid JSON config: {e}")))?;
            for (k, v) in obj {
                let v = match v {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Array(items) => items
                        .iter()
                        .map(|i| i.as_str().map_or_else(|| i.to_string(), str::to_owned))
                        .collect::<Vec<_>>()
                        .join(","),
                    other => other.to_string(),
                };
                values.insert(normalize(&k), v);
            }
        } else {
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("config line {}: expected key=value", lineno + 1))
                })?;
                values.insert(normalize(k), v.trim().to_owned());
            }
        }
        Ok(Config { values })
    }

    /// Flag value if given, else the config value, else `default`.
    pub fn resolve<T>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.resolve_opt(key, flag)?.unwrap_or(default))
    }

    pub fn resolve_opt<T>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}"))),
        }
    }

    pub fn resolve_list(&self, key: &str, flag: Vec<String>) -> Vec<String> {
        if !flag.is_empty() {
            return flag;
        }
        self.values
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_owned)
                    .collect()
            })
            .unwrap_or_default()
    }
}

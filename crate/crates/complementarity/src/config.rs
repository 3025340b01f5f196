//! Flat `key = value` configuration files.
//!
//! Grammar: one `key = value` pair per line; blank lines and lines starting
//! with `#` are ignored; inline `#` comments are not supported (values may
//! legitimately contain `#`-free text only anyway — numbers and booleans).
//! All errors carry the file path and line number.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FlatConfig {
    path: String,
    /// key → (line number, raw value)
    entries: HashMap<String, (usize, String)>,
}

impl FlatConfig {
    pub fn parse_file(path: &Path) -> Result<FlatConfig> {
        let text = std::fs::read_to_string(path)?;
        FlatConfig::parse_str(&text, &path.display().to_string())
    }

    pub fn parse_str(text: &str, path_label: &str) -> Result<FlatConfig> {
        let mut entries = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config {
                    path: path_label.to_string(),
                    line: line_no,
                    msg: format!("expected `key = value`, got `{line}`"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(Error::Config {
                    path: path_label.to_string(),
                    line: line_no,
                    msg: "empty key".into(),
                });
            }
            if let Some((prev_line, _)) =
                entries.insert(key.to_string(), (line_no, value.to_string()))
            {
                return Err(Error::Config {
                    path: path_label.to_string(),
                    line: line_no,
                    msg: format!("duplicate key `{key}` (first set on line {prev_line})"),
                });
            }
        }
        Ok(FlatConfig {
            path: path_label.to_string(),
            entries,
        })
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, value)) => value.parse::<f64>().map(Some).map_err(|e| Error::Config {
                path: self.path.clone(),
                line: *line,
                msg: format!("key `{key}`: invalid number `{value}` ({e})"),
            }),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?.ok_or_else(|| Error::Config {
            path: self.path.clone(),
            line: 0,
            msg: format!("missing required key `{key}`"),
        })
    }

    pub fn get_bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.entries.get(key) {
            None => Ok(default),
            Some((line, value)) => match value.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                other => Err(Error::Config {
                    path: self.path.clone(),
                    line: *line,
                    msg: format!("key `{key}`: invalid boolean `{other}`"),
                }),
            },
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

//! Flat key-value experiment configuration.
//!
//! ```text
//! # comment
//! experiment = power-curve
//! [null]
//! model = ergm
//! beta = [-2.0, 0.0]
//! ```
//!
//! Keys before any `[section]` header belong to the top level. Values are
//! scalars or bracketed comma-separated lists. Keys are case-insensitive and
//! every key must be consumed by the command reading the file, so typos are
//! reported instead of ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug)]
pub struct ConfigFile {
    entries: BTreeMap<String, Entry>,
    used: Mutex<BTreeSet<String>>,
    base_dir: PathBuf,
    stem: String,
}

fn config_error(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                if !content.contains('=') {
                    let name = rest
                        .strip_suffix(']')
                        .ok_or_else(|| config_error(line, content, "unterminated section header"))?;
                    section = name.trim().to_ascii_lowercase();
                    if section.is_empty() {
                        return Err(config_error(line, content, "empty section name"));
                    }
                    continue;
                }
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_error(line, content, "expected `key = value`"))?;
            let key = key.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(config_error(line, "", "missing key"));
            }
            let field = if section.is_empty() { key } else { format!("{section}.{key}") };
            let entry = Entry {
                value: value.trim().to_string(),
                line,
            };
            if let Some(prev) = entries.insert(field.clone(), entry) {
                return Err(config_error(line, &field, format!("duplicate key (first set on line {})", prev.line)));
            }
        }
        Ok(ConfigFile {
            entries,
            used: Mutex::new(BTreeSet::new()),
            base_dir: PathBuf::from("."),
            stem: "experiment".into(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ConfigFile> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(0, &path.display().to_string(), format!("cannot read config: {e}")))?;
        let mut cfg = ConfigFile::parse(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "experiment".into());
        Ok(cfg)
    }

    /// File name without extension, or `experiment` for parsed text.
    pub fn stem(&self) -> &str {
        &self.stem
    }

    fn entry(&self, field: &str) -> Option<&Entry> {
        let e = self.entries.get(field);
        if e.is_some() {
            self.used.lock().expect("config lock").insert(field.to_string());
        }
        e
    }

    pub fn has(&self, field: &str) -> bool {
        self.entries.contains_key(field)
    }

    /// Line of `field`, or 0 when absent.
    pub fn line_of(&self, field: &str) -> usize {
        self.entries.get(field).map_or(0, |e| e.line)
    }

    pub fn error(&self, field: &str, message: impl Into<String>) -> Error {
        config_error(self.line_of(field), field, message)
    }

    pub fn string(&self, field: &str) -> Result<Option<String>> {
        match self.entry(field) {
            None => Ok(None),
            Some(e) if e.value.starts_with('[') => Err(config_error(e.line, field, "expected a single value, found a list")),
            Some(e) => Ok(Some(unquote(&e.value).to_string())),
        }
    }

    pub fn require_string(&self, field: &str) -> Result<String> {
        self.string(field)?.ok_or_else(|| config_error(0, field, "missing required key"))
    }

    pub fn get<T: FromStr>(&self, field: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(text) = self.string(field)? else {
            return Ok(None);
        };
        text.parse::<T>()
            .map(Some)
            .map_err(|e| config_error(self.line_of(field), field, format!("cannot parse `{text}`: {e}")))
    }

    pub fn get_or<T: FromStr>(&self, field: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(field)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, field: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(field)?.ok_or_else(|| config_error(0, field, "missing required key"))
    }

    /// A bracketed list; a bare scalar is read as a one-element list.
    pub fn list<T: FromStr>(&self, field: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(e) = self.entry(field) else {
            return Ok(None);
        };
        let inner = match e.value.strip_prefix('[') {
            Some(rest) => rest
                .strip_suffix(']')
                .ok_or_else(|| config_error(e.line, field, "unterminated list"))?,
            None => e.value.as_str(),
        };
        let items: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        items
            .iter()
            .map(|item| {
                unquote(item)
                    .parse::<T>()
                    .map_err(|err| config_error(e.line, field, format!("cannot parse list item `{item}`: {err}")))
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    pub fn require_list<T: FromStr>(&self, field: &str) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let items = self.list(field)?.ok_or_else(|| config_error(0, field, "missing required key"))?;
        if items.is_empty() {
            return Err(self.error(field, "list must not be empty"));
        }
        Ok(items)
    }

    /// Path value resolved against the config file's directory.
    pub fn path(&self, field: &str) -> Result<Option<PathBuf>> {
        Ok(self.string(field)?.map(|p| {
            let p = PathBuf::from(p);
            if p.is_absolute() {
                p
            } else {
                self.base_dir.join(p)
            }
        }))
    }

    /// Fails on the first key no getter has read.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.lock().expect("config lock");
        match self.entries.iter().find(|(k, _)| !used.contains(*k)) {
            Some((k, e)) => Err(config_error(e.line, k, "unknown key")),
            None => Ok(()),
        }
    }
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('"').and_then(|r| r.strip_suffix('"')).unwrap_or(s)
}

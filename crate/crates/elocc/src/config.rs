//! `key = value` run configuration files. The CLI merges these under the
//! command-line flags; flags win.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Parse a config file: one `key = value` per line, `#` comments, blank
/// lines ignored. Keys use the long-flag names (`model`, `n`, `cut`, ...).
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("line {}: expected key = value", idx + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(Error::InvalidConfig(format!("line {}: empty key", idx + 1)));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::InvalidConfig(format!("duplicate key {key:?}")));
        }
    }
    Ok(map)
}

//! Layered settings: built-in defaults, then a TOML key-value file, then
//! command-line flags. Later layers win key by key.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// Resolves `C` from its defaults, an optional config file and the flags
/// that were actually given (`None` fields are skipped).
pub fn resolve<C, F>(file: Option<&Path>, flags: &F) -> Result<C>
where
    C: Default + Serialize + DeserializeOwned,
    F: Serialize,
{
    let Value::Object(mut merged) = serde_json::to_value(C::default())? else {
        bail!("settings must serialize to a table");
    };
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let table: toml::Table = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let Value::Object(from_file) = serde_json::to_value(table)? else {
            unreachable!("a TOML table is a map");
        };
        overlay(&mut merged, from_file, |key| {
            format!("unknown key {key:?} in {}", path.display())
        })?;
    }
    let Value::Object(from_flags) = serde_json::to_value(flags)? else {
        bail!("flags must serialize to a table");
    };
    let given: Map<String, Value> = from_flags.into_iter().filter(|(_, v)| !v.is_null()).collect();
    overlay(&mut merged, given, |key| format!("flag {key:?} has no setting"))?;
    serde_json::from_value(Value::Object(merged)).context("invalid settings")
}

fn overlay(base: &mut Map<String, Value>, top: Map<String, Value>, unknown: impl Fn(&str) -> String) -> Result<()> {
    for (key, value) in top {
        match base.get_mut(&key) {
            Some(slot) => *slot = value,
            None => bail!(unknown(&key)),
        }
    }
    Ok(())
}

pub mod dismantle;
pub mod eval;
pub mod gen;
pub mod sir;
pub mod train;

use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use hyperdismantle::baselines::{Strategy, StrategyKind};
use hyperdismantle::hypersage::{checkpoint, ParameterSet};
use hyperdismantle::io::{self, Format, Loaded};

use crate::manifest::Recorder;

/// A missing or contradictory argument; reported with the usage text.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

pub fn prepare_out(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

pub fn load_input(rec: &mut Recorder, path: &Path, format: Format, gcc: bool) -> Result<Loaded> {
    rec.input(path)?;
    io::load(path, format, gcc).with_context(|| format!("loading {}", path.display()))
}

pub fn load_agent(rec: &mut Recorder, path: Option<&Path>) -> Result<Option<Arc<ParameterSet>>> {
    let Some(path) = path else {
        return Ok(None);
    };
    rec.input(path)?;
    let params = checkpoint::load(path).with_context(|| format!("loading {}", path.display()))?;
    Ok(Some(Arc::new(params)))
}

/// Parses strategy names; AGENT needs a checkpoint.
pub fn strategies(names: &[String], agent: Option<Arc<ParameterSet>>, seed: u64) -> Result<Vec<Strategy>> {
    names
        .iter()
        .map(|name| {
            let kind: StrategyKind = match name.parse() {
                Ok(k) => k,
                Err(_) => return usage(format!("unknown strategy {name:?}")),
            };
            if kind == StrategyKind::Agent && agent.is_none() {
                return usage("strategy AGENT requires --checkpoint");
            }
            Ok(Strategy::from_kind(kind, agent.clone(), seed)?)
        })
        .collect()
}

/// Original ids of `nodes`, space separated.
pub fn original_ids(id_map: &[u64], nodes: &[usize]) -> String {
    nodes
        .iter()
        .map(|&v| id_map[v].to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn id_map_csv(id_map: &[u64]) -> String {
    let mut c = crate::csv::Csv::new(&["node", "original"]);
    for (v, orig) in id_map.iter().enumerate() {
        c.row([v.to_string(), orig.to_string()]);
    }
    c.into_string()
}

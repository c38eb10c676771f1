//! Self-describing JSON checkpoints.
//!
//! ```json
//! { "format": "hyperdismantle-checkpoint", "version": 1, "dims": [1, 64, 64, 64],
//!   "weights": { "layer0.w1": { "shape": [1, 1], "data": [0.5] }, … } }
//! ```
//!
//! Data is row-major `f64`; floats are written in shortest round-trip form so
//! a save/load cycle is bit-exact.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ParameterSet;
use crate::error::{Error, Result};

pub const FORMAT: &str = "hyperdismantle-checkpoint";
pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Tensor {
    shape: [usize; 2],
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    dims: Vec<usize>,
    weights: BTreeMap<String, Tensor>,
}

pub fn to_json(params: &ParameterSet) -> Result<String> {
    let mut weights = BTreeMap::new();
    params.for_each_tensor(|name, (r, c), data| {
        weights.insert(
            name.to_string(),
            Tensor {
                shape: [r, c],
                data: data.to_vec(),
            },
        );
    });
    let ck = Checkpoint {
        format: FORMAT.to_string(),
        version: VERSION,
        dims: params.dims().to_vec(),
        weights,
    };
    Ok(serde_json::to_string_pretty(&ck)?)
}

pub fn from_json(text: &str) -> Result<ParameterSet> {
    let header: serde_json::Value = serde_json::from_str(text)?;
    let format = header.get("format").and_then(|v| v.as_str());
    let version = header.get("version").and_then(|v| v.as_u64());
    if format != Some(FORMAT) || version != Some(u64::from(VERSION)) {
        return Err(Error::CheckpointVersion {
            found: format!(
                "{} v{}",
                format.unwrap_or("?"),
                version.map_or("?".into(), |v| v.to_string())
            ),
            expected: format!("{FORMAT} v{VERSION}"),
        });
    }
    let mut ck: Checkpoint = serde_json::from_value(header)?;
    let mut params = ParameterSet::zeros(&ck.dims)?;
    let mut problem = None;
    params.for_each_tensor_mut(|name, (r, c), data| match ck.weights.remove(name) {
        Some(t) if t.shape == [r, c] && t.data.len() == data.len() => data.copy_from_slice(&t.data),
        Some(t) => {
            problem.get_or_insert(format!("{name}: shape {:?}, expected [{r}, {c}]", t.shape));
        }
        None => {
            problem.get_or_insert(format!("missing tensor {name}"));
        }
    });
    if let Some(name) = ck.weights.keys().next() {
        problem.get_or_insert(format!("unexpected tensor {name}"));
    }
    match problem {
        Some(p) => Err(Error::Checkpoint(p)),
        None => Ok(params),
    }
}

pub fn save(params: &ParameterSet, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(params)?)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<ParameterSet> {
    from_json(&std::fs::read_to_string(path)?)
}

use std::path::{Path, PathBuf};

use anyhow::Result;
use hyperdismantle::evalsim::{anc, dismantle};
use hyperdismantle::io::Format;
use serde::{Deserialize, Serialize};

use super::{id_map_csv, load_agent, load_input, original_ids, prepare_out, strategies, usage};
use crate::csv::{num, Csv};
use crate::manifest::Recorder;
use crate::settings::resolve;

#[derive(clap::Args, Serialize)]
pub struct Flags {
    /// Hypernetwork file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// hyperedge-list | contact-timestamps
    #[arg(long)]
    format: Option<Format>,
    /// Keep only the giant connected component.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", require_equals = true)]
    gcc: Option<bool>,
    /// HD, HDA, CI, HHD, HHDA, RANDOM or AGENT.
    #[arg(long)]
    strategy: Option<String>,
    /// Agent checkpoint, required for AGENT.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Fraction of the initial nodes removed per batch.
    #[arg(long)]
    batch_frac: Option<f64>,
    /// Stop after this many batches.
    #[arg(long)]
    budget: Option<usize>,
    /// Seed of the RANDOM strategy.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(clap::Args)]
pub struct Args {
    #[command(flatten)]
    flags: Flags,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize, Deserialize)]
pub struct Settings {
    input: Option<PathBuf>,
    format: Format,
    gcc: bool,
    strategy: String,
    checkpoint: Option<PathBuf>,
    batch_frac: f64,
    budget: Option<usize>,
    seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            input: None,
            format: Format::default(),
            gcc: false,
            strategy: "HHDA".into(),
            checkpoint: None,
            batch_frac: 0.01,
            budget: None,
            seed: 0,
        }
    }
}

pub fn run(args: &Args, config: Option<&Path>, argv: Vec<String>) -> Result<()> {
    let s: Settings = resolve(config, &args.flags)?;
    let Some(input) = &s.input else {
        return usage("dismantle needs --input");
    };
    let mut rec = Recorder::start("dismantle", argv, config)?;
    let agent = load_agent(&mut rec, s.checkpoint.as_deref())?;
    let strategy = strategies(std::slice::from_ref(&s.strategy), agent, s.seed)?.remove(0);
    let loaded = load_input(&mut rec, input, s.format, s.gcc)?;
    prepare_out(&args.out)?;

    let trace = dismantle(&loaded.graph, &strategy, s.batch_frac, s.budget)?;
    let mut csv = Csv::new(&["step", "removed", "connectivity"]);
    for (i, (batch, c)) in trace.batches().iter().zip(&trace.connectivity).enumerate() {
        csv.row([(i + 1).to_string(), original_ids(&loaded.id_map, batch), num(*c)]);
    }
    rec.output(&args.out.join("trace.csv"), &csv.into_string())?;

    let mut summary = Csv::new(&["strategy", "nodes", "batches", "anc"]);
    summary.row([
        strategy.name().to_string(),
        loaded.graph.node_count().to_string(),
        trace.len().to_string(),
        num(anc(&trace)?),
    ]);
    rec.output(&args.out.join("summary.csv"), &summary.into_string())?;
    rec.output(&args.out.join("id_map.csv"), &id_map_csv(&loaded.id_map))?;
    rec.finish(&args.out, &s, s.seed)?;
    Ok(())
}

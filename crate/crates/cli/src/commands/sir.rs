use std::path::{Path, PathBuf};

use anyhow::Result;
use hyperdismantle::evalsim::{containment_table, SirConfig};
use hyperdismantle::io::Format;
use serde::{Deserialize, Serialize};

use super::{id_map_csv, load_agent, load_input, prepare_out, strategies, usage};
use crate::csv::{num, Csv};
use crate::manifest::Recorder;
use crate::settings::resolve;

#[derive(clap::Args, Serialize)]
pub struct Flags {
    /// Hypernetwork file; with contact-timestamps the earliest group seeds
    /// the outbreak.
    #[arg(long)]
    input: Option<PathBuf>,
    /// hyperedge-list | contact-timestamps
    #[arg(long)]
    format: Option<Format>,
    /// Keep only the giant connected component.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", require_equals = true)]
    gcc: Option<bool>,
    /// Comma-separated strategy names.
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<String>>,
    /// Agent checkpoint, required for AGENT.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Infection probability per contact and step.
    #[arg(long)]
    beta: Option<f64>,
    /// Recovery probability per step.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// Comma-separated immunized fractions, ascending.
    #[arg(long, value_delimiter = ',')]
    immune_ratios: Option<Vec<f64>>,
    /// Batch fraction used to rank nodes for immunization.
    #[arg(long)]
    batch_frac: Option<f64>,
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
    strategies: Vec<String>,
    checkpoint: Option<PathBuf>,
    #[serde(flatten)]
    sir: SirConfig,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            input: None,
            format: Format::ContactTimestamps,
            gcc: false,
            strategies: ["HD", "HDA", "CI", "HHD", "HHDA"].map(String::from).to_vec(),
            checkpoint: None,
            sir: SirConfig::default(),
        }
    }
}

pub fn run(args: &Args, config: Option<&Path>, argv: Vec<String>) -> Result<()> {
    let s: Settings = resolve(config, &args.flags)?;
    let Some(input) = &s.input else {
        return usage("sir needs --input");
    };
    let mut rec = Recorder::start("sir", argv, config)?;
    let agent = load_agent(&mut rec, s.checkpoint.as_deref())?;
    let strategies = strategies(&s.strategies, agent, s.sir.seed)?;
    let loaded = load_input(&mut rec, input, s.format, s.gcc)?;
    prepare_out(&args.out)?;

    let table = containment_table(&loaded.graph, &strategies, &s.sir)?;
    let mut header = vec!["strategy".to_string()];
    header.extend(table.ratios.iter().map(|&r| num(r)));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut means = Csv::new(&header);
    let mut errs = Csv::new(&header);
    for row in &table.rows {
        means.row(std::iter::once(row.strategy.clone()).chain(row.outcomes.iter().map(|o| num(o.mean))));
        errs.row(std::iter::once(row.strategy.clone()).chain(row.outcomes.iter().map(|o| num(o.std_err))));
    }
    rec.output(&args.out.join("containment.csv"), &means.into_string())?;
    rec.output(&args.out.join("containment_stderr.csv"), &errs.into_string())?;
    rec.output(&args.out.join("id_map.csv"), &id_map_csv(&loaded.id_map))?;
    rec.finish(&args.out, &s, s.sir.seed)?;
    Ok(())
}

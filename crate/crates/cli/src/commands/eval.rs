use std::path::{Path, PathBuf};

use anyhow::Result;
use hyperdismantle::evalsim::{anc, dismantle};
use hyperdismantle::io::Format;
use hyperdismantle::synthgen::{generate_indexed, GenConfig};
use hyperdismantle::Hypergraph;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{load_agent, load_input, prepare_out, strategies, usage};
use crate::csv::{num, Csv};
use crate::manifest::Recorder;
use crate::settings::resolve;

#[derive(clap::Args, Serialize)]
pub struct Flags {
    /// Hypernetwork file; repeat for several datasets.
    #[arg(long = "input")]
    inputs: Option<Vec<PathBuf>>,
    /// hyperedge-list | contact-timestamps
    #[arg(long)]
    format: Option<Format>,
    /// Keep only the giant connected component of each input.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", require_equals = true)]
    gcc: Option<bool>,
    /// Also evaluate this many synthetic hypernetworks.
    #[arg(long)]
    synthetic: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    p_burn: Option<f64>,
    #[arg(long)]
    p_expand: Option<f64>,
    /// Comma-separated strategy names.
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<String>>,
    /// Agent checkpoint, required for AGENT.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    batch_frac: Option<f64>,
    /// Seeds the synthetic instances and the RANDOM strategy.
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
    inputs: Vec<PathBuf>,
    format: Format,
    gcc: bool,
    synthetic: usize,
    n_min: usize,
    n_max: usize,
    p_burn: f64,
    p_expand: f64,
    strategies: Vec<String>,
    checkpoint: Option<PathBuf>,
    batch_frac: f64,
    seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        let g = GenConfig::default();
        Self {
            inputs: Vec::new(),
            format: Format::default(),
            gcc: false,
            synthetic: 0,
            n_min: g.n_min,
            n_max: g.n_max,
            p_burn: g.p_burn,
            p_expand: g.p_expand,
            strategies: ["HD", "HDA", "CI", "HHD", "HHDA", "RANDOM"].map(String::from).to_vec(),
            checkpoint: None,
            batch_frac: 0.01,
            seed: 0,
        }
    }
}

pub fn run(args: &Args, config: Option<&Path>, argv: Vec<String>) -> Result<()> {
    let s: Settings = resolve(config, &args.flags)?;
    if s.inputs.is_empty() && s.synthetic == 0 {
        return usage("eval needs --input or --synthetic");
    }
    if s.strategies.is_empty() {
        return usage("eval needs at least one strategy");
    }
    let mut rec = Recorder::start("eval", argv, config)?;
    let agent = load_agent(&mut rec, s.checkpoint.as_deref())?;
    let strategies = strategies(&s.strategies, agent, s.seed)?;

    let mut datasets: Vec<(String, Hypergraph)> = Vec::new();
    for path in &s.inputs {
        let name = path
            .file_stem()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        datasets.push((name, load_input(&mut rec, path, s.format, s.gcc)?.graph));
    }
    let gen = GenConfig {
        n_min: s.n_min,
        n_max: s.n_max,
        p_burn: s.p_burn,
        p_expand: s.p_expand,
        seed: s.seed,
    };
    for i in 0..s.synthetic {
        datasets.push((format!("synthetic-{i:04}"), generate_indexed(&gen, i as u64)?));
    }
    prepare_out(&args.out)?;

    let table: Vec<Vec<f64>> = datasets
        .par_iter()
        .map(|(_, g)| {
            strategies
                .iter()
                .map(|st| Ok(anc(&dismantle(g, st, s.batch_frac, None)?)?))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let mut header = vec!["dataset"];
    header.extend(strategies.iter().map(|st| st.name()));
    let mut csv = Csv::new(&header);
    for ((name, _), row) in datasets.iter().zip(&table) {
        csv.row(std::iter::once(name.clone()).chain(row.iter().map(|&a| num(a))));
    }
    if table.len() > 1 {
        let means = (0..strategies.len()).map(|j| num(table.iter().map(|r| r[j]).sum::<f64>() / table.len() as f64));
        csv.row(std::iter::once("mean".to_string()).chain(means));
    }
    rec.output(&args.out.join("eval.csv"), &csv.into_string())?;
    rec.finish(&args.out, &s, s.seed)?;
    Ok(())
}

use std::path::{Path, PathBuf};

use anyhow::Result;
use hyperdismantle::io::to_hyperedge_list;
use hyperdismantle::synthgen::{generate_indexed, GenConfig};
use serde::{Deserialize, Serialize};

use super::prepare_out;
use crate::manifest::Recorder;
use crate::settings::resolve;

#[derive(clap::Args, Serialize)]
pub struct Flags {
    /// Number of hypernetworks.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Burning probability.
    #[arg(long)]
    p_burn: Option<f64>,
    /// Probability of a second fire per new node.
    #[arg(long)]
    p_expand: Option<f64>,
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
    count: usize,
    #[serde(flatten)]
    gen: GenConfig,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            count: 1,
            gen: GenConfig::default(),
        }
    }
}

pub fn run(args: &Args, config: Option<&Path>, argv: Vec<String>) -> Result<()> {
    let s: Settings = resolve(config, &args.flags)?;
    s.gen.validate()?;
    prepare_out(&args.out)?;
    let mut rec = Recorder::start("gen", argv, config)?;
    for i in 0..s.count {
        let g = generate_indexed(&s.gen, i as u64)?;
        rec.output(
            &args.out.join(format!("hypernetwork_{i:04}.txt")),
            &to_hyperedge_list(&g),
        )?;
    }
    rec.finish(&args.out, &s, s.gen.seed)?;
    Ok(())
}

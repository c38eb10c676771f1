use std::path::{Path, PathBuf};

use anyhow::Result;
use hyperdismantle::agent::{train_with, Termination, TrainConfig, TrainEvent};
use hyperdismantle::hypersage::{checkpoint, Init};
use hyperdismantle::synthgen::GenConfig;
use serde::{Deserialize, Serialize};

use super::prepare_out;
use crate::csv::{num, Csv};
use crate::manifest::Recorder;
use crate::settings::resolve;

#[derive(clap::Args, Serialize)]
pub struct Flags {
    /// Bootstrap discount.
    #[arg(long)]
    gamma: Option<f64>,
    /// n-step window length.
    #[arg(long)]
    n_step: Option<usize>,
    /// Exploration probability.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    episodes: Option<usize>,
    /// Target network copy interval in episodes.
    #[arg(long)]
    target_update: Option<usize>,
    /// Episodes before the first update.
    #[arg(long)]
    warmup: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    /// Weight of the reconstruction loss.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    validation_interval: Option<usize>,
    #[arg(long)]
    validation_size: Option<usize>,
    /// Replay capacity.
    #[arg(long)]
    buffer_capacity: Option<usize>,
    #[arg(long)]
    embed_dim: Option<usize>,
    #[arg(long)]
    layers: Option<usize>,
    /// uniform | he
    #[arg(long)]
    init: Option<Init>,
    /// fully-fragmented | first-disconnect
    #[arg(long)]
    termination: Option<Termination>,
    #[arg(long)]
    batch_frac: Option<f64>,
    /// Gradient norm cap; 0 disables.
    #[arg(long)]
    grad_clip: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    p_burn: Option<f64>,
    #[arg(long)]
    p_expand: Option<f64>,
}

#[derive(clap::Args)]
pub struct Args {
    #[command(flatten)]
    flags: Flags,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Print each validation round to stderr.
    #[arg(long)]
    progress: bool,
}

#[derive(Serialize, Deserialize)]
pub struct Settings {
    #[serde(flatten)]
    train: TrainConfig,
    n_min: usize,
    n_max: usize,
    p_burn: f64,
    p_expand: f64,
}

impl Default for Settings {
    fn default() -> Self {
        let g = GenConfig::default();
        Self {
            train: TrainConfig::default(),
            n_min: g.n_min,
            n_max: g.n_max,
            p_burn: g.p_burn,
            p_expand: g.p_expand,
        }
    }
}

impl Settings {
    fn gen(&self) -> GenConfig {
        GenConfig {
            n_min: self.n_min,
            n_max: self.n_max,
            p_burn: self.p_burn,
            p_expand: self.p_expand,
            seed: self.train.seed,
        }
    }
}

pub fn run(args: &Args, config: Option<&Path>, argv: Vec<String>) -> Result<()> {
    let s: Settings = resolve(config, &args.flags)?;
    prepare_out(&args.out)?;
    let mut rec = Recorder::start("train", argv, config)?;
    let report = train_with(&s.train, &s.gen(), |e| {
        if let (
            true,
            TrainEvent::Validation {
                episode,
                mean_anc,
                best_anc,
            },
        ) = (args.progress, e)
        {
            eprintln!("episode {episode}: validation ANC {mean_anc:.6} (best {best_anc:.6})");
        }
    })?;

    let mut curve = Csv::new(&["episode", "mean_anc", "best_anc"]);
    curve.row(["0".into(), num(report.initial_anc), num(report.initial_anc)]);
    let mut best = report.initial_anc;
    for p in &report.curve {
        best = best.min(p.mean_anc);
        curve.row([p.episode.to_string(), num(p.mean_anc), num(best)]);
    }
    rec.output(&args.out.join("validation.csv"), &curve.into_string())?;
    rec.output(&args.out.join("checkpoint.json"), &checkpoint::to_json(&report.best)?)?;
    eprintln!(
        "best validation ANC {:.6} at episode {} (initial {:.6})",
        report.best_anc, report.best_episode, report.initial_anc
    );
    rec.finish(&args.out, &s, s.train.seed)?;
    Ok(())
}

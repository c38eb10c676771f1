use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{extract_experiences, run_episode, total_loss_and_grad, LossConfig, ReplayBuffer, Termination};
use crate::baselines::Strategy;
use crate::error::{Error, Result};
use crate::evalsim::{anc, dismantle};
use crate::hypergraph::Hypergraph;
use crate::hypersage::{Init, ParameterSet};
use crate::rng::{derive_seed, substream};
use crate::synthgen::{self, GenConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Bootstrap discount.
    pub gamma: f64,
    /// n-step window length.
    pub n_step: usize,
    pub epsilon: f64,
    /// Total episodes `N`.
    pub episodes: usize,
    /// Copy parameters into the target network every this many episodes.
    pub target_update: usize,
    /// Episodes that only collect experience.
    pub warmup: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Weight of the reconstruction loss.
    pub alpha: f64,
    pub validation_interval: usize,
    pub validation_size: usize,
    /// Replay capacity `M`.
    pub buffer_capacity: usize,
    pub embed_dim: usize,
    pub layers: usize,
    pub init: Init,
    pub termination: Termination,
    /// Fraction of the initial nodes removed per validation batch.
    pub batch_frac: f64,
    /// Rescale a gradient whose L2 norm exceeds this; `0` disables clipping.
    pub grad_clip: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            gamma: 0.99,
            n_step: 5,
            epsilon: 0.05,
            episodes: 100_000,
            target_update: 1000,
            warmup: 1000,
            batch_size: 64,
            learning_rate: 0.1,
            alpha: 1.0,
            validation_interval: 50,
            validation_size: 50,
            buffer_capacity: 50_000,
            embed_dim: 64,
            layers: 3,
            init: Init::default(),
            termination: Termination::FullyFragmented,
            batch_frac: 0.01,
            grad_clip: 1.0,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(0.0..=1.0).contains(&self.gamma) {
            return bad("gamma must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon must lie in [0, 1]");
        }
        if self.n_step == 0 || self.target_update == 0 || self.batch_size == 0 {
            return bad("n_step, target_update and batch_size must be positive");
        }
        if self.validation_interval == 0 || self.buffer_capacity == 0 {
            return bad("validation_interval and buffer_capacity must be positive");
        }
        if self.embed_dim == 0 {
            return bad("embed_dim must be positive");
        }
        if !(self.batch_frac > 0.0 && self.batch_frac <= 1.0) {
            return bad("batch_frac must lie in (0, 1]");
        }
        let nonneg = |x: f64| x >= 0.0;
        if !nonneg(self.learning_rate) || !nonneg(self.grad_clip) {
            return bad("learning_rate and grad_clip must be non-negative");
        }
        Ok(())
    }

    pub fn loss(&self) -> LossConfig {
        LossConfig {
            gamma: self.gamma,
            alpha: self.alpha,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        ParameterSet::dims_for(self.embed_dim, self.layers)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValidationPoint {
    pub episode: usize,
    pub mean_anc: f64,
}

#[derive(Clone, Debug)]
pub struct TrainReport {
    /// Parameters with the lowest validation ANC seen (the initial parameters
    /// count as the episode-0 candidate).
    pub best: ParameterSet,
    pub best_episode: usize,
    pub best_anc: f64,
    pub initial_anc: f64,
    pub final_params: ParameterSet,
    /// One point per validation round.
    pub curve: Vec<ValidationPoint>,
    pub updates: usize,
}

/// Progress notifications from [`train_with`].
#[derive(Clone, Debug)]
pub enum TrainEvent {
    Validation {
        episode: usize,
        mean_anc: f64,
        best_anc: f64,
    },
    Update {
        episode: usize,
        loss: f64,
    },
}

/// Synthetic validation instances for a training seed.
pub fn validation_set(cfg: &TrainConfig, gen: &GenConfig) -> Result<Vec<Hypergraph>> {
    synthgen::generate_batch(&gen.with_seed(derive_seed(cfg.seed, "validation")), cfg.validation_size)
}

/// Mean ANC of the greedy agent over `graphs`.
pub fn mean_agent_anc(params: &ParameterSet, graphs: &[Hypergraph], batch_frac: f64) -> Result<f64> {
    let strategy = Strategy::Agent(std::sync::Arc::new(params.clone()));
    let ancs: Vec<Result<f64>> = graphs
        .par_iter()
        .map(|g| anc(&dismantle(g, &strategy, batch_frac, None)?))
        .collect();
    let mut sum = 0.0;
    for a in ancs {
        sum += a?;
    }
    Ok(sum / graphs.len().max(1) as f64)
}

/// The parameters training starts from.
pub fn initial_params(cfg: &TrainConfig) -> Result<ParameterSet> {
    ParameterSet::random_with(&cfg.dims(), cfg.init, &mut substream(cfg.seed, "init", 0))
}

pub fn train(cfg: &TrainConfig, gen: &GenConfig) -> Result<TrainReport> {
    train_with(cfg, gen, |_| {})
}

/// Generate, dismantle epsilon-greedily, store n-step experiences, then take
/// one SGD step per episode after warmup. All randomness derives from
/// `cfg.seed`; `gen.seed` is ignored.
pub fn train_with(cfg: &TrainConfig, gen: &GenConfig, mut observe: impl FnMut(&TrainEvent)) -> Result<TrainReport> {
    cfg.validate()?;
    gen.validate()?;
    let train_gen = gen.with_seed(derive_seed(cfg.seed, "train"));
    let validation = validation_set(cfg, gen)?;
    let mut explore = substream(cfg.seed, "explore", 0);
    let mut replay_rng = substream(cfg.seed, "replay", 0);

    let mut params = initial_params(cfg)?;
    let mut target = params.clone();
    let mut buffer = ReplayBuffer::new(cfg.buffer_capacity);

    let initial_anc = if validation.is_empty() {
        f64::INFINITY
    } else {
        mean_agent_anc(&params, &validation, cfg.batch_frac)?
    };
    let mut best = params.clone();
    let mut best_anc = initial_anc;
    let mut best_episode = 0;
    let mut curve = Vec::new();
    let mut updates = 0;

    for episode in 1..=cfg.episodes {
        let g = synthgen::generate_indexed(&train_gen, episode as u64)?;
        let ep = run_episode(&g, &params, cfg.epsilon, cfg.termination, &mut explore)?;
        buffer.extend(extract_experiences(&ep, cfg.n_step));

        if episode > cfg.warmup {
            if buffer.is_empty() {
                return Err(Error::InsufficientExperience(0));
            }
            let batch = buffer.sample(cfg.batch_size, &mut replay_rng);
            let (loss, mut grad) = total_loss_and_grad(&batch, &params, &target, cfg.loss())?;
            if cfg.grad_clip > 0.0 {
                let norm = grad.l2_norm();
                if norm > cfg.grad_clip {
                    grad.scale(cfg.grad_clip / norm);
                }
            }
            params.axpy(-cfg.learning_rate, &grad);
            updates += 1;
            observe(&TrainEvent::Update { episode, loss });
        }
        if episode % cfg.target_update == 0 {
            target = params.clone();
        }
        if episode % cfg.validation_interval == 0 && !validation.is_empty() {
            let mean_anc = mean_agent_anc(&params, &validation, cfg.batch_frac)?;
            if mean_anc < best_anc {
                best_anc = mean_anc;
                best = params.clone();
                best_episode = episode;
            }
            curve.push(ValidationPoint { episode, mean_anc });
            observe(&TrainEvent::Validation {
                episode,
                mean_anc,
                best_anc,
            });
        }
    }

    Ok(TrainReport {
        best,
        best_episode,
        best_anc,
        initial_anc,
        final_params: params,
        curve,
        updates,
    })
}

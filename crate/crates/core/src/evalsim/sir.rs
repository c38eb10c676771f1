use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dismantle::{batch_size, dismantle};
use crate::baselines::Strategy;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId, SimpleGraph};
use crate::rng::substream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SirConfig {
    /// Per-contact per-step infection probability.
    pub beta: f64,
    /// Per-step recovery probability.
    pub mu: f64,
    pub repetitions: usize,
    /// Immunized fractions, ascending.
    pub immune_ratios: Vec<f64>,
    /// Batch fraction used to rank nodes for immunization.
    pub batch_frac: f64,
    pub seed: u64,
}

impl Default for SirConfig {
    fn default() -> Self {
        Self {
            beta: 0.1,
            mu: 0.1,
            repetitions: 100,
            immune_ratios: vec![0.0, 0.05, 0.10, 0.15, 0.20],
            batch_frac: 0.01,
            seed: 0,
        }
    }
}

impl SirConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(0.0..=1.0).contains(&self.beta) {
            return bad("beta must lie in [0, 1]");
        }
        // With mu = 0 an outbreak never ends.
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return bad("mu must lie in (0, 1]");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be positive");
        }
        if self.immune_ratios.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return bad("immune ratios must lie in [0, 1]");
        }
        if self.immune_ratios.windows(2).any(|w| w[0] > w[1]) {
            return bad("immune ratios must be sorted ascending");
        }
        if !(self.batch_frac > 0.0 && self.batch_frac <= 1.0) {
            return bad("batch_frac must lie in (0, 1]");
        }
        Ok(())
    }
}

/// Final infection rates of every repetition and their summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SirOutcome {
    pub mean: f64,
    /// Standard error of the mean.
    pub std_err: f64,
    pub rates: Vec<f64>,
}

impl SirOutcome {
    fn from_rates(rates: Vec<f64>) -> Self {
        let n = rates.len() as f64;
        let mean = rates.iter().sum::<f64>() / n;
        let std_err = if rates.len() > 1 {
            let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Self { mean, std_err, rates }
    }
}

/// Members of the earliest contact group: the live hyperedge with the smallest
/// id. Loaders order contact groups by timestamp.
pub fn seed_group(g: &Hypergraph) -> Vec<NodeId> {
    g.edges().next().map(|(_, m)| m.to_vec()).unwrap_or_default()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SirState {
    Susceptible,
    Infected,
    Recovered,
}

/// One discrete-time SIR run. Returns the per-node final states, with immune
/// nodes left susceptible.
///
/// Each step every node infected at the start of the step tries every
/// susceptible neighbor once with probability `beta`, then recovers with
/// probability `mu`. Nodes infected during the step start transmitting on the
/// next one.
pub fn sir_run(
    sg: &SimpleGraph,
    seeds: &[NodeId],
    immune: &[bool],
    beta: f64,
    mu: f64,
    rng: &mut impl rand::Rng,
) -> Vec<SirState> {
    let mut state = vec![SirState::Susceptible; sg.capacity()];
    let mut infected = Vec::new();
    for &s in seeds {
        if sg.contains_node(s) && !immune[s] && state[s] == SirState::Susceptible {
            state[s] = SirState::Infected;
            infected.push(s);
        }
    }
    while !infected.is_empty() {
        let mut fresh = Vec::new();
        for &v in &infected {
            for &u in sg.neighbors(v) {
                if state[u] == SirState::Susceptible && !immune[u] && rng.gen_bool(beta) {
                    state[u] = SirState::Infected;
                    fresh.push(u);
                }
            }
        }
        let mut still = Vec::with_capacity(infected.len() + fresh.len());
        for &v in &infected {
            if rng.gen_bool(mu) {
                state[v] = SirState::Recovered;
            } else {
                still.push(v);
            }
        }
        still.extend(fresh);
        still.sort_unstable();
        infected = still;
    }
    state
}

/// Mean final infection rate (ever-infected count over `|V|`) across
/// `cfg.repetitions` runs seeded by the earliest contact group. Repetition `r`
/// draws from its own substream, so different immune sets are compared under
/// common random numbers.
pub fn sir_simulate(g: &Hypergraph, immune: &[NodeId], cfg: &SirConfig) -> Result<SirOutcome> {
    cfg.validate()?;
    if g.is_empty() {
        return Err(Error::EmptyHypernetwork);
    }
    let mut mask = vec![false; g.capacity()];
    for &v in immune {
        if !g.contains_node(v) {
            return Err(Error::NodeNotFound(v));
        }
        mask[v] = true;
    }
    let sg = g.two_section();
    let seeds = seed_group(g);
    let n = g.node_count() as f64;
    let rates: Vec<f64> = (0..cfg.repetitions)
        .into_par_iter()
        .map(|r| {
            let mut rng = substream(cfg.seed, "sir", r as u64);
            let states = sir_run(&sg, &seeds, &mask, cfg.beta, cfg.mu, &mut rng);
            let ever = states.iter().filter(|&&s| s != SirState::Susceptible).count();
            ever as f64 / n
        })
        .collect();
    Ok(SirOutcome::from_rates(rates))
}

/// `⌈ratio · n⌉` with a guard against floating-point overshoot.
pub fn immune_count(ratio: f64, n: usize) -> usize {
    ((ratio * n as f64 - 1e-9).ceil().max(0.0) as usize).min(n)
}

/// The first `k` nodes of the strategy's dismantling order.
pub fn immunization_set(g: &Hypergraph, strategy: &Strategy, k: usize, batch_frac: f64) -> Result<Vec<NodeId>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let batches = k.div_ceil(batch_size(batch_frac, g.node_count()));
    let trace = dismantle(g, strategy, batch_frac, Some(batches))?;
    Ok(trace.removed[..k].to_vec())
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentRow {
    pub strategy: String,
    pub outcomes: Vec<SirOutcome>,
}

/// Final infection rate per strategy (rows) and immune ratio (columns).
#[derive(Clone, Debug, Serialize)]
pub struct ContainmentTable {
    pub ratios: Vec<f64>,
    pub rows: Vec<ContainmentRow>,
}

pub fn containment_table(g: &Hypergraph, strategies: &[Strategy], cfg: &SirConfig) -> Result<ContainmentTable> {
    cfg.validate()?;
    let n = g.node_count();
    let mut rows = Vec::with_capacity(strategies.len());
    for s in strategies {
        let k_max = cfg.immune_ratios.iter().map(|&r| immune_count(r, n)).max().unwrap_or(0);
        let order = immunization_set(g, s, k_max, cfg.batch_frac)?;
        let outcomes = cfg
            .immune_ratios
            .iter()
            .map(|&r| sir_simulate(g, &order[..immune_count(r, n)], cfg))
            .collect::<Result<Vec<_>>>()?;
        rows.push(ContainmentRow {
            strategy: s.name().to_string(),
            outcomes,
        });
    }
    Ok(ContainmentTable {
        ratios: cfg.immune_ratios.clone(),
        rows,
    })
}

use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::hypersage::{Forward, ParameterSet};
use crate::rng::Rng;

/// When a training episode stops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Stop as soon as the residual is no longer a single component.
    FirstDisconnect,
    /// Stop once no hyperedge with two or more members remains.
    #[default]
    FullyFragmented,
}

impl Termination {
    pub fn is_done(self, g: &Hypergraph) -> bool {
        match self {
            Termination::FullyFragmented => g.is_fragmented(),
            Termination::FirstDisconnect => g.is_fragmented() || g.components().count() != 1,
        }
    }
}

impl std::str::FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-disconnect" => Ok(Self::FirstDisconnect),
            "fully-fragmented" => Ok(Self::FullyFragmented),
            other => Err(Error::InvalidConfig(format!("unknown termination {other:?}"))),
        }
    }
}

/// Punishment for the residual hypernetwork: minus its connectivity under the
/// episode's fixed denominator.
pub fn reward(residual: &Hypergraph, original_n: usize) -> f64 {
    debug_assert!(original_n > 0);
    -(residual.gcc_size() as f64) / original_n as f64
}

/// Epsilon-greedy action: a uniform remaining node with probability
/// `epsilon`, otherwise the highest Q value (ties to the smallest id).
pub fn select_action(g: &Hypergraph, params: &ParameterSet, epsilon: f64, rng: &mut Rng) -> Result<NodeId> {
    if g.is_empty() {
        return Err(Error::NoActions);
    }
    if rng.gen_bool(epsilon) {
        let k = rng.gen_range(0..g.node_count());
        return Ok(g.nodes().nth(k).expect("k < node_count"));
    }
    let fwd = Forward::new(g, params)?;
    Ok(fwd.best_action().expect("non-empty").0)
}

/// Decision sequence `s_0, a_0, r_0, …, s_{T-1}, a_{T-1}, r_{T-1}, s_T`.
#[derive(Clone, Debug)]
pub struct Episode {
    /// `T + 1` residual snapshots.
    pub states: Vec<Arc<Hypergraph>>,
    pub actions: Vec<NodeId>,
    /// `r_t` is measured on the residual after action `t`.
    pub rewards: Vec<f64>,
    pub original_n: usize,
}

impl Episode {
    /// Number of decisions `T`.
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

/// Dismantles `g` with the epsilon-greedy policy until `termination` holds.
pub fn run_episode(
    g: &Hypergraph,
    params: &ParameterSet,
    epsilon: f64,
    termination: Termination,
    rng: &mut Rng,
) -> Result<Episode> {
    let original_n = g.node_count();
    let mut states = vec![Arc::new(g.clone())];
    let mut actions = Vec::new();
    let mut rewards = Vec::new();
    let mut current = g.clone();
    while !current.is_empty() && !termination.is_done(&current) {
        let a = select_action(&current, params, epsilon, rng)?;
        current.remove_node_mut(a)?;
        actions.push(a);
        rewards.push(reward(&current, original_n));
        states.push(Arc::new(current.clone()));
    }
    Ok(Episode {
        states,
        actions,
        rewards,
        original_n,
    })
}

/// `(s_t, a_t, r_{t,t+n}, s_{t+n})` with residuals stored as snapshots, so
/// embeddings are recomputed with the current parameters at update time.
#[derive(Clone, Debug)]
pub struct Experience {
    pub state: Arc<Hypergraph>,
    pub action: NodeId,
    /// Accumulated reward over the window.
    pub reward: f64,
    pub next: Arc<Hypergraph>,
    /// The window reached the end of the episode; no bootstrap.
    pub terminal: bool,
}

/// One experience per decision. The reward window `r_t + … + r_{t+n}` is
/// inclusive, undiscounted and truncated at `T-1`; the bootstrap state is
/// `s_{min(t+n, T)}`.
pub fn extract_experiences(ep: &Episode, n: usize) -> Vec<Experience> {
    let t_max = ep.len();
    (0..t_max)
        .map(|t| {
            let last = (t + n).min(t_max - 1);
            let next = (t + n).min(t_max);
            Experience {
                state: ep.states[t].clone(),
                action: ep.actions[t],
                reward: ep.rewards[t..=last].iter().sum(),
                next: ep.states[next].clone(),
                terminal: next == t_max,
            }
        })
        .collect()
}

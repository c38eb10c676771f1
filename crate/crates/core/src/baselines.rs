//! Greedy dismantling orders.
//!
//! HD, HDA and CI score nodes on the 2-section graph; HHD and HHDA use
//! hyper-degree on the hypernetwork itself. The adaptive variants re-score the
//! residual before every batch. Ties always go to the smallest node id.
//!
//! Removing a node never changes another node's plain hyper-degree (shrunk
//! hyperedges survive), so HHDA re-scores with the number of incident
//! hyperedges that still join at least two residual nodes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId, SimpleGraph};
use crate::hypersage::{Forward, ParameterSet};
use crate::rng::substream;

pub const DEFAULT_CI_RADIUS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Hd,
    Hda,
    Hhd,
    Hhda,
    Ci,
    Agent,
    Random,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 7] = [
        StrategyKind::Hd,
        StrategyKind::Hda,
        StrategyKind::Ci,
        StrategyKind::Hhd,
        StrategyKind::Hhda,
        StrategyKind::Random,
        StrategyKind::Agent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Hd => "HD",
            StrategyKind::Hda => "HDA",
            StrategyKind::Hhd => "HHD",
            StrategyKind::Hhda => "HHDA",
            StrategyKind::Ci => "CI",
            StrategyKind::Agent => "AGENT",
            StrategyKind::Random => "RANDOM",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown strategy {s:?}")))
    }
}

/// A dismantling strategy together with what it needs to run.
#[derive(Clone, Debug)]
pub enum Strategy {
    Hd,
    Hda,
    Hhd,
    Hhda,
    Ci { radius: usize },
    Random { seed: u64 },
    Agent(Arc<ParameterSet>),
}

impl Strategy {
    pub fn kind(&self) -> StrategyKind {
        match self {
            Strategy::Hd => StrategyKind::Hd,
            Strategy::Hda => StrategyKind::Hda,
            Strategy::Hhd => StrategyKind::Hhd,
            Strategy::Hhda => StrategyKind::Hhda,
            Strategy::Ci { .. } => StrategyKind::Ci,
            Strategy::Random { .. } => StrategyKind::Random,
            Strategy::Agent(_) => StrategyKind::Agent,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Adaptive strategies re-score the residual between batches; the others
    /// fix a full order up front.
    pub fn is_adaptive(&self) -> bool {
        matches!(
            self,
            Strategy::Hda | Strategy::Hhda | Strategy::Ci { .. } | Strategy::Agent(_)
        )
    }

    /// Builds a strategy from its kind. `Agent` requires parameters.
    pub fn from_kind(kind: StrategyKind, agent: Option<Arc<ParameterSet>>, seed: u64) -> Result<Self> {
        Ok(match kind {
            StrategyKind::Hd => Strategy::Hd,
            StrategyKind::Hda => Strategy::Hda,
            StrategyKind::Hhd => Strategy::Hhd,
            StrategyKind::Hhda => Strategy::Hhda,
            StrategyKind::Ci => Strategy::Ci {
                radius: DEFAULT_CI_RADIUS,
            },
            StrategyKind::Random => Strategy::Random { seed },
            StrategyKind::Agent => Strategy::Agent(
                agent.ok_or_else(|| Error::InvalidConfig("the AGENT strategy needs a checkpoint".into()))?,
            ),
        })
    }
}

/// Node ids sorted by descending score, ties by ascending id.
pub fn rank(scores: &[(NodeId, f64)]) -> Vec<NodeId> {
    let mut s = scores.to_vec();
    s.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0)));
    s.into_iter().map(|(v, _)| v).collect()
}

pub fn hyper_degree_scores(g: &Hypergraph) -> Vec<(NodeId, f64)> {
    g.nodes().map(|v| (v, g.incident(v).len() as f64)).collect()
}

/// Incident hyperedges with two or more members.
pub fn residual_hyper_degree_scores(g: &Hypergraph) -> Vec<(NodeId, f64)> {
    g.nodes()
        .map(|v| {
            let live = g.incident(v).iter().filter(|&&e| g.members(e).len() >= 2).count();
            (v, live as f64)
        })
        .collect()
}

pub fn two_section_degree_scores(sg: &SimpleGraph) -> Vec<(NodeId, f64)> {
    sg.nodes().map(|v| (v, sg.degree(v) as f64)).collect()
}

/// `CI_ℓ(v) = (k_v − 1) · Σ_{u at distance exactly ℓ} (k_u − 1)`.
pub fn ci_scores(sg: &SimpleGraph, radius: usize) -> Vec<(NodeId, f64)> {
    sg.nodes()
        .map(|v| {
            let kv = sg.degree(v).saturating_sub(1) as u64;
            let ring: u64 = sg
                .sphere(v, radius)
                .into_iter()
                .map(|u| sg.degree(u).saturating_sub(1) as u64)
                .sum();
            (v, (kv * ring) as f64)
        })
        .collect()
}

/// Full removal order computed once on the initial structure, for the static
/// strategies (HD, HHD, RANDOM).
pub fn static_order(g: &Hypergraph, strategy: &Strategy) -> Result<Vec<NodeId>> {
    match strategy {
        Strategy::Hd => Ok(rank(&two_section_degree_scores(&g.two_section()))),
        Strategy::Hhd => Ok(rank(&hyper_degree_scores(g))),
        Strategy::Random { seed } => {
            let mut order: Vec<NodeId> = g.nodes().collect();
            order.shuffle(&mut substream(*seed, "random-strategy", 0));
            Ok(order)
        }
        other => Err(Error::InvalidConfig(format!("{} is adaptive", other.name()))),
    }
}

/// Scores of every remaining node for an adaptive strategy.
pub fn adaptive_scores(g: &Hypergraph, strategy: &Strategy) -> Result<Vec<(NodeId, f64)>> {
    match strategy {
        Strategy::Hda => Ok(two_section_degree_scores(&g.two_section())),
        Strategy::Hhda => Ok(residual_hyper_degree_scores(g)),
        Strategy::Ci { radius } => Ok(ci_scores(&g.two_section(), *radius)),
        Strategy::Agent(params) => {
            let fwd = Forward::new(g, params)?;
            Ok(fwd.node_ids().iter().copied().zip(fwd.q.iter().copied()).collect())
        }
        other => Err(Error::InvalidConfig(format!("{} is not adaptive", other.name()))),
    }
}

/// The adaptive strategy's next pick on the residual.
pub fn adaptive_next(g: &Hypergraph, strategy: &Strategy) -> Result<NodeId> {
    if g.is_empty() {
        return Err(Error::NoActions);
    }
    rank(&adaptive_scores(g, strategy)?)
        .first()
        .copied()
        .ok_or(Error::NoActions)
}

//! Forest-fire style synthetic hypernetworks.
//!
//! Growth starts from node 0. Each new node picks a uniform ambassador among
//! the existing nodes and lights a fire there: every burned node burns each of
//! its unburned hypergraph neighbors independently with probability
//! `p_burn`, until the fire dies out or reaches [`BURN_CAP`] nodes. The new
//! node then forms one hyperedge with everything that burned. With
//! probability `p_expand` a second fire from a fresh ambassador adds one more
//! hyperedge for the same node.
//!
//! Instances come out connected with group-wise hyperedges and heavy-tailed
//! degrees; no bit-level agreement with other generators is attempted.

use std::collections::VecDeque;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::rng::{substream, Rng};

/// Upper bound on nodes burned by one fire.
pub const BURN_CAP: usize = 15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub p_burn: f64,
    pub p_expand: f64,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            n_min: 30,
            n_max: 50,
            p_burn: 0.1,
            p_expand: 0.1,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= n_min <= n_max, got {}..{}",
                self.n_min, self.n_max
            )));
        }
        for (name, p) in [("p_burn", self.p_burn), ("p_expand", self.p_expand)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// Instance 0 of the configured seed.
pub fn generate(cfg: &GenConfig) -> Result<Hypergraph> {
    generate_indexed(cfg, 0)
}

/// Instance `index` of the configured seed; each index has its own substream.
pub fn generate_indexed(cfg: &GenConfig, index: u64) -> Result<Hypergraph> {
    cfg.validate()?;
    let mut rng = substream(cfg.seed, "synthgen", index);
    grow(cfg, &mut rng)
}

/// Instances `0..k`; a longer batch extends a shorter one.
pub fn generate_batch(cfg: &GenConfig, k: usize) -> Result<Vec<Hypergraph>> {
    (0..k as u64).map(|i| generate_indexed(cfg, i)).collect()
}

fn grow(cfg: &GenConfig, rng: &mut Rng) -> Result<Hypergraph> {
    let n = rng.gen_range(cfg.n_min..=cfg.n_max);
    if n == 1 {
        return Hypergraph::new(1, vec![vec![0]]);
    }
    let mut edges: Vec<Vec<NodeId>> = Vec::new();
    let mut neighbors: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for v in 1..n {
        let mut fires = 1;
        if rng.gen_bool(cfg.p_expand) {
            fires += 1;
        }
        for _ in 0..fires {
            let ambassador = rng.gen_range(0..v);
            let mut members = burn(ambassador, &neighbors, cfg.p_burn, rng);
            members.push(v);
            members.sort_unstable();
            for &a in &members {
                for &b in &members {
                    if a != b && !neighbors[a].contains(&b) {
                        neighbors[a].push(b);
                    }
                }
            }
            edges.push(members);
        }
    }
    Hypergraph::new(n, edges)
}

fn burn(start: NodeId, neighbors: &[Vec<NodeId>], p: f64, rng: &mut Rng) -> Vec<NodeId> {
    let mut burned = vec![start];
    let mut queue = VecDeque::from([start]);
    'fire: while let Some(u) = queue.pop_front() {
        for &w in &neighbors[u] {
            if burned.contains(&w) {
                continue;
            }
            if rng.gen_bool(p) {
                burned.push(w);
                if burned.len() == BURN_CAP {
                    break 'fire;
                }
                queue.push_back(w);
            }
        }
    }
    burned
}

use serde::Serialize;

use crate::baselines::{adaptive_scores, rank, static_order, Strategy};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId, ReverseConnectivity};

/// Outcome of a batch dismantling run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DismantleTrace {
    pub strategy: String,
    pub batch_frac: f64,
    /// Nodes in removal order.
    pub removed: Vec<NodeId>,
    /// Nodes removed by each batch.
    pub batch_sizes: Vec<usize>,
    /// GCC node count after each batch.
    pub gcc_sizes: Vec<usize>,
    /// GCC node count before any removal.
    pub initial_gcc: usize,
    /// Connectivity after each batch divided by the initial connectivity.
    pub connectivity: Vec<f64>,
}

impl DismantleTrace {
    pub fn len(&self) -> usize {
        self.connectivity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connectivity.is_empty()
    }

    /// Removed nodes grouped by batch.
    pub fn batches(&self) -> Vec<&[NodeId]> {
        let mut at = 0;
        self.batch_sizes
            .iter()
            .map(|&b| {
                let s = &self.removed[at..at + b];
                at += b;
                s
            })
            .collect()
    }
}

/// Nodes per batch: `⌈frac · n0⌉`, at least one.
pub fn batch_size(frac: f64, n0: usize) -> usize {
    // Guard against 0.05 · 200 landing a hair above an integer.
    ((frac * n0 as f64 - 1e-9).ceil() as usize).max(1)
}

/// Removes `⌈batch_frac · |V_0|⌉` nodes per batch until every node is gone (or
/// `budget` batches have run), recording normalised connectivity after each.
///
/// Adaptive strategies re-score between batches, not within one. Once the
/// residual has no hyperedge of size two or more its connectivity can no
/// longer change, so adaptive strategies then take the remaining nodes in
/// ascending id order instead of re-scoring.
pub fn dismantle(
    g: &Hypergraph,
    strategy: &Strategy,
    batch_frac: f64,
    budget: Option<usize>,
) -> Result<DismantleTrace> {
    if !(batch_frac > 0.0 && batch_frac <= 1.0) {
        return Err(Error::InvalidConfig(format!("batch_frac {batch_frac} outside (0, 1]")));
    }
    let n0 = g.node_count();
    let batch = batch_size(batch_frac, n0);
    let max_batches = budget.unwrap_or(usize::MAX);

    let mut removed = Vec::with_capacity(n0);
    let mut batch_sizes = Vec::new();
    if strategy.is_adaptive() {
        let mut residual = g.clone();
        while !residual.is_empty() && batch_sizes.len() < max_batches {
            let k = batch.min(residual.node_count());
            let pick: Vec<NodeId> = if residual.is_fragmented() {
                residual.nodes().take(k).collect()
            } else {
                rank(&adaptive_scores(&residual, strategy)?)
                    .into_iter()
                    .take(k)
                    .collect()
            };
            for &v in &pick {
                residual.remove_node_mut(v)?;
            }
            removed.extend_from_slice(&pick);
            batch_sizes.push(k);
        }
    } else {
        let order = static_order(g, strategy)?;
        for chunk in order.chunks(batch).take(max_batches) {
            removed.extend_from_slice(chunk);
            batch_sizes.push(chunk.len());
        }
    }

    let prefix = ReverseConnectivity::gcc_sizes(g, &removed);
    let initial_gcc = prefix[0];
    let mut gcc_sizes = Vec::with_capacity(batch_sizes.len());
    let mut at = 0;
    for &b in &batch_sizes {
        at += b;
        gcc_sizes.push(prefix[at]);
    }
    let connectivity = normalise(&gcc_sizes, initial_gcc);
    Ok(DismantleTrace {
        strategy: strategy.name().to_string(),
        batch_frac,
        removed,
        batch_sizes,
        gcc_sizes,
        initial_gcc,
        connectivity,
    })
}

fn normalise(gcc_sizes: &[usize], initial: usize) -> Vec<f64> {
    gcc_sizes
        .iter()
        .map(|&s| if initial == 0 { 0.0 } else { s as f64 / initial as f64 })
        .collect()
}

/// Normalised connectivity after each batch of `trace`, recomputed by full
/// component labeling of every residual. Independent of the union-find path
/// used by [`dismantle`].
pub fn naive_connectivity(g: &Hypergraph, trace: &DismantleTrace) -> Result<Vec<f64>> {
    let initial = g.gcc_size();
    let mut residual = g.clone();
    let mut sizes = Vec::with_capacity(trace.len());
    for batch in trace.batches() {
        for &v in batch {
            residual.remove_node_mut(v)?;
        }
        sizes.push(residual.gcc_size());
    }
    Ok(normalise(&sizes, initial))
}

/// Accumulated normalised connectivity: the mean of the per-batch values.
pub fn anc(trace: &DismantleTrace) -> Result<f64> {
    anc_of(&trace.connectivity)
}

pub fn anc_of(connectivity: &[f64]) -> Result<f64> {
    if connectivity.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(connectivity.iter().sum::<f64>() / connectivity.len() as f64)
}

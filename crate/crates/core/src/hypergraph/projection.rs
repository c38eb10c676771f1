use std::collections::VecDeque;

use super::{Hypergraph, NodeId};

/// Simple undirected graph over a fixed id space: no self-loops, no
/// multi-edges. Ids that are not present have empty adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    present: Vec<bool>,
    adj: Vec<Vec<NodeId>>,
}

impl SimpleGraph {
    pub(super) fn from_hypergraph(g: &Hypergraph) -> Self {
        let n = g.capacity();
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for v in g.nodes() {
            let nbrs = &mut adj[v];
            for &e in g.incident(v) {
                nbrs.extend(g.members(e).iter().copied().filter(|&u| u != v));
            }
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        Self {
            present: (0..n).map(|v| g.contains_node(v)).collect(),
            adj,
        }
    }

    pub fn capacity(&self) -> usize {
        self.adj.len()
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.present.iter().enumerate().filter_map(|(v, &p)| p.then_some(v))
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    /// Undirected edges as `(u, v)` with `u < v`, sorted.
    pub fn edge_list(&self) -> Vec<(NodeId, NodeId)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    /// Nodes at shortest-path distance exactly `radius` from `v`.
    pub fn sphere(&self, v: NodeId, radius: usize) -> Vec<NodeId> {
        let mut dist = vec![usize::MAX; self.capacity()];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        let mut out = Vec::new();
        while let Some(u) = queue.pop_front() {
            if dist[u] == radius {
                out.push(u);
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

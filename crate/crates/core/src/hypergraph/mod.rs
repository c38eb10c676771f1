//! Residual hypernetworks.
//!
//! Node ids are dense integers `0..capacity` fixed at construction. Removing a
//! node retires its id for the rest of the episode; hyperedges keep their ids
//! and are retired once their last member is removed.

mod components;
mod projection;

pub use components::{ComponentLabeling, GccKey, ReverseConnectivity, UnionFind};
pub use projection::SimpleGraph;

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    alive: Vec<bool>,
    node_count: usize,
    /// Sorted member lists; an empty list marks a retired hyperedge.
    edges: Vec<Vec<NodeId>>,
    edge_count: usize,
    /// Transpose of `edges`, sorted.
    incidence: Vec<Vec<EdgeId>>,
    /// Number of live hyperedges with at least two members.
    multi_edges: usize,
}

impl Hypergraph {
    /// Builds a hypernetwork on nodes `0..node_count`.
    ///
    /// Members are deduplicated within each hyperedge. Every hyperedge must be
    /// non-empty and reference only ids below `node_count`.
    pub fn new(node_count: usize, edges: Vec<Vec<NodeId>>) -> Result<Self> {
        let mut incidence = vec![Vec::new(); node_count];
        let mut clean = Vec::with_capacity(edges.len());
        for (eid, mut members) in edges.into_iter().enumerate() {
            if members.is_empty() {
                return Err(Error::EmptyHyperedge(eid));
            }
            members.sort_unstable();
            members.dedup();
            for &v in &members {
                if v >= node_count {
                    return Err(Error::NodeNotFound(v));
                }
                incidence[v].push(eid);
            }
            clean.push(members);
        }
        let multi_edges = clean.iter().filter(|e| e.len() >= 2).count();
        Ok(Self {
            alive: vec![true; node_count],
            node_count,
            edge_count: clean.len(),
            edges: clean,
            incidence,
            multi_edges,
        })
    }

    /// Size of the node id space (the node count before any removal).
    pub fn capacity(&self) -> usize {
        self.alive.len()
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_count == 0
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    /// Remaining nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.alive.iter().enumerate().filter_map(|(v, &a)| a.then_some(v))
    }

    /// Live hyperedges in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &[NodeId])> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_empty())
            .map(|(e, m)| (e, m.as_slice()))
    }

    /// Members of hyperedge `e`; empty if retired or out of range.
    pub fn members(&self, e: EdgeId) -> &[NodeId] {
        self.edges.get(e).map_or(&[], Vec::as_slice)
    }

    /// Hyperedges containing `v`; empty for removed or unknown nodes.
    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        self.incidence.get(v).map_or(&[], Vec::as_slice)
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if self.contains_node(v) {
            Ok(())
        } else {
            Err(Error::NodeNotFound(v))
        }
    }

    /// Number of hyperedges containing `v`.
    pub fn hyper_degree(&self, v: NodeId) -> Result<usize> {
        self.check(v)?;
        Ok(self.incidence[v].len())
    }

    /// Row sum of `H H^T` minus the hyper-degree, i.e. `sum_{e ∋ v} (|e| - 1)`.
    ///
    /// Co-members are counted once per shared hyperedge.
    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.check(v)?;
        Ok(self.incidence[v].iter().map(|&e| self.edges[e].len() - 1).sum())
    }

    /// True once no hyperedge with two or more members remains.
    pub fn is_fragmented(&self) -> bool {
        self.multi_edges == 0
    }

    /// Hyperedges sharing at least one node with `e`, excluding `e` itself,
    /// ascending.
    pub fn edge_neighbors(&self, e: EdgeId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .members(e)
            .iter()
            .flat_map(|&v| self.incidence[v].iter().copied())
            .filter(|&f| f != e)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Returns a copy with `v` removed.
    pub fn remove_node(&self, v: NodeId) -> Result<Self> {
        let mut g = self.clone();
        g.remove_node_mut(v)?;
        Ok(g)
    }

    /// Removes `v` from the node set and from every hyperedge containing it.
    /// Hyperedges left empty are retired; singletons are kept.
    pub fn remove_node_mut(&mut self, v: NodeId) -> Result<()> {
        self.check(v)?;
        for e in std::mem::take(&mut self.incidence[v]) {
            let members = &mut self.edges[e];
            let before = members.len();
            if let Ok(pos) = members.binary_search(&v) {
                members.remove(pos);
            }
            if before == 2 {
                self.multi_edges -= 1;
            }
            if members.is_empty() {
                self.edge_count -= 1;
            }
        }
        self.alive[v] = false;
        self.node_count -= 1;
        Ok(())
    }

    /// Order-independent digest of the live topology.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut mix = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        };
        mix(self.capacity() as u64);
        for v in self.nodes() {
            mix(v as u64);
        }
        mix(u64::MAX);
        for (e, m) in self.edges() {
            mix(e as u64);
            for &v in m {
                mix(v as u64);
            }
            mix(u64::MAX - 1);
        }
        h
    }

    /// Live hyperedges as member lists, in ascending hyperedge id order.
    pub fn edge_lists(&self) -> Vec<Vec<NodeId>> {
        self.edges().map(|(_, m)| m.to_vec()).collect()
    }

    /// Restriction to `keep`, re-densified. Returns the new graph and the
    /// new-id → old-id map. Hyperedges keep their relative order.
    pub fn induced(&self, keep: &[NodeId]) -> Result<(Self, Vec<NodeId>)> {
        let mut map = keep.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut new_id = vec![usize::MAX; self.capacity()];
        for (i, &v) in map.iter().enumerate() {
            self.check(v)?;
            new_id[v] = i;
        }
        let edges = self
            .edges()
            .filter_map(|(_, m)| {
                let kept: Vec<NodeId> = m
                    .iter()
                    .filter(|&&v| new_id[v] != usize::MAX)
                    .map(|&v| new_id[v])
                    .collect();
                (!kept.is_empty()).then_some(kept)
            })
            .collect();
        Ok((Self::new(map.len(), edges)?, map))
    }

    /// Component labeling by union over shared hyperedges.
    pub fn components(&self) -> ComponentLabeling {
        ComponentLabeling::compute(self)
    }

    /// Representative (smallest node id) of the giant connected component:
    /// most hyperedges, then most nodes, then smallest contained node id.
    pub fn gcc(&self) -> Result<NodeId> {
        self.components().gcc().ok_or(Error::EmptyHypernetwork)
    }

    /// Node count of the giant connected component; 0 when empty.
    pub fn gcc_size(&self) -> usize {
        let labels = self.components();
        labels.gcc().map_or(0, |root| labels.node_count_of(root))
    }

    /// `|V_GCC| / original_n`, with the denominator fixed at the episode's
    /// initial node count.
    pub fn connectivity(&self, original_n: usize) -> Result<f64> {
        if original_n == 0 {
            return Err(Error::InvalidDenominator);
        }
        Ok(self.gcc_size() as f64 / original_n as f64)
    }

    /// Clique expansion over the id space; removed nodes have no neighbors.
    pub fn two_section(&self) -> SimpleGraph {
        SimpleGraph::from_hypergraph(self)
    }
}

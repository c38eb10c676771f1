use std::cmp::Ordering;

use super::{Hypergraph, NodeId};

/// Disjoint-set forest with union by size and path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`, returning the surviving root.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        a
    }
}

/// Ranking key for the giant component: more hyperedges wins, then more
/// nodes, then the smaller minimum node id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GccKey {
    pub edges: usize,
    pub nodes: usize,
    pub min_node: NodeId,
}

impl Ord for GccKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges
            .cmp(&other.edges)
            .then(self.nodes.cmp(&other.nodes))
            .then(other.min_node.cmp(&self.min_node))
    }
}

impl PartialOrd for GccKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Component id per node, named by the smallest node id in the component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    labels: Vec<Option<NodeId>>,
    node_counts: Vec<usize>,
    edge_counts: Vec<usize>,
}

impl ComponentLabeling {
    pub(super) fn compute(g: &Hypergraph) -> Self {
        let n = g.capacity();
        let mut uf = UnionFind::new(n);
        for (_, members) in g.edges() {
            for &v in &members[1..] {
                uf.union(members[0], v);
            }
        }
        let mut labels = vec![None; n];
        let mut min_of_root = vec![usize::MAX; n];
        for v in g.nodes() {
            let r = uf.find(v);
            if min_of_root[r] == usize::MAX {
                min_of_root[r] = v;
            }
            labels[v] = Some(min_of_root[r]);
        }
        let mut node_counts = vec![0; n];
        let mut edge_counts = vec![0; n];
        for v in g.nodes() {
            node_counts[labels[v].unwrap()] += 1;
        }
        for (_, members) in g.edges() {
            edge_counts[labels[members[0]].unwrap()] += 1;
        }
        Self {
            labels,
            node_counts,
            edge_counts,
        }
    }

    /// Component of `v`, or `None` if `v` is not a live node.
    pub fn label(&self, v: NodeId) -> Option<NodeId> {
        self.labels.get(v).copied().flatten()
    }

    pub fn node_count_of(&self, label: NodeId) -> usize {
        self.node_counts[label]
    }

    pub fn edge_count_of(&self, label: NodeId) -> usize {
        self.edge_counts[label]
    }

    /// Component labels in ascending order.
    pub fn labels(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(v, l)| (*l == Some(v)).then_some(v))
    }

    pub fn count(&self) -> usize {
        self.labels().count()
    }

    pub fn key(&self, label: NodeId) -> GccKey {
        GccKey {
            edges: self.edge_counts[label],
            nodes: self.node_counts[label],
            min_node: label,
        }
    }

    /// Label of the giant component, `None` for an empty hypernetwork.
    pub fn gcc(&self) -> Option<NodeId> {
        self.labels().max_by_key(|&l| self.key(l))
    }
}

/// Giant-component sizes along a removal sequence, computed by re-inserting
/// the removed nodes in reverse with a union-find.
pub struct ReverseConnectivity;

impl ReverseConnectivity {
    /// `out[k]` is the GCC node count after removing `order[..k]` from `g`,
    /// for `k` in `0..=order.len()`. Nodes of `g` missing from `order` stay
    /// present throughout. `order` must list distinct live nodes.
    pub fn gcc_sizes(g: &Hypergraph, order: &[NodeId]) -> Vec<usize> {
        let n = g.capacity();
        let mut state = Insertion {
            uf: UnionFind::new(n),
            present: vec![false; n],
            anchor: vec![None; g.edge_capacity()],
            edges: vec![0; n],
            nodes: vec![0; n],
            min: (0..n).collect(),
            best: None,
        };
        let mut in_order = vec![false; n];
        for &v in order {
            in_order[v] = true;
        }
        for v in g.nodes().filter(|&v| !in_order[v]) {
            state.insert(g, v);
        }
        let mut out = vec![0; order.len() + 1];
        out[order.len()] = state.best_size();
        for (k, &v) in order.iter().enumerate().rev() {
            state.insert(g, v);
            out[k] = state.best_size();
        }
        out
    }
}

struct Insertion {
    uf: UnionFind,
    present: Vec<bool>,
    /// First inserted member of each hyperedge.
    anchor: Vec<Option<NodeId>>,
    edges: Vec<usize>,
    nodes: Vec<usize>,
    min: Vec<NodeId>,
    best: Option<(GccKey, usize)>,
}

impl Insertion {
    fn key(&self, root: usize) -> GccKey {
        GccKey {
            edges: self.edges[root],
            nodes: self.nodes[root],
            min_node: self.min[root],
        }
    }

    fn insert(&mut self, g: &Hypergraph, v: NodeId) {
        self.present[v] = true;
        self.nodes[v] = 1;
        for &e in g.incident(v) {
            match self.anchor[e] {
                None => {
                    self.anchor[e] = Some(v);
                    let r = self.uf.find(v);
                    self.edges[r] += 1;
                }
                Some(a) => {
                    let (ra, rv) = (self.uf.find(a), self.uf.find(v));
                    if ra != rv {
                        let r = self.uf.union(ra, rv);
                        let other = if r == ra { rv } else { ra };
                        self.edges[r] += self.edges[other];
                        self.nodes[r] += self.nodes[other];
                        self.min[r] = self.min[r].min(self.min[other]);
                    }
                }
            }
        }
        // Only v's component changed, and components only grow, so the best
        // is either the previous best (if it is still a root) or v's.
        let root = self.uf.find(v);
        let key = self.key(root);
        let keep_prev = match self.best {
            Some((prev, r)) => self.uf.find(r) == r && r != root && prev > key,
            None => false,
        };
        if !keep_prev {
            self.best = Some((key, root));
        }
    }

    fn best_size(&self) -> usize {
        self.best.map_or(0, |(k, _)| k.nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_of_small_examples() {
        let g = Hypergraph::new(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        let c = g.components();
        assert_eq!(c.count(), 1);
        assert_eq!(c.node_count_of(0), 4);

        let g = Hypergraph::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let c = g.components();
        assert_eq!(c.count(), 2);
        assert_eq!(c.edge_count_of(0), 1);
        assert_eq!(c.edge_count_of(2), 1);
        assert_eq!(c.label(3), Some(2));
    }

    #[test]
    fn isolated_nodes_are_singletons() {
        let g = Hypergraph::new(3, vec![vec![0, 1]]).unwrap();
        let c = g.components();
        assert_eq!(c.label(2), Some(2));
        assert_eq!(c.edge_count_of(2), 0);
        assert_eq!(c.node_count_of(2), 1);
    }

    #[test]
    fn gcc_prefers_hyperedges_then_nodes_then_smallest_id() {
        let g = Hypergraph::new(5, vec![vec![0, 1], vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(g.gcc().unwrap(), 0);
        assert_eq!(g.gcc_size(), 3);

        let g = Hypergraph::new(4, vec![vec![2, 3], vec![0, 1]]).unwrap();
        assert_eq!(g.gcc().unwrap(), 0);

        // One hyperedge of three beats one hyperedge of two.
        let g = Hypergraph::new(5, vec![vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(g.gcc().unwrap(), 2);

        // Two stacked singletons beat a pair.
        let g = Hypergraph::new(3, vec![vec![0, 1], vec![2], vec![2]]).unwrap();
        assert_eq!(g.gcc().unwrap(), 2);
        assert_eq!(g.gcc_size(), 1);
    }

    #[test]
    fn reverse_insertion_matches_forward_removal() {
        let g = Hypergraph::new(7, vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![5, 6], vec![6]]).unwrap();
        let order = [3, 0, 6, 2, 5, 1, 4];
        let fast = ReverseConnectivity::gcc_sizes(&g, &order);
        let mut r = g.clone();
        let mut slow = vec![r.gcc_size()];
        for &v in &order {
            r.remove_node_mut(v).unwrap();
            slow.push(r.gcc_size());
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn partial_orders_keep_the_rest() {
        let g = Hypergraph::new(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert_eq!(ReverseConnectivity::gcc_sizes(&g, &[2]), vec![4, 2]);
    }
}

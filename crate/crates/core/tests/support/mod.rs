#![allow(dead_code)]

pub mod dense;
pub mod gradcheck;
pub mod naive;

use hyperdismantle::Hypergraph;
use rand::seq::SliceRandom;
use rand::Rng;

/// A random hypernetwork on `n` nodes with `m` hyperedges of size 1..=4.
/// Some nodes may be isolated.
pub fn random_hypergraph(rng: &mut impl Rng, n: usize, m: usize) -> Hypergraph {
    let ids: Vec<usize> = (0..n).collect();
    let mut edges: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let k = rng.gen_range(1..=4.min(n));
            ids.choose_multiple(rng, k).copied().collect()
        })
        .collect();
    // Every node needs a hyperedge to exist.
    for v in 0..n {
        if !edges.iter().any(|e| e.contains(&v)) {
            let j = rng.gen_range(0..edges.len());
            edges[j].push(v);
        }
    }
    Hypergraph::new(n, edges).unwrap()
}

/// A random hypernetwork, then a few random removals so ids are sparse.
pub fn random_residual(rng: &mut impl Rng, n_max: usize) -> Hypergraph {
    let n = rng.gen_range(2..=n_max);
    let m = rng.gen_range(1..=n + 2);
    let mut g = random_hypergraph(rng, n, m);
    let drops = rng.gen_range(0..=n / 3);
    for _ in 0..drops {
        if g.node_count() <= 1 {
            break;
        }
        let nodes: Vec<usize> = g.nodes().collect();
        g.remove_node_mut(*nodes.choose(rng).unwrap()).unwrap();
    }
    g
}

//! Brute-force references: quadratic component merging, all-pairs distances
//! and from-scratch greedy degree orders.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hyperdismantle::Hypergraph;

/// Components by repeatedly merging overlapping hyperedge groups until
/// nothing changes. Returns (node set, hyperedge count) per component.
pub fn components(g: &Hypergraph) -> Vec<(BTreeSet<usize>, usize)> {
    let mut groups: Vec<(BTreeSet<usize>, usize)> = g.nodes().map(|v| (BTreeSet::from([v]), 0)).collect();
    for (_, m) in g.edges() {
        groups.push((m.iter().copied().collect(), 1));
    }
    loop {
        let mut merged = false;
        'outer: for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                if !groups[i].0.is_disjoint(&groups[j].0) {
                    let (s, c) = groups.remove(j);
                    groups[i].0.extend(s);
                    groups[i].1 += c;
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            return groups;
        }
    }
}

/// Node count of the component with the most hyperedges, then most nodes,
/// then smallest member.
pub fn gcc_size(g: &Hypergraph) -> usize {
    components(g)
        .into_iter()
        .max_by(|a, b| {
            a.1.cmp(&b.1)
                .then(a.0.len().cmp(&b.0.len()))
                .then(b.0.first().cmp(&a.0.first()))
        })
        .map(|c| c.0.len())
        .unwrap_or(0)
}

/// Per-batch GCC fraction after removing `batches` in turn.
pub fn connectivity(g: &Hypergraph, batches: &[&[usize]]) -> Vec<f64> {
    let initial = gcc_size(g) as f64;
    let mut r = g.clone();
    batches
        .iter()
        .map(|b| {
            for &v in *b {
                r.remove_node_mut(v).unwrap();
            }
            gcc_size(&r) as f64 / initial
        })
        .collect()
}

/// Boolean adjacency of the 2-section over all `capacity` ids.
pub fn adjacency(g: &Hypergraph) -> Vec<Vec<bool>> {
    let n = g.capacity();
    let mut a = vec![vec![false; n]; n];
    for (_, m) in g.edges() {
        for &u in m {
            for &v in m {
                if u != v {
                    a[u][v] = true;
                }
            }
        }
    }
    a
}

/// Floyd-Warshall hop distances; `usize::MAX` when unreachable.
pub fn distances(a: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let inf = usize::MAX;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != inf && d[k][j] != inf && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Collective influence at `radius` for every live node.
pub fn ci(g: &Hypergraph, radius: usize) -> Vec<(usize, f64)> {
    let a = adjacency(g);
    let d = distances(&a);
    let k = |v: usize| a[v].iter().filter(|&&x| x).count();
    g.nodes()
        .map(|v| {
            let ring: usize = g
                .nodes()
                .filter(|&u| d[v][u] == radius)
                .map(|u| k(u).saturating_sub(1))
                .sum();
            (v, (k(v).saturating_sub(1) * ring) as f64)
        })
        .collect()
}

/// Adaptive degree order on a simple graph given as an edge set, one node
/// at a time, ties to the smallest id.
pub fn adaptive_degree_order(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let deg = |v: usize| {
            edges
                .iter()
                .filter(|&&(a, b)| alive[a] && alive[b] && (a == v || b == v))
                .count()
        };
        let best = (0..n)
            .filter(|&v| alive[v])
            .max_by(|&u, &v| deg(u).cmp(&deg(v)).then(v.cmp(&u)))
            .unwrap();
        alive[best] = false;
        order.push(best);
    }
    order
}

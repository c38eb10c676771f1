//! Dense-matrix reference model built from the incidence matrix with plain
//! nested vectors. Shares nothing with the library beyond the parameter
//! tensors it reads.

#![allow(dead_code)]

use hyperdismantle::hypersage::ParameterSet;
use hyperdismantle::Hypergraph;

pub type Mat = Vec<Vec<f64>>;

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0.0; c]; r]
}

pub fn from_nd(a: &ndarray::Array2<f64>) -> Mat {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (n, k) = (a.len(), b.len());
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(n, m);
    for i in 0..n {
        assert_eq!(a[i].len(), k);
        for j in 0..m {
            let mut s = 0.0;
            for t in 0..k {
                s += a[i][t] * b[t][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn hcat(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().chain(y).copied().collect())
        .collect()
}

pub fn relu(a: &Mat) -> Mat {
    a.iter().map(|r| r.iter().map(|&v| v.max(0.0)).collect()).collect()
}

/// Incidence matrix over the live nodes (rows, ascending id) and live
/// hyperedges (columns, ascending id).
pub fn incidence(g: &Hypergraph) -> Mat {
    let nodes: Vec<usize> = g.nodes().collect();
    let edges: Vec<Vec<usize>> = g.edge_lists();
    let mut h = zeros(nodes.len(), edges.len());
    for (j, members) in edges.iter().enumerate() {
        for v in members {
            let i = nodes.iter().position(|u| u == v).unwrap();
            h[i][j] = 1.0;
        }
    }
    h
}

/// Hyperedge adjacency: `(HᵀH)_{ij} > 0` off the diagonal.
pub fn edge_adjacency(h: &Mat) -> Mat {
    let hth = matmul(&transpose(h), h);
    let m = hth.len();
    let mut a = zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            if i != j && hth[i][j] > 0.0 {
                a[i][j] = 1.0;
            }
        }
    }
    a
}

pub struct DenseLayer {
    pub alpha: Mat,
    pub merged: Mat,
    pub y: Mat,
    pub x: Mat,
    pub xs: Vec<f64>,
}

pub struct DenseForward {
    pub layers: Vec<DenseLayer>,
    pub x: Mat,
    pub y: Mat,
    pub xs: Vec<f64>,
    pub q: Vec<f64>,
}

pub fn forward(g: &Hypergraph, p: &ParameterSet) -> DenseForward {
    let h = incidence(g);
    let (nv, ne) = (h.len(), h[0].len());
    let a = edge_adjacency(&h);
    let deg: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    // Symmetric normalisation D^-1/2 A D^-1/2.
    let mut norm = zeros(ne, ne);
    for i in 0..ne {
        for j in 0..ne {
            if a[i][j] > 0.0 {
                norm[i][j] = 1.0 / (deg[i] * deg[j]).sqrt();
            }
        }
    }
    let mut x = vec![vec![1.0]; nv];
    let mut xs = vec![1.0];
    let mut y = zeros(ne, 1);
    let mut layers = Vec::new();
    for lp in &p.layers {
        let w1: Vec<f64> = lp.attention.to_vec();
        let s: Vec<f64> = x.iter().map(|r| r.iter().zip(&w1).map(|(a, b)| a * b).sum()).collect();
        let mut alpha = zeros(nv, ne);
        for j in 0..ne {
            let z: f64 = (0..nv).map(|i| h[i][j] * s[i].exp()).sum();
            for i in 0..nv {
                alpha[i][j] = h[i][j] * s[i].exp() / z;
            }
        }
        let merged = matmul(&transpose(&alpha), &x);
        let neigh = matmul(&norm, &merged);
        let cat = hcat(
            &matmul(&neigh, &transpose(&from_nd(&lp.edge_neighbor))),
            &matmul(&merged, &transpose(&from_nd(&lp.edge_self))),
        );
        y = relu(&matmul(&cat, &from_nd(&lp.edge_combine)));
        let w5t = transpose(&from_nd(&lp.node_edges));
        let w6t = transpose(&from_nd(&lp.node_self));
        let w7 = from_nd(&lp.node_combine);
        let sum = matmul(&h, &y);
        let x_next = relu(&matmul(&hcat(&matmul(&sum, &w5t), &matmul(&x, &w6t)), &w7));
        let total = vec![(0..y[0].len())
            .map(|c| y.iter().map(|r| r[c]).sum())
            .collect::<Vec<f64>>()];
        let xs_next = relu(&matmul(
            &hcat(&matmul(&total, &w5t), &matmul(&vec![xs.clone()], &w6t)),
            &w7,
        ))
        .remove(0);
        x = x_next;
        xs = xs_next;
        layers.push(DenseLayer {
            alpha,
            merged,
            y: y.clone(),
            x: x.clone(),
            xs: xs.clone(),
        });
    }
    let w8 = p.q_out.to_vec();
    let w9 = p.q_action.to_vec();
    let q = x
        .iter()
        .map(|xa| {
            let c: f64 = xa.iter().zip(&w9).map(|(a, b)| a * b).sum();
            xs.iter().zip(&w8).map(|(s, w)| w * (s * c).max(0.0)).sum()
        })
        .collect();
    DenseForward { layers, x, y, xs, q }
}

pub fn max_abs_diff(a: &Mat, b: &ndarray::Array2<f64>) -> f64 {
    assert_eq!(a.len(), b.nrows());
    let mut m: f64 = 0.0;
    for (i, r) in a.iter().enumerate() {
        assert_eq!(r.len(), b.ncols());
        for (j, v) in r.iter().enumerate() {
            m = m.max((v - b[[i, j]]).abs());
        }
    }
    m
}

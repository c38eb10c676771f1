//! Reverse-mode adjoints of the embedding and Q head.
//!
//! The computation graph is fixed, so the chain rule is written out by hand
//! against the caches kept by the forward pass. ReLU's derivative at 0 is 0.

use ndarray::{Array1, Array2, ArrayView1, Axis};

use super::forward::{cols, Embedding, NodeAggregate, StateEmbedding};
use super::params::LayerParams;
use super::ParameterSet;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Loss gradients arriving at the outputs of one forward pass.
#[derive(Clone, Debug)]
pub struct Upstream {
    /// `|V| × d_L`, w.r.t. the final node embeddings.
    pub dx: Array2<f64>,
    /// Length `d_L`, w.r.t. the state embedding.
    pub dxs: Array1<f64>,
    /// `|E| × d_L`, w.r.t. the final hyperedge embeddings.
    pub dy: Array2<f64>,
}

impl Upstream {
    pub fn zeros(emb: &Embedding) -> Self {
        Self {
            dx: Array2::zeros(emb.x.raw_dim()),
            dxs: Array1::zeros(emb.x.ncols()),
            dy: Array2::zeros(emb.y.raw_dim()),
        }
    }
}

/// Adjoint of [`super::q_value`]: adds the W8/W9 gradients into `grads` and
/// the input gradients into `dxa` and `dxs`, for upstream derivative `dq`.
pub fn q_value_backward(
    x_a: ArrayView1<f64>,
    xs: ArrayView1<f64>,
    params: &ParameterSet,
    dq: f64,
    grads: &mut ParameterSet,
    mut dxa: ndarray::ArrayViewMut1<f64>,
    dxs: &mut Array1<f64>,
) {
    let c = x_a.dot(&params.q_action);
    let mut dc = 0.0;
    for i in 0..xs.len() {
        let h = xs[i] * c;
        if h > 0.0 {
            grads.q_out[i] += dq * h;
            let dh = dq * params.q_out[i];
            dxs[i] += dh * c;
            dc += dh * xs[i];
        }
    }
    grads.q_action.scaled_add(dc, &x_a);
    dxa.scaled_add(dc, &params.q_action);
}

/// Back-propagates `up` through the embedding and virtual node, adding the
/// parameter gradients into `grads`.
///
/// Fails with [`Error::StaleCache`] when `g` is not the hypernetwork the
/// caches were computed on.
pub fn backward(
    g: &Hypergraph,
    emb: &Embedding,
    state: &StateEmbedding,
    params: &ParameterSet,
    up: &Upstream,
    grads: &mut ParameterSet,
) -> Result<()> {
    if g.fingerprint() != emb.topo.fingerprint || state.layers.len() != emb.layers.len() {
        return Err(Error::StaleCache);
    }
    let topo = &emb.topo;
    let mut dx = up.dx.clone();
    let mut dxs = up.dxs.clone().insert_axis(Axis(0));
    for l in (0..emb.layers.len()).rev() {
        let cache = &emb.layers[l];
        let lp = &params.layers[l];
        let gl = &mut grads.layers[l];

        let (d_edge_sum, mut dx_in) = combine_node_backward(&cache.node, &cache.x_in, lp, &dx, gl);
        let (xs_in, vagg) = &state.layers[l];
        let (d_total, dxs_in) = combine_node_backward(vagg, xs_in, lp, &dxs, gl);

        // Hyperedge outputs feed their members, the virtual node and, at the
        // top layer, the loss directly.
        let mut dy = if l + 1 == emb.layers.len() {
            up.dy.clone()
        } else {
            Array2::zeros(cache.edge.out.raw_dim())
        };
        let d_total = d_total.row(0);
        for (e, members) in topo.members.iter().enumerate() {
            let mut row = dy.row_mut(e);
            row += &d_total;
            for &v in members {
                row += &d_edge_sum.row(v);
            }
        }

        let d_merged = edge_aggregate_backward(cache, lp, &dy, topo, gl);

        // Attention merge.
        let x_in = &cache.x_in;
        for (e, members) in topo.members.iter().enumerate() {
            let alpha = &cache.merge.alpha[e];
            let dm = d_merged.row(e);
            let da: Vec<f64> = members.iter().map(|&v| dm.dot(&x_in.row(v))).collect();
            let mean: f64 = alpha.iter().zip(&da).map(|(a, d)| a * d).sum();
            for (k, &v) in members.iter().enumerate() {
                let dz = alpha[k] * (da[k] - mean);
                gl.attention.scaled_add(dz, &x_in.row(v));
                let mut row = dx_in.row_mut(v);
                row.scaled_add(alpha[k], &dm);
                row.scaled_add(dz, &lp.attention);
            }
        }
        dx = dx_in;
        dxs = dxs_in;
    }
    Ok(())
}

/// Returns gradients w.r.t. the edge sums and the node inputs.
fn combine_node_backward(
    agg: &NodeAggregate,
    x_in: &Array2<f64>,
    lp: &LayerParams,
    d_out: &Array2<f64>,
    gl: &mut LayerParams,
) -> (Array2<f64>, Array2<f64>) {
    let d = lp.d_out();
    let d_pre = relu_backward(d_out, &agg.pre);
    gl.node_combine += &agg.concat.t().dot(&d_pre);
    let d_concat = d_pre.dot(&lp.node_combine.t());
    let d_sum_w = cols(&d_concat, 0, d);
    let d_self_w = cols(&d_concat, d, 2 * d);
    gl.node_edges += &d_sum_w.t().dot(&agg.edge_sum);
    gl.node_self += &d_self_w.t().dot(x_in);
    (d_sum_w.dot(&lp.node_edges), d_self_w.dot(&lp.node_self))
}

/// Returns the gradient w.r.t. the merged hyperedge embeddings.
fn edge_aggregate_backward(
    cache: &super::forward::LayerCache,
    lp: &LayerParams,
    dy: &Array2<f64>,
    topo: &super::forward::Topology,
    gl: &mut LayerParams,
) -> Array2<f64> {
    let d = lp.d_out();
    let edge = &cache.edge;
    let d_pre = relu_backward(dy, &edge.pre);
    gl.edge_combine += &edge.concat.t().dot(&d_pre);
    let d_concat = d_pre.dot(&lp.edge_combine.t());
    let d_nbr_w = cols(&d_concat, 0, d);
    let d_self_w = cols(&d_concat, d, 2 * d);
    gl.edge_neighbor += &d_nbr_w.t().dot(&edge.neighbor);
    gl.edge_self += &d_self_w.t().dot(&cache.merge.merged);
    let d_nbr = d_nbr_w.dot(&lp.edge_neighbor);
    let mut d_merged = d_self_w.dot(&lp.edge_self);
    // The neighbor normaliser is symmetric, so the adjoint scatters with the
    // same coefficients.
    for (e, ns) in topo.neighbors.iter().enumerate() {
        for &(f, c) in ns {
            let mut row = d_merged.row_mut(f);
            row.scaled_add(c, &d_nbr.row(e));
        }
    }
    d_merged
}

fn relu_backward(d_out: &Array2<f64>, pre: &Array2<f64>) -> Array2<f64> {
    let mut d = d_out.clone();
    d.zip_mut_with(pre, |g, &p| {
        if p <= 0.0 {
            *g = 0.0;
        }
    });
    d
}

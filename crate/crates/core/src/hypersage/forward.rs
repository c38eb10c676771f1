use ndarray::{concatenate, s, Array1, Array2, ArrayView1, Axis};

use super::params::LayerParams;
use super::ParameterSet;
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, NodeId};

/// Row-indexed view of a residual hypernetwork: live nodes and live
/// hyperedges, each in ascending id order.
#[derive(Clone, Debug)]
pub struct Topology {
    pub fingerprint: u64,
    pub node_ids: Vec<NodeId>,
    pub edge_ids: Vec<EdgeId>,
    /// Edge row → member node rows.
    pub members: Vec<Vec<usize>>,
    /// Node row → incident edge rows.
    pub incident: Vec<Vec<usize>>,
    /// Edge row → `(neighbor edge row, 1/√(|nei(e)|·|nei(e')|))`.
    pub neighbors: Vec<Vec<(usize, f64)>>,
}

impl Topology {
    pub fn new(g: &Hypergraph) -> Self {
        let node_ids: Vec<NodeId> = g.nodes().collect();
        let mut node_row = vec![usize::MAX; g.capacity()];
        for (r, &v) in node_ids.iter().enumerate() {
            node_row[v] = r;
        }
        let edge_ids: Vec<EdgeId> = g.edges().map(|(e, _)| e).collect();
        let mut edge_row = vec![usize::MAX; g.edge_capacity()];
        for (r, &e) in edge_ids.iter().enumerate() {
            edge_row[e] = r;
        }
        let members = edge_ids
            .iter()
            .map(|&e| g.members(e).iter().map(|&v| node_row[v]).collect())
            .collect();
        let incident = node_ids
            .iter()
            .map(|&v| g.incident(v).iter().map(|&e| edge_row[e]).collect())
            .collect();
        let nei: Vec<Vec<usize>> = edge_ids
            .iter()
            .map(|&e| g.edge_neighbors(e).into_iter().map(|f| edge_row[f]).collect())
            .collect();
        let neighbors = nei
            .iter()
            .map(|ns| {
                ns.iter()
                    .map(|&f| (f, 1.0 / ((ns.len() * nei[f].len()) as f64).sqrt()))
                    .collect()
            })
            .collect();
        Self {
            fingerprint: g.fingerprint(),
            node_ids,
            edge_ids,
            members,
            incident,
            neighbors,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.node_ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn row_of(&self, v: NodeId) -> Option<usize> {
        self.node_ids.binary_search(&v).ok()
    }
}

/// Attention-weighted merge of member embeddings into hyperedge embeddings.
#[derive(Clone, Debug)]
pub struct Merge {
    pub merged: Array2<f64>,
    /// Per edge row, attention over its members (same order as
    /// `Topology::members`).
    pub alpha: Vec<Vec<f64>>,
}

pub fn merge_nodes(x: &Array2<f64>, topo: &Topology, attention: &Array1<f64>) -> Result<Merge> {
    let logits = x.dot(attention);
    let mut merged = Array2::zeros((topo.num_edges(), x.ncols()));
    let mut alpha = Vec::with_capacity(topo.num_edges());
    for (e, members) in topo.members.iter().enumerate() {
        if members.is_empty() {
            return Err(Error::EmptyHyperedge(topo.edge_ids[e]));
        }
        let max = members.iter().map(|&v| logits[v]).fold(f64::NEG_INFINITY, f64::max);
        let mut a: Vec<f64> = members.iter().map(|&v| (logits[v] - max).exp()).collect();
        let z: f64 = a.iter().sum();
        a.iter_mut().for_each(|w| *w /= z);
        let mut row = merged.row_mut(e);
        for (&v, &w) in members.iter().zip(&a) {
            row.scaled_add(w, &x.row(v));
        }
        alpha.push(a);
    }
    Ok(Merge { merged, alpha })
}

/// Intermediates of the hyperedge-level aggregation.
#[derive(Clone, Debug)]
pub struct EdgeAggregate {
    /// Normalised neighbor sums.
    pub neighbor: Array2<f64>,
    /// `[neighbor·W2ᵀ ‖ y·W3ᵀ]`.
    pub concat: Array2<f64>,
    pub pre: Array2<f64>,
    pub out: Array2<f64>,
}

pub fn hyperedge_aggregate(y: &Array2<f64>, topo: &Topology, lp: &LayerParams) -> EdgeAggregate {
    let mut neighbor = Array2::zeros(y.raw_dim());
    for (e, ns) in topo.neighbors.iter().enumerate() {
        let mut row = neighbor.row_mut(e);
        for &(f, c) in ns {
            row.scaled_add(c, &y.row(f));
        }
    }
    let concat = concatenate![Axis(1), neighbor.dot(&lp.edge_neighbor.t()), y.dot(&lp.edge_self.t())];
    let pre = concat.dot(&lp.edge_combine);
    let out = pre.mapv(relu);
    EdgeAggregate {
        neighbor,
        concat,
        pre,
        out,
    }
}

/// Intermediates of the node-level aggregation.
#[derive(Clone, Debug)]
pub struct NodeAggregate {
    /// Sum of incident hyperedge embeddings per node.
    pub edge_sum: Array2<f64>,
    /// `[edge_sum·W5ᵀ ‖ x·W6ᵀ]`.
    pub concat: Array2<f64>,
    pub pre: Array2<f64>,
    pub out: Array2<f64>,
}

pub fn node_aggregate(x: &Array2<f64>, y_next: &Array2<f64>, topo: &Topology, lp: &LayerParams) -> NodeAggregate {
    let mut edge_sum = Array2::zeros((topo.num_nodes(), y_next.ncols()));
    for (v, es) in topo.incident.iter().enumerate() {
        let mut row = edge_sum.row_mut(v);
        for &e in es {
            row += &y_next.row(e);
        }
    }
    combine_node(edge_sum, x, lp)
}

fn combine_node(edge_sum: Array2<f64>, x: &Array2<f64>, lp: &LayerParams) -> NodeAggregate {
    let concat = concatenate![Axis(1), edge_sum.dot(&lp.node_edges.t()), x.dot(&lp.node_self.t())];
    let pre = concat.dot(&lp.node_combine);
    let out = pre.mapv(relu);
    NodeAggregate {
        edge_sum,
        concat,
        pre,
        out,
    }
}

#[derive(Clone, Debug)]
pub struct LayerCache {
    pub x_in: Array2<f64>,
    pub merge: Merge,
    pub edge: EdgeAggregate,
    pub node: NodeAggregate,
}

/// Node and hyperedge embeddings with every layer's intermediates.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub topo: Topology,
    pub layers: Vec<LayerCache>,
    /// Final node embeddings, `|V| × d_L`.
    pub x: Array2<f64>,
    /// Final hyperedge embeddings, `|E| × d_L` (no rows when `L = 0`).
    pub y: Array2<f64>,
}

pub fn embed(g: &Hypergraph, params: &ParameterSet) -> Result<Embedding> {
    if g.is_empty() {
        return Err(Error::EmptyHypernetwork);
    }
    let topo = Topology::new(g);
    let mut x = Array2::ones((topo.num_nodes(), 1));
    let mut y = Array2::zeros((topo.num_edges(), 1));
    let mut layers = Vec::with_capacity(params.num_layers());
    for lp in &params.layers {
        let merge = merge_nodes(&x, &topo, &lp.attention)?;
        let edge = hyperedge_aggregate(&merge.merged, &topo, lp);
        let node = node_aggregate(&x, &edge.out, &topo, lp);
        y = edge.out.clone();
        let x_next = node.out.clone();
        layers.push(LayerCache {
            x_in: std::mem::replace(&mut x, x_next),
            merge,
            edge,
            node,
        });
    }
    Ok(Embedding { topo, layers, x, y })
}

/// The virtual state node's trajectory through the layers.
#[derive(Clone, Debug)]
pub struct StateEmbedding {
    /// Per layer: the virtual node's input (1 × d_l) and its aggregation.
    pub layers: Vec<(Array2<f64>, NodeAggregate)>,
    /// Final state embedding, length `d_L`.
    pub xs: Array1<f64>,
}

/// Pushes a virtual node that belongs to every hyperedge through the node
/// aggregation of each layer. It reads the cached hyperedge embeddings and
/// never feeds back into them.
pub fn state_embed(emb: &Embedding, params: &ParameterSet) -> StateEmbedding {
    let mut xs = Array2::ones((1, 1));
    let mut layers = Vec::with_capacity(emb.layers.len());
    for (cache, lp) in emb.layers.iter().zip(&params.layers) {
        let total = cache.edge.out.sum_axis(Axis(0)).insert_axis(Axis(0));
        let agg = combine_node(total, &xs, lp);
        let next = agg.out.clone();
        layers.push((std::mem::replace(&mut xs, next), agg));
    }
    StateEmbedding {
        layers,
        xs: xs.row(0).to_owned(),
    }
}

/// `q(s, a) = W8ᵀ ReLU(x_sᵀ x_a W9)` for a single action row.
pub fn q_value(x_a: ArrayView1<f64>, xs: ArrayView1<f64>, params: &ParameterSet) -> f64 {
    let c = x_a.dot(&params.q_action);
    xs.iter().zip(&params.q_out).map(|(&s, &w)| w * relu(s * c)).sum()
}

/// Q values for every row of `x`.
pub fn q_values(x: &Array2<f64>, xs: &Array1<f64>, params: &ParameterSet) -> Array1<f64> {
    x.rows()
        .into_iter()
        .map(|row| q_value(row, xs.view(), params))
        .collect()
}

/// Embedding, state and Q values of one residual hypernetwork.
#[derive(Clone, Debug)]
pub struct Forward {
    pub embedding: Embedding,
    pub state: StateEmbedding,
    /// Q value per node row (see `embedding.topo.node_ids`).
    pub q: Array1<f64>,
}

impl Forward {
    pub fn new(g: &Hypergraph, params: &ParameterSet) -> Result<Self> {
        let embedding = embed(g, params)?;
        let state = state_embed(&embedding, params);
        let q = q_values(&embedding.x, &state.xs, params);
        Ok(Self { embedding, state, q })
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.embedding.topo.node_ids
    }

    /// Q value of removing node `v`.
    pub fn q_of(&self, v: NodeId) -> Result<f64> {
        let r = self.embedding.topo.row_of(v).ok_or(Error::NodeNotFound(v))?;
        Ok(self.q[r])
    }

    /// Highest Q value, ties to the smallest node id.
    pub fn best_action(&self) -> Option<(NodeId, f64)> {
        let mut best: Option<(NodeId, f64)> = None;
        for (&v, &q) in self.node_ids().iter().zip(&self.q) {
            if best.is_none_or(|(_, b)| q > b) {
                best = Some((v, q));
            }
        }
        best
    }

    pub fn max_q(&self) -> Option<f64> {
        self.best_action().map(|(_, q)| q)
    }
}

pub(crate) fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Columns `[from, to)` of a matrix as an owned copy.
pub(crate) fn cols(m: &Array2<f64>, from: usize, to: usize) -> Array2<f64> {
    m.slice(s![.., from..to]).to_owned()
}

//! Inductive two-level hypergraph embedding with a Q head.
//!
//! Each layer merges member node embeddings into hyperedges with attention,
//! mixes every hyperedge with its normalised neighbor hyperedges, then
//! aggregates hyperedges back into nodes. A virtual node that belongs to
//! every hyperedge but never contributes to them summarises the whole
//! residual hypernetwork as the state.
//!
//! Input features are all ones (width 1), so the model sees structure only.

mod backward;
pub mod checkpoint;
mod forward;
mod params;

pub use backward::{backward, q_value_backward, Upstream};
pub use forward::{
    embed, hyperedge_aggregate, merge_nodes, node_aggregate, q_value, q_values, state_embed, EdgeAggregate, Embedding,
    Forward, LayerCache, Merge, NodeAggregate, StateEmbedding, Topology,
};
pub use params::{Init, LayerParams, ParameterSet, Shape};

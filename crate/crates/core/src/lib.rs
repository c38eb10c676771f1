//! Hypernetwork dismantling.
//!
//! The crate is organised bottom-up:
//!
//! - [`hypergraph`]: the residual hypernetwork, degree measures, component
//!   labeling, connectivity and the 2-section projection.
//! - [`synthgen`]: forest-fire style generator for small training instances.
//! - [`hypersage`]: the two-level inductive embedding, the Q head and their
//!   hand-derived reverse-mode gradients.
//! - [`agent`]: epsilon-greedy rollouts, n-step experiences, replay, losses and
//!   the training loop.
//! - [`baselines`]: greedy degree / hyper-degree / collective-influence orders.
//! - [`evalsim`]: the batch dismantling harness with ANC, and an SIR
//!   containment simulator.
//! - [`io`]: text formats for hypernetworks and contact data.

pub mod agent;
pub mod baselines;
pub mod error;
pub mod evalsim;
pub mod hypergraph;
pub mod hypersage;
pub mod io;
pub mod rng;
pub mod synthgen;

pub use error::{Error, Result};
pub use hypergraph::{EdgeId, Hypergraph, NodeId};

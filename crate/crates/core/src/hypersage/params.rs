use ndarray::{Array1, Array2};
use rand::distributions::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Weights of one embedding layer mapping width `d_in` to `d_out`.
///
/// Matrices act on row vectors from the right where the math uses a
/// transpose: `edge_neighbor` (W2) is stored `d_out × d_in` and applied as
/// `row · W2ᵀ`, while `edge_combine` (W4) is stored `2·d_out × d_out` and
/// applied as `[a ‖ b] · W4`.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerParams {
    /// W1, the attention vector (length `d_in`).
    pub attention: Array1<f64>,
    /// W2, `d_out × d_in`.
    pub edge_neighbor: Array2<f64>,
    /// W3, `d_out × d_in`.
    pub edge_self: Array2<f64>,
    /// W4, `2·d_out × d_out`.
    pub edge_combine: Array2<f64>,
    /// W5, `d_out × d_out`.
    pub node_edges: Array2<f64>,
    /// W6, `d_out × d_in`.
    pub node_self: Array2<f64>,
    /// W7, `2·d_out × d_out`.
    pub node_combine: Array2<f64>,
}

impl LayerParams {
    fn zeros(d_in: usize, d_out: usize) -> Self {
        Self {
            attention: Array1::zeros(d_in),
            edge_neighbor: Array2::zeros((d_out, d_in)),
            edge_self: Array2::zeros((d_out, d_in)),
            edge_combine: Array2::zeros((2 * d_out, d_out)),
            node_edges: Array2::zeros((d_out, d_out)),
            node_self: Array2::zeros((d_out, d_in)),
            node_combine: Array2::zeros((2 * d_out, d_out)),
        }
    }

    pub fn d_in(&self) -> usize {
        self.attention.len()
    }

    pub fn d_out(&self) -> usize {
        self.node_edges.nrows()
    }
}

/// Every trainable weight of the embedding and the Q head. Gradients use the
/// same type.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet {
    dims: Vec<usize>,
    pub layers: Vec<LayerParams>,
    /// W8, length `d_L`.
    pub q_out: Array1<f64>,
    /// W9, length `d_L`.
    pub q_action: Array1<f64>,
}

/// Shape of a named tensor: `(rows, cols)`.
pub type Shape = (usize, usize);

/// Bound of the uniform initial weights.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    /// `1/√fan_in`. Deep stacks start with near-zero Q values.
    #[default]
    Uniform,
    /// `√(6/fan_in)`. The unnormalised sums over incident and all hyperedges
    /// compound across layers, so this tends to blow up on larger inputs.
    He,
}

impl Init {
    pub fn bound(self, fan_in: usize) -> f64 {
        match self {
            Init::Uniform => 1.0 / (fan_in as f64).sqrt(),
            Init::He => (6.0 / fan_in as f64).sqrt(),
        }
    }
}

impl std::str::FromStr for Init {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Init::Uniform),
            "he" => Ok(Init::He),
            other => Err(Error::InvalidConfig(format!("unknown init {other:?}"))),
        }
    }
}

impl ParameterSet {
    /// Layer widths `[1, d, …, d]` for `layers` layers over one-vector input
    /// features.
    pub fn dims_for(embed_dim: usize, layers: usize) -> Vec<usize> {
        std::iter::once(1)
            .chain(std::iter::repeat_n(embed_dim, layers))
            .collect()
    }

    pub fn zeros(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidConfig(format!("bad layer dims {dims:?}")));
        }
        let d_last = *dims.last().unwrap();
        Ok(Self {
            dims: dims.to_vec(),
            layers: dims.windows(2).map(|w| LayerParams::zeros(w[0], w[1])).collect(),
            q_out: Array1::zeros(d_last),
            q_action: Array1::zeros(d_last),
        })
    }

    /// [`Init::Uniform`] initialization.
    pub fn random(dims: &[usize], rng: &mut Rng) -> Result<Self> {
        Self::random_with(dims, Init::Uniform, rng)
    }

    /// Uniform in `[-b, b]` per tensor with `b` set by `init` from `fan_in`,
    /// the width of the vector the tensor is applied to.
    pub fn random_with(dims: &[usize], init: Init, rng: &mut Rng) -> Result<Self> {
        let mut p = Self::zeros(dims)?;
        let mut fill = |data: &mut [f64], fan_in: usize| {
            let bound = init.bound(fan_in);
            let dist = Uniform::new_inclusive(-bound, bound);
            data.iter_mut().for_each(|w| *w = dist.sample(rng));
        };
        for lp in &mut p.layers {
            let (d_in, d_out) = (lp.d_in(), lp.d_out());
            fill(slice_mut(lp.attention.as_slice_mut()), d_in);
            fill(slice_mut(lp.edge_neighbor.as_slice_mut()), d_in);
            fill(slice_mut(lp.edge_self.as_slice_mut()), d_in);
            fill(slice_mut(lp.edge_combine.as_slice_mut()), 2 * d_out);
            fill(slice_mut(lp.node_edges.as_slice_mut()), d_out);
            fill(slice_mut(lp.node_self.as_slice_mut()), d_in);
            fill(slice_mut(lp.node_combine.as_slice_mut()), 2 * d_out);
        }
        let d = p.embed_dim();
        fill(slice_mut(p.q_out.as_slice_mut()), d);
        fill(slice_mut(p.q_action.as_slice_mut()), d);
        Ok(p)
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(&self.dims).expect("dims already validated")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn embed_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    /// Visits every tensor as `(name, shape, row-major data)` in a fixed order.
    pub fn for_each_tensor(&self, mut f: impl FnMut(&str, Shape, &[f64])) {
        for (l, lp) in self.layers.iter().enumerate() {
            let d_in = lp.d_in();
            f(&format!("layer{l}.w1"), (1, d_in), slice(lp.attention.as_slice()));
            for (name, m) in [
                ("w2", &lp.edge_neighbor),
                ("w3", &lp.edge_self),
                ("w4", &lp.edge_combine),
                ("w5", &lp.node_edges),
                ("w6", &lp.node_self),
                ("w7", &lp.node_combine),
            ] {
                f(&format!("layer{l}.{name}"), m.dim(), slice(m.as_slice()));
            }
        }
        let d = self.embed_dim();
        f("w8", (d, 1), slice(self.q_out.as_slice()));
        f("w9", (d, 1), slice(self.q_action.as_slice()));
    }

    pub fn for_each_tensor_mut(&mut self, mut f: impl FnMut(&str, Shape, &mut [f64])) {
        for (l, lp) in self.layers.iter_mut().enumerate() {
            let d_in = lp.d_in();
            f(
                &format!("layer{l}.w1"),
                (1, d_in),
                slice_mut(lp.attention.as_slice_mut()),
            );
            for (name, m) in [
                ("w2", &mut lp.edge_neighbor),
                ("w3", &mut lp.edge_self),
                ("w4", &mut lp.edge_combine),
                ("w5", &mut lp.node_edges),
                ("w6", &mut lp.node_self),
                ("w7", &mut lp.node_combine),
            ] {
                let shape = m.dim();
                f(&format!("layer{l}.{name}"), shape, slice_mut(m.as_slice_mut()));
            }
        }
        let d = self.embed_dim();
        f("w8", (d, 1), slice_mut(self.q_out.as_slice_mut()));
        f("w9", (d, 1), slice_mut(self.q_action.as_slice_mut()));
    }

    pub fn len(&self) -> usize {
        let mut n = 0;
        self.for_each_tensor(|_, _, d| n += d.len());
        n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All entries concatenated in visiting order.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        self.for_each_tensor(|_, _, d| out.extend_from_slice(d));
        out
    }

    pub fn set_flat(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.len(), "flat parameter length mismatch");
        let mut at = 0;
        self.for_each_tensor_mut(|_, _, d| {
            d.copy_from_slice(&flat[at..at + d.len()]);
            at += d.len();
        });
    }

    /// `self += alpha · other`.
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        assert_eq!(self.dims, other.dims, "parameter dims mismatch");
        let flat = other.to_flat();
        let mut at = 0;
        self.for_each_tensor_mut(|_, _, d| {
            for w in d.iter_mut() {
                *w += alpha * flat[at];
                at += 1;
            }
        });
    }

    pub fn scale(&mut self, alpha: f64) {
        self.for_each_tensor_mut(|_, _, d| d.iter_mut().for_each(|w| *w *= alpha));
    }

    pub fn l2_norm(&self) -> f64 {
        let mut s = 0.0;
        self.for_each_tensor(|_, _, d| s += d.iter().map(|w| w * w).sum::<f64>());
        s.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        let mut ok = true;
        self.for_each_tensor(|_, _, d| ok &= d.iter().all(|w| w.is_finite()));
        ok
    }
}

fn slice(s: Option<&[f64]>) -> &[f64] {
    s.expect("parameter tensors are contiguous")
}

fn slice_mut(s: Option<&mut [f64]>) -> &mut [f64] {
    s.expect("parameter tensors are contiguous")
}

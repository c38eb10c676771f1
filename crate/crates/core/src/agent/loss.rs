use ndarray::Array2;
use rayon::prelude::*;

use super::Experience;
use crate::error::{Error, Result};
use crate::hypersage::{backward, q_value_backward, Forward, ParameterSet, Topology, Upstream};

/// Weights of the combined objective `L_Q + alpha · L_E`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossConfig {
    pub gamma: f64,
    pub alpha: f64,
}

/// `Σ_e Σ_{e' ∈ nei(e)} ‖y_e − y_e'‖²`; every unordered neighbor pair is
/// counted twice.
pub fn recon_loss(y: &Array2<f64>, topo: &Topology) -> f64 {
    topo.neighbors
        .iter()
        .enumerate()
        .map(|(e, ns)| {
            ns.iter()
                .map(|&(f, _)| {
                    let d = &y.row(e) - &y.row(f);
                    d.dot(&d)
                })
                .sum::<f64>()
        })
        .sum()
}

/// Gradient of [`recon_loss`]: `4 Σ_{e' ∈ nei(e)} (y_e − y_e')` per row.
pub fn recon_grad(y: &Array2<f64>, topo: &Topology) -> Array2<f64> {
    let mut g = Array2::zeros(y.raw_dim());
    for (e, ns) in topo.neighbors.iter().enumerate() {
        let mut row = g.row_mut(e);
        for &(f, _) in ns {
            row.scaled_add(4.0, &y.row(e));
            row.scaled_add(-4.0, &y.row(f));
        }
    }
    g
}

/// Bootstrapped target `r + gamma · max_a q̂(s_next, a)` under the target
/// parameters; terminal (or empty) next states contribute `r` alone.
pub fn td_target(exp: &Experience, target: &ParameterSet, gamma: f64) -> Result<f64> {
    if exp.terminal || exp.next.is_empty() {
        return Ok(exp.reward);
    }
    let fwd = Forward::new(&exp.next, target)?;
    Ok(exp.reward + gamma * fwd.max_q().expect("non-empty"))
}

/// Mean squared TD error over the batch.
pub fn td_loss(batch: &[&Experience], params: &ParameterSet, target: &ParameterSet, gamma: f64) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::InsufficientExperience(0));
    }
    let mut sum = 0.0;
    for exp in batch {
        let y = td_target(exp, target, gamma)?;
        let q = Forward::new(&exp.state, params)?.q_of(exp.action)?;
        sum += (y - q).powi(2);
    }
    Ok(sum / batch.len() as f64)
}

/// `L_Q + alpha · mean_batch L_E(s_t)`.
pub fn total_loss(batch: &[&Experience], params: &ParameterSet, target: &ParameterSet, cfg: LossConfig) -> Result<f64> {
    Ok(total_loss_and_grad_impl(batch, params, target, cfg, false)?.0)
}

/// Total loss and its exact gradient w.r.t. every parameter.
pub fn total_loss_and_grad(
    batch: &[&Experience],
    params: &ParameterSet,
    target: &ParameterSet,
    cfg: LossConfig,
) -> Result<(f64, ParameterSet)> {
    total_loss_and_grad_impl(batch, params, target, cfg, true)
}

fn total_loss_and_grad_impl(
    batch: &[&Experience],
    params: &ParameterSet,
    target: &ParameterSet,
    cfg: LossConfig,
    want_grad: bool,
) -> Result<(f64, ParameterSet)> {
    if batch.is_empty() {
        return Err(Error::InsufficientExperience(0));
    }
    let scale = 1.0 / batch.len() as f64;
    // Per-experience terms are summed in batch order so results do not depend
    // on the thread count.
    let parts: Vec<Result<(f64, Option<ParameterSet>)>> = batch
        .par_iter()
        .map(|exp| experience_term(exp, params, target, cfg, scale, want_grad))
        .collect();
    let mut loss = 0.0;
    let mut grads = params.zeros_like();
    for part in parts {
        let (l, g) = part?;
        loss += l;
        if let Some(g) = g {
            grads.axpy(1.0, &g);
        }
    }
    Ok((loss, grads))
}

fn experience_term(
    exp: &Experience,
    params: &ParameterSet,
    target: &ParameterSet,
    cfg: LossConfig,
    scale: f64,
    want_grad: bool,
) -> Result<(f64, Option<ParameterSet>)> {
    let y = td_target(exp, target, cfg.gamma)?;
    let fwd = Forward::new(&exp.state, params)?;
    let emb = &fwd.embedding;
    let row = emb.topo.row_of(exp.action).ok_or(Error::NodeNotFound(exp.action))?;
    let q = fwd.q[row];
    let recon = recon_loss(&emb.y, &emb.topo);
    let loss = scale * ((y - q).powi(2) + cfg.alpha * recon);
    if !want_grad {
        return Ok((loss, None));
    }
    let mut grads = params.zeros_like();
    let mut up = Upstream::zeros(emb);
    let dq = -2.0 * (y - q) * scale;
    q_value_backward(
        emb.x.row(row),
        fwd.state.xs.view(),
        params,
        dq,
        &mut grads,
        up.dx.row_mut(row),
        &mut up.dxs,
    );
    if cfg.alpha != 0.0 && emb.y.nrows() > 0 {
        up.dy = recon_grad(&emb.y, &emb.topo) * (cfg.alpha * scale);
    }
    backward(&exp.state, emb, &fwd.state, params, &up, &mut grads)?;
    Ok((loss, Some(grads)))
}

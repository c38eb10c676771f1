#![allow(dead_code)]

use std::sync::Arc;

use hyperdismantle::agent::{total_loss, total_loss_and_grad, Experience, LossConfig};
use hyperdismantle::hypersage::{Forward, ParameterSet};
use hyperdismantle::rng::substream;
use rand::seq::SliceRandom;
use rand::Rng;

use super::random_hypergraph;

/// Worst component of an analytic vs central-difference gradient comparison.
#[derive(Clone, Copy, Debug)]
pub struct GradReport {
    pub max_rel: f64,
    pub max_abs: f64,
    pub checked: usize,
    /// Components skipped because the perturbation moved a ReLU input across
    /// zero, where the loss has a kink and central differences are meaningless.
    pub kinks: usize,
}

/// Signs of every ReLU input touched by the loss under `params`.
fn relu_signs(exps: &[Experience], params: &ParameterSet) -> Vec<bool> {
    let mut signs = Vec::new();
    for exp in exps {
        let fwd = Forward::new(&exp.state, params).unwrap();
        for cache in &fwd.embedding.layers {
            signs.extend(cache.edge.pre.iter().map(|&v| v > 0.0));
            signs.extend(cache.node.pre.iter().map(|&v| v > 0.0));
        }
        for (_, agg) in &fwd.state.layers {
            signs.extend(agg.pre.iter().map(|&v| v > 0.0));
        }
        let row = fwd.embedding.topo.row_of(exp.action).unwrap();
        let c = fwd.embedding.x.row(row).dot(&params.q_action);
        signs.extend(fwd.state.xs.iter().map(|&s| s * c > 0.0));
    }
    signs
}

/// Relative error with a floor on the denominator: components whose analytic
/// and numeric values are both below `floor` are compared absolutely.
pub fn rel_err(a: f64, n: f64, floor: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(floor)
}

/// A small batch of experiences on one random 6-node hypernetwork.
pub fn batch(rng: &mut impl Rng) -> Vec<Experience> {
    let m = rng.gen_range(3..=7);
    let g = Arc::new(random_hypergraph(rng, 6, m));
    (0..3)
        .map(|_| {
            let nodes: Vec<usize> = g.nodes().collect();
            let a = *nodes.choose(rng).unwrap();
            let mut next = g.remove_node(a).unwrap();
            let extra = rng.gen_range(0..=2);
            for _ in 0..extra {
                let rest: Vec<usize> = next.nodes().collect();
                if rest.len() > 1 {
                    next.remove_node_mut(*rest.choose(rng).unwrap()).unwrap();
                }
            }
            Experience {
                state: g.clone(),
                action: a,
                reward: -rng.gen_range(0.0..2.0),
                next: Arc::new(next),
                terminal: rng.gen_bool(0.3),
            }
        })
        .collect()
}

/// Compares the analytic gradient of the total loss with central differences
/// for every parameter.
pub fn check(seed: u64, h: f64, floor: f64) -> GradReport {
    let mut rng = substream(seed, "gradcheck", 0);
    let dims = ParameterSet::dims_for(8, 2);
    let params = ParameterSet::random(&dims, &mut rng).unwrap();
    let target = ParameterSet::random(&dims, &mut rng).unwrap();
    let exps = batch(&mut rng);
    let refs: Vec<&Experience> = exps.iter().collect();
    let cfg = LossConfig { gamma: 0.9, alpha: 0.5 };

    let (_, grad) = total_loss_and_grad(&refs, &params, &target, cfg).unwrap();
    let analytic = grad.to_flat();
    let base = params.to_flat();
    let mut probe = params.clone();
    let mut report = GradReport {
        max_rel: 0.0,
        max_abs: 0.0,
        checked: 0,
        kinks: 0,
    };
    let signs = relu_signs(&exps, &params);
    for i in 0..base.len() {
        let mut plus = base.clone();
        plus[i] += h;
        probe.set_flat(&plus);
        let lp = total_loss(&refs, &probe, &target, cfg).unwrap();
        let crossed_up = relu_signs(&exps, &probe) != signs;
        let mut minus = base.clone();
        minus[i] -= h;
        probe.set_flat(&minus);
        let lm = total_loss(&refs, &probe, &target, cfg).unwrap();
        if crossed_up || relu_signs(&exps, &probe) != signs {
            report.kinks += 1;
            continue;
        }
        let numeric = (lp - lm) / (2.0 * h);
        report.max_rel = report.max_rel.max(rel_err(analytic[i], numeric, floor));
        report.max_abs = report.max_abs.max((analytic[i] - numeric).abs());
        report.checked += 1;
    }
    report
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hyperdismantle::agent::{mean_agent_anc, train, TrainConfig, TrainReport};
use hyperdismantle::baselines::Strategy;
use hyperdismantle::evalsim::{anc, anc_of, containment_table, dismantle, SirConfig};
use hyperdismantle::hypersage::{embed, q_values, state_embed, ParameterSet};
use hyperdismantle::io::{self, Format};
use hyperdismantle::rng::substream;
use hyperdismantle::synthgen::{generate_batch, GenConfig};
use rand::Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};
use support::dense::{self, max_abs_diff};
use support::{gradcheck, naive, random_residual};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn gradients() -> Outcome {
    let start = Instant::now();
    let (mut worst, mut kinks, mut checked) = (0.0f64, 0, 0);
    for seed in 0..10 {
        let r = gradcheck::check(seed, 1e-4, 1e-3);
        worst = worst.max(r.max_rel);
        kinks += r.kinks;
        checked += r.checked;
    }
    let t = start.elapsed();
    outcome(
        worst < 1e-4 && t < Duration::from_secs(60),
        format!("max rel err {worst:.2e} over {checked} components ({kinks} kink crossings skipped), {t:.1?}"),
    )
}

fn forward_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = substream(1, "acceptance-forward", 0);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let g = random_residual(&mut rng, 10);
        let d = rng.gen_range(1..=8);
        let layers = rng.gen_range(1..=3);
        let p = ParameterSet::random(&ParameterSet::dims_for(d, layers), &mut rng).unwrap();
        let reference = dense::forward(&g, &p);
        let emb = embed(&g, &p).unwrap();
        let state = state_embed(&emb, &p);
        let q = q_values(&emb.x, &state.xs, &p);
        worst = worst.max(max_abs_diff(&reference.x, &emb.x));
        worst = worst.max(max_abs_diff(&reference.y, &emb.y));
        for (a, b) in reference.xs.iter().zip(&state.xs) {
            worst = worst.max((a - b).abs());
        }
        for (a, b) in reference.q.iter().zip(&q) {
            worst = worst.max((a - b).abs());
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-10 && t < Duration::from_secs(60),
        format!("max abs diff {worst:.2e}, {t:.1?}"),
    )
}

fn all_strategies(agent: ParameterSet) -> Vec<Strategy> {
    vec![
        Strategy::Hd,
        Strategy::Hda,
        Strategy::Ci { radius: 2 },
        Strategy::Hhd,
        Strategy::Hhda,
        Strategy::Random { seed: 0 },
        Strategy::Agent(Arc::new(agent)),
    ]
}

fn anc_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = substream(3, "acceptance-anc", 0);
    let mut mismatches = 0;
    let mut runs = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=50);
        let m = rng.gen_range(1..=n + 10);
        let g = support::random_hypergraph(&mut rng, n, m);
        let agent = ParameterSet::random(&ParameterSet::dims_for(8, 2), &mut rng).unwrap();
        for s in all_strategies(agent) {
            let t = dismantle(&g, &s, 0.01, None).unwrap();
            let slow = naive::connectivity(&g, &t.batches());
            runs += 1;
            if t.connectivity != slow || anc(&t).unwrap() != anc_of(&slow).unwrap() {
                mismatches += 1;
            }
        }
    }
    let t = start.elapsed();
    outcome(
        mismatches == 0 && t < Duration::from_secs(120),
        format!("{mismatches} mismatches in {runs} traces, {t:.1?}"),
    )
}

/// One-sided paired t-test of `mean(a - b) > 0`; returns (mean, p).
fn paired_greater(a: &[f64], b: &[f64]) -> (f64, f64) {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if var == 0.0 {
        return (mean, if mean > 0.0 { 0.0 } else { 1.0 });
    }
    let t = mean / (var / n).sqrt();
    let p = 1.0 - StudentsT::new(0.0, 1.0, n - 1.0).unwrap().cdf(t);
    (mean, p)
}

fn baseline_ordering() -> Outcome {
    let start = Instant::now();
    let graphs = generate_batch(&GenConfig::default(), 50).unwrap();
    let score = |s: &Strategy| -> Vec<f64> {
        graphs
            .iter()
            .map(|g| anc(&dismantle(g, s, 0.01, None).unwrap()).unwrap())
            .collect()
    };
    let (hhda, hhd, hd) = (score(&Strategy::Hhda), score(&Strategy::Hhd), score(&Strategy::Hd));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m1, p1) = paired_greater(&hhd, &hhda);
    let (m2, p2) = paired_greater(&hd, &hhda);
    let t = start.elapsed();
    outcome(
        m1 >= 0.0 && p1 < 0.05 && m2 >= 0.0 && p2 < 0.05 && t < Duration::from_secs(300),
        format!(
            "HHDA {:.4}, HHD {:.4} (p {p1:.1e}), HD {:.4} (p {p2:.1e}), {t:.1?}",
            mean(&hhda),
            mean(&hhd),
            mean(&hd)
        ),
    )
}

struct Trained {
    report: TrainReport,
    elapsed: Duration,
}

fn train_agent() -> Trained {
    let cfg = TrainConfig {
        episodes: 3000,
        ..TrainConfig::default()
    };
    let start = Instant::now();
    let report = train(&cfg, &GenConfig::default()).unwrap();
    Trained {
        report,
        elapsed: start.elapsed(),
    }
}

fn learning(trained: &Trained) -> Outcome {
    let held = generate_batch(&GenConfig::default().with_seed(31_337), 50).unwrap();
    let mean_of = |s: &Strategy| {
        held.iter()
            .map(|g| anc(&dismantle(g, s, 0.01, None).unwrap()).unwrap())
            .sum::<f64>()
            / held.len() as f64
    };
    let agent = mean_agent_anc(&trained.report.best, &held, 0.01).unwrap();
    let random = mean_of(&Strategy::Random { seed: 0 });
    let hhda = mean_of(&Strategy::Hhda);
    let a = agent <= 0.7 * random;
    let b = agent <= 1.05 * hhda;
    outcome(
        a && b && trained.elapsed < Duration::from_secs(4 * 3600),
        format!(
            "agent {agent:.4} (best episode {}), RANDOM {random:.4} [(a) {}], HHDA {hhda:.4} [(b) {}], {:.1?}",
            trained.report.best_episode,
            if a { "met" } else { "missed" },
            if b { "met" } else { "missed" },
            trained.elapsed
        ),
    )
}

fn convergence(trained: &Trained) -> Outcome {
    let r = &trained.report;
    outcome(
        r.best_anc < r.initial_anc,
        format!(
            "best validation ANC {:.4} at episode {}, initial {:.4}",
            r.best_anc, r.best_episode, r.initial_anc
        ),
    )
}

fn containment(agent: &ParameterSet) -> Outcome {
    let start = Instant::now();
    let g = io::load(&fixture("contacts_200.txt"), Format::ContactTimestamps, false)
        .unwrap()
        .graph;
    let table = containment_table(&g, &all_strategies(agent.clone()), &SirConfig::default()).unwrap();
    let hhda = table.rows.iter().find(|r| r.strategy == "HHDA").unwrap();
    let monotone = hhda
        .outcomes
        .windows(2)
        .all(|w| w[1].mean - w[0].mean <= 2.0 * (w[0].std_err.powi(2) + w[1].std_err.powi(2)).sqrt());
    let zero = table.rows[0].outcomes[0].mean;
    let same_start = table.rows.iter().all(|r| r.outcomes[0].mean == zero);
    let rates: Vec<String> = hhda.outcomes.iter().map(|o| format!("{:.3}", o.mean)).collect();
    let t = start.elapsed();
    outcome(
        g.node_count() == 200 && monotone && same_start && t < Duration::from_secs(300),
        format!(
            "{} nodes, HHDA rates [{}], ratio-0 rate {zero:.4} shared by all {} strategies: {same_start}, {t:.1?}",
            g.node_count(),
            rates.join(", "),
            table.rows.len()
        ),
    )
}

fn cli(args: &[String]) -> bool {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperdismantle"))
        .args(args)
        .output()
        .unwrap();
    if !out.status.success() {
        eprintln!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    }
    out.status.success()
}

/// Runs a command, then replays the argv from its manifest into a fresh
/// directory and compares every output byte for byte.
fn replay(root: &Path, name: &str, args: &[&str]) -> Result<usize, String> {
    let first = root.join(name).join("a");
    let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    argv.extend(["--out".to_string(), first.display().to_string()]);
    if !cli(&argv) {
        return Err(format!("{name}: run failed"));
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(first.join("manifest.json")).unwrap()).unwrap();
    let second = root.join(name).join("b");
    let mut again: Vec<String> = manifest["argv"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let at = again.iter().position(|a| a == "--out").unwrap();
    again[at + 1] = second.display().to_string();
    if !cli(&again) {
        return Err(format!("{name}: replay failed"));
    }
    let outputs = manifest["outputs"].as_array().unwrap();
    for o in outputs {
        let path = PathBuf::from(o["path"].as_str().unwrap());
        let file = path.file_name().unwrap();
        if std::fs::read(&path).unwrap() != std::fs::read(second.join(file)).unwrap() {
            return Err(format!("{name}: {} differs", file.to_string_lossy()));
        }
    }
    Ok(outputs.len())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let contacts = fixture("contacts_200.txt").display().to_string();
    let ck = root
        .join("train")
        .join("a")
        .join("checkpoint.json")
        .display()
        .to_string();
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("gen", vec!["gen", "--count", "3", "--seed", "5"]),
        (
            "train",
            vec![
                "train",
                "--episodes",
                "40",
                "--warmup",
                "20",
                "--batch-size",
                "16",
                "--embed-dim",
                "8",
                "--validation-interval",
                "10",
                "--validation-size",
                "5",
                "--target-update",
                "10",
                "--seed",
                "3",
            ],
        ),
        (
            "dismantle",
            vec![
                "dismantle",
                "--input",
                &contacts,
                "--format",
                "contact-timestamps",
                "--strategy",
                "CI",
            ],
        ),
        (
            "dismantle-agent",
            vec![
                "dismantle",
                "--input",
                &contacts,
                "--format",
                "contact-timestamps",
                "--strategy",
                "AGENT",
                "--checkpoint",
                &ck,
            ],
        ),
        (
            "eval",
            vec![
                "eval",
                "--synthetic",
                "5",
                "--strategies",
                "HD,HDA,CI,HHD,HHDA,RANDOM",
                "--seed",
                "9",
            ],
        ),
        ("sir", vec!["sir", "--input", &contacts, "--repetitions", "30"]),
    ];
    let mut compared = BTreeMap::new();
    for (name, args) in &runs {
        match replay(root, name, args) {
            Ok(n) => {
                compared.insert(*name, n);
            }
            Err(e) => return outcome(false, e),
        }
    }
    let files: usize = compared.values().sum();
    outcome(
        true,
        format!(
            "{} runs replayed from their manifests, {files} output files identical",
            compared.len()
        ),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut record = |n, name, o: Outcome| {
        println!(
            "criterion {n} {}: {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((n, name, o));
    };
    record(1, "gradient check", gradients());
    record(2, "forward oracle", forward_oracle());
    record(3, "ANC oracle", anc_oracle());
    record(4, "baseline ordering", baseline_ordering());
    let trained = train_agent();
    record(5, "learning at desk scale", learning(&trained));
    record(6, "validation convergence", convergence(&trained));
    record(7, "SIR containment", containment(&trained.report.best));
    record(8, "determinism", determinism());

    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} of {} criteria pass",
        results.len() - failed.len(),
        results.len()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

//! Seeded randomized property suite behind `qgraph verify`.
//!
//! Trials run sequentially from a single [`GraphSampler`], so a seed fixes
//! every graph, length and spread, and the summary is byte-identical across
//! runs.

use std::f64::consts::E;
use std::fmt::Write as _;

use qgraph_core::bounds::{
    det_drift, eigenvalue_drift, mckay_lower, norm_bound, tree_drift, upper_bounds, BoundError,
};
use qgraph_core::fixtures::GraphSampler;
use qgraph_core::quantum_det::{det_prime_equilateral, threshold_delta, tree_estimator, tree_value};
use qgraph_core::spanning_trees::count_all;
use qgraph_core::zeta::log_det_via_zeta;
use qgraph_core::{Graph, MetricGraph};
use serde::Serialize;

use crate::report::SCHEMA;

/// Brute-force counting caps the edge count; rejection sampling stays cheap up to here.
pub const MAX_VERTICES: usize = 10;
pub const MAX_EDGES: usize = 24;

const CHECKS: [&str; 5] = [
    "tree_counts_agree",
    "equilateral_tree_value",
    "threshold_recovery",
    "bounds_hold",
    "zeta_determinant",
];

const REFERENCE_LENGTHS: [f64; 3] = [0.5, 1.0, E];

#[derive(Debug, Clone, Serialize)]
pub struct Tally {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub schema: u32,
    pub seed: u64,
    pub trials: usize,
    pub max_v: usize,
    pub checks: Vec<Tally>,
    pub all_passed: bool,
}

#[derive(Debug, thiserror::Error)]
#[error("--max-v must be between 2 and {MAX_VERTICES}, got {0}")]
pub struct MaxVertexError(pub usize);

fn tree_checks(g: &Graph, trial: usize) -> (bool, bool, Option<u64>) {
    let Ok(summary) = count_all(g) else { return (false, false, None) };
    let agree = summary.agree() && summary.brute_force.is_some();
    let count = summary.minor;
    let l = REFERENCE_LENGTHS[trial % REFERENCE_LENGTHS.len()];
    let equilateral = det_prime_equilateral(g, l).is_ok_and(|d| {
        let t = tree_value(g, l, d.det_prime());
        (t - count as f64).abs() < 1e-6 * (count as f64).max(1.0) && t.round() as u64 == count
    });
    (agree, equilateral, agree.then_some(count))
}

fn threshold_check(g: &Graph, count: Option<u64>, rng: &mut GraphSampler) -> bool {
    let l = 1.0;
    let delta = 0.9 * threshold_delta(g, l);
    let mut lengths = rng.lengths(g.edge_count(), l, delta);
    lengths[0] = l;
    let Ok(mg) = MetricGraph::new(g.clone(), lengths) else { return false };
    let recovered = tree_estimator(&mg).is_ok_and(|est| est.spread_ok && Some(est.nearest) == count);
    recovered && tree_drift(&mg, l, delta).is_ok_and(|r| r.holds)
}

fn bounds_check(g: &Graph, rng: &mut GraphSampler) -> Result<bool, BoundError> {
    let l = 0.5 + 2.0 * rng.unit();
    // relative spread log-uniform in [1e-6, 0.5]
    let delta = l * 0.5 * 10f64.powf(-5.7 * rng.unit());
    let lengths = rng.lengths(g.edge_count(), l, delta);
    let mg = MetricGraph::new(g.clone(), lengths).map_err(|_| BoundError::InvalidWindow { length: l, delta })?;
    let n = norm_bound(&mg, l, delta)?;
    let mut ok = n.report.holds && n.intermediate.holds;
    ok &= eigenvalue_drift(&mg, l, delta)?.iter().all(|r| r.holds);
    match det_drift(&mg, l, delta) {
        Ok(r) => ok &= r.holds,
        Err(BoundError::DeltaTooLarge { .. }) => {}
        Err(e) => return Err(e),
    }
    ok &= mckay_lower(g)?.holds;
    let up = upper_bounds(g)?;
    Ok(ok && up.vertex_count.holds && up.degree_sum.holds)
}

fn zeta_check(g: &Graph, trial: usize) -> bool {
    let l = REFERENCE_LENGTHS[trial % REFERENCE_LENGTHS.len()];
    match (log_det_via_zeta(g, l), det_prime_equilateral(g, l)) {
        (Ok(z), Ok(d)) => (z.log_det - d.log_det_prime).abs() <= 1e-10,
        _ => false,
    }
}

pub fn run(seed: u64, trials: usize, max_v: usize) -> Result<VerifySummary, MaxVertexError> {
    if !(2..=MAX_VERTICES).contains(&max_v) {
        return Err(MaxVertexError(max_v));
    }
    let mut rng = GraphSampler::new(seed);
    let mut tallies: Vec<Tally> =
        CHECKS.iter().map(|&name| Tally { name, passed: 0, failed: 0, first_failure: None }).collect();
    for trial in 0..trials {
        let g = rng.connected_graph(2, max_v, MAX_EDGES);
        let (agree, equilateral, count) = tree_checks(&g, trial);
        let threshold = threshold_check(&g, count, &mut rng);
        let bounds = bounds_check(&g, &mut rng).unwrap_or(false);
        let zeta = zeta_check(&g, trial);
        for (tally, ok) in tallies.iter_mut().zip([agree, equilateral, threshold, bounds, zeta]) {
            if ok {
                tally.passed += 1;
            } else {
                tally.failed += 1;
                tally.first_failure.get_or_insert(trial);
            }
        }
    }
    let all_passed = tallies.iter().all(|t| t.failed == 0);
    Ok(VerifySummary { schema: SCHEMA, seed, trials, max_v, checks: tallies, all_passed })
}

pub fn render(summary: &VerifySummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verify seed={} trials={} max_v={}", summary.seed, summary.trials, summary.max_v);
    for t in &summary.checks {
        let _ = write!(out, "  {:<24} {:>6} passed {:>6} failed", t.name, t.passed, t.failed);
        if let Some(i) = t.first_failure {
            let _ = write!(out, " (first failure at trial {i})");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "result: {}", if summary.all_passed { "all passed" } else { "FAILURES" });
    out
}

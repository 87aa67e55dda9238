//! The `analyze` and `zeta` reports.

use std::fmt::Write as _;

use qgraph_core::bounds::{
    det_drift, eigenvalue_drift, mckay_lower, norm_bound, relaxed_threshold, upper_bounds, BoundError,
    BoundReport, Sense,
};
use qgraph_core::matrices::{
    combinatorial_laplacian, harmonic_laplacian, log_det_prime, spectrum, weighted_laplacian,
};
use qgraph_core::quantum_det::{det_prime_equilateral, det_prime_friedlander, tree_estimator, tree_value};
use qgraph_core::spanning_trees::{
    count_brute_force, count_det_prime, count_harmonic, count_matrix_tree, count_regular, TreeCountError,
};
use qgraph_core::zeta::{log_det_via_zeta, zeta_direct_sum, zeta_hurwitz, ZetaError};
use qgraph_core::{Graph, MetricGraph};
use serde::Serialize;

use crate::json::{floats, F17};

pub const SCHEMA: u32 = 1;

/// Tolerance on `ln det′` when two routes must agree.
pub const ROUTE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub betti: usize,
    pub diameter: usize,
    pub degrees: Vec<usize>,
    pub lengths: Vec<F17>,
    pub equilateral: bool,
}

#[derive(Debug, Serialize)]
pub struct Determinants {
    pub det_prime_l: F17,
    pub det_prime_delta: F17,
    pub det_prime_r: F17,
    pub det_prime_quantum: F17,
    pub det_prime_quantum_equilateral: Option<F17>,
    pub det_prime_quantum_zeta: Option<F17>,
}

#[derive(Debug, Serialize)]
pub struct TreeCounts {
    pub brute_force: Option<u64>,
    pub minor: Option<u64>,
    pub det_prime_over_v: Option<u64>,
    pub harmonic: Option<u64>,
    pub regular: Option<u64>,
    pub errors: Vec<String>,
}

impl TreeCounts {
    fn values(&self) -> Vec<u64> {
        [self.brute_force, self.minor, self.det_prime_over_v, self.harmonic, self.regular]
            .into_iter()
            .flatten()
            .collect()
    }

    /// The agreed count, if every method ran and they all agree.
    pub fn agreed(&self) -> Option<u64> {
        let values = self.values();
        let first = *values.first()?;
        (self.errors.is_empty() && values.iter().all(|&v| v == first)).then_some(first)
    }
}

#[derive(Debug, Serialize)]
pub struct Estimate {
    pub t_gamma: F17,
    pub nearest: u64,
    pub reference_length: F17,
    pub spread: F17,
    pub threshold: F17,
    pub certified: bool,
    pub relaxed_threshold: Option<F17>,
    pub relaxed_certified: Option<bool>,
    pub star_half_length: Option<bool>,
}

impl Estimate {
    pub fn any_certificate(&self) -> bool {
        self.certified || self.relaxed_certified == Some(true) || self.star_half_length == Some(true)
    }
}

#[derive(Debug, Serialize)]
pub struct BoundEntry {
    pub name: &'static str,
    pub lhs: F17,
    pub rhs: F17,
    pub strict: bool,
    pub holds: bool,
}

impl From<&BoundReport> for BoundEntry {
    fn from(r: &BoundReport) -> Self {
        BoundEntry {
            name: r.name,
            lhs: F17(r.lhs),
            rhs: F17(r.rhs),
            strict: r.sense == Sense::Strict,
            holds: r.holds,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ZetaRow {
    pub s: F17,
    pub hurwitz: F17,
    pub direct: F17,
    pub difference: F17,
    pub tail_bound: F17,
    pub within: bool,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub graph: GraphSummary,
    pub determinants: Determinants,
    pub tree_counts: TreeCounts,
    pub tree_estimate: Estimate,
    pub bounds: Vec<BoundEntry>,
    pub zeta: Option<Vec<ZetaRow>>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
    pub consistent: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Spectrum(#[from] qgraph_core::SpectrumError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("zeta table needs an equilateral graph")]
    NotEquilateral,
}

fn keep(result: Result<u64, TreeCountError>, errors: &mut Vec<String>, method: &str) -> Option<u64> {
    match result {
        Ok(c) => Some(c),
        Err(TreeCountError::TooLarge { .. }) => None,
        Err(e) => {
            errors.push(format!("{method}: {e}"));
            None
        }
    }
}

fn tree_counts(g: &Graph) -> TreeCounts {
    let mut errors = Vec::new();
    let brute_force = keep(count_brute_force(g).map(|t| t.count), &mut errors, "brute_force");
    let minor = keep(count_matrix_tree(g).map(|t| t.count), &mut errors, "minor");
    let det_prime_over_v = keep(count_det_prime(g).map(|t| t.count), &mut errors, "det_prime_over_v");
    let harmonic = keep(count_harmonic(g).map(|t| t.count), &mut errors, "harmonic");
    let regular = match g.regular_degree() {
        Some(d) => keep(count_regular(g, d).map(|t| t.count), &mut errors, "regular"),
        None => None,
    };
    TreeCounts { brute_force, minor, det_prime_over_v, harmonic, regular, errors }
}

/// Hurwitz-formula and direct-sum values of the spectral zeta function.
pub fn zeta_rows(g: &Graph, length: f64, s_values: &[f64], cutoff: f64) -> Result<Vec<ZetaRow>, ZetaError> {
    s_values
        .iter()
        .map(|&s| {
            let h = zeta_hurwitz(g, length, s)?;
            let d = zeta_direct_sum(g, length, s, cutoff)?;
            let tail = d.tail_bound.unwrap_or(f64::INFINITY);
            let diff = h.value - d.value;
            Ok(ZetaRow {
                s: F17(s),
                hurwitz: F17(h.value),
                direct: F17(d.value),
                difference: F17(diff),
                tail_bound: F17(tail),
                // the direct sum omits only positive terms
                within: diff >= -1e-12 * h.value.abs().max(1.0) && diff <= tail,
            })
        })
        .collect()
}

pub struct ZetaRequest<'a> {
    pub s_values: &'a [f64],
    pub cutoff: Option<f64>,
}

/// Default direct-sum cutoff: sixty wavenumber units of the edge length.
pub fn default_cutoff(length: f64) -> f64 {
    60.0 / length
}

pub fn analyze(mg: &MetricGraph, zeta: Option<ZetaRequest<'_>>) -> Result<AnalysisReport, AnalysisError> {
    let g = mg.graph();
    let equilateral = mg.is_equilateral();
    let length = mg.min_length();
    let spread = mg.spread();
    let mut notes = Vec::new();
    let mut checks = Vec::new();

    let log_l = log_det_prime(&spectrum(&combinatorial_laplacian(g))?)?;
    let log_delta = log_det_prime(&spectrum(&harmonic_laplacian(g))?)?;
    let log_r = log_det_prime(&spectrum(&weighted_laplacian(mg))?)?;
    let friedlander = det_prime_friedlander(mg)?;
    let (closed, via_zeta) = if equilateral {
        let closed = det_prime_equilateral(g, length)?;
        let z = log_det_via_zeta(g, length)?;
        checks.push(Check {
            name: "determinant_routes_agree",
            passed: (closed.log_det_prime - friedlander.log_det_prime).abs() <= ROUTE_TOLERANCE,
        });
        checks.push(Check {
            name: "zeta_determinant_agrees",
            passed: (z.log_det - closed.log_det_prime).abs() <= ROUTE_TOLERANCE
                && (z.log_det - z.log_eigen_product).abs() <= ROUTE_TOLERANCE,
        });
        (Some(closed.log_det_prime.exp()), Some(z.det_prime()))
    } else {
        (None, None)
    };

    let counts = tree_counts(g);
    let agreed = counts.agreed();
    checks.push(Check { name: "tree_counts_agree", passed: agreed.is_some() });

    let est = tree_estimator(mg)?;
    let relaxed = match relaxed_threshold(g, length) {
        Ok(t) => Some(t),
        Err(BoundError::NotApplicable { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let estimate = Estimate {
        t_gamma: F17(est.t_gamma),
        nearest: est.nearest,
        reference_length: F17(est.length),
        spread: F17(spread),
        threshold: F17(est.delta_threshold),
        certified: est.spread_ok,
        relaxed_threshold: relaxed.map(F17),
        relaxed_certified: relaxed.map(|t| spread < t),
        star_half_length: est.relaxed_star_ok,
    };
    if equilateral {
        let t = tree_value(g, length, friedlander.det_prime());
        checks.push(Check {
            name: "equilateral_tree_value_is_integral",
            passed: agreed.is_some_and(|c| (t - c as f64).abs() < 1e-6 * (c as f64).max(1.0)),
        });
    }
    if estimate.any_certificate() {
        checks.push(Check { name: "certified_estimate_matches_count", passed: agreed == Some(est.nearest) });
    } else {
        notes.push("spread exceeds every applicable threshold; nearest integer is uncertified".into());
    }

    let mut bounds: Vec<BoundEntry> = Vec::new();
    let nb = norm_bound(mg, length, spread)?;
    bounds.push((&nb.report).into());
    bounds.push((&nb.intermediate).into());
    let drift = eigenvalue_drift(mg, length, spread)?;
    // one entry for the worst index keeps the report size independent of V
    if let Some(worst) = drift.iter().max_by(|a, b| (a.lhs - a.rhs).total_cmp(&(b.lhs - b.rhs))) {
        bounds.push(worst.into());
    }
    match det_drift(mg, length, spread) {
        Ok(r) => bounds.push((&r).into()),
        Err(BoundError::DeltaTooLarge { a, lambda2 }) => {
            notes.push(format!("det_drift not guarded: a = {a} is not below lambda_2 = {lambda2}"))
        }
        Err(e) => return Err(e.into()),
    }
    bounds.push((&mckay_lower(g)?).into());
    let up = upper_bounds(g)?;
    bounds.extend(up.reports().into_iter().map(BoundEntry::from));
    checks.push(Check { name: "bounds_hold", passed: bounds.iter().all(|b| b.holds) });

    let zeta_table = match zeta {
        Some(req) if !req.s_values.is_empty() => {
            if !equilateral {
                return Err(AnalysisError::NotEquilateral);
            }
            let cutoff = req.cutoff.unwrap_or_else(|| default_cutoff(length));
            let rows = zeta_rows(g, length, req.s_values, cutoff)?;
            checks.push(Check { name: "zeta_routes_agree", passed: rows.iter().all(|r| r.within) });
            Some(rows)
        }
        _ => None,
    };

    let consistent = checks.iter().all(|c| c.passed);
    Ok(AnalysisReport {
        schema: SCHEMA,
        graph: GraphSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            betti: g.betti(),
            diameter: g.diameter(),
            degrees: g.degrees(),
            lengths: floats(mg.lengths()),
            equilateral,
        },
        determinants: Determinants {
            det_prime_l: F17(log_l.exp()),
            det_prime_delta: F17(log_delta.exp()),
            det_prime_r: F17(log_r.exp()),
            det_prime_quantum: F17(friedlander.det_prime()),
            det_prime_quantum_equilateral: closed.map(F17),
            det_prime_quantum_zeta: via_zeta.map(F17),
        },
        tree_counts: counts,
        tree_estimate: estimate,
        bounds,
        zeta: zeta_table,
        notes,
        checks,
        consistent,
    })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn opt_f(v: Option<F17>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.0.to_string())
}

pub fn render_zeta(rows: &[ZetaRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>6}  {:>24}  {:>24}  {:>12}  {:>12}  within", "s", "hurwitz", "direct", "difference", "tail_bound");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>6}  {:>24}  {:>24}  {:>12.3e}  {:>12.3e}  {}",
            r.s.0, r.hurwitz.0, r.direct.0, r.difference.0, r.tail_bound.0, r.within
        );
    }
    out
}

pub fn render(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let g = &report.graph;
    let _ = writeln!(out, "graph: V={} E={} beta={} diameter={}", g.vertices, g.edges, g.betti, g.diameter);
    let degrees: Vec<String> = g.degrees.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(out, "degrees: {}", degrees.join(" "));
    if g.equilateral {
        let _ = writeln!(out, "lengths: equilateral, {}", g.lengths[0].0);
    } else {
        let lengths: Vec<String> = g.lengths.iter().map(|l| l.0.to_string()).collect();
        let _ = writeln!(out, "lengths: {}", lengths.join(" "));
    }

    let d = &report.determinants;
    let _ = writeln!(out, "\ndeterminants");
    let _ = writeln!(out, "  det'(L)      = {}", d.det_prime_l.0);
    let _ = writeln!(out, "  det'(Delta)  = {}", d.det_prime_delta.0);
    let _ = writeln!(out, "  det'(R)      = {}", d.det_prime_r.0);
    let _ = writeln!(out, "  det'(quantum) = {} (Friedlander)", d.det_prime_quantum.0);
    if let Some(x) = d.det_prime_quantum_equilateral {
        let _ = writeln!(out, "  det'(quantum) = {} (equilateral closed form)", x.0);
    }
    if let Some(x) = d.det_prime_quantum_zeta {
        let _ = writeln!(out, "  det'(quantum) = {} (zeta regularization)", x.0);
    }

    let t = &report.tree_counts;
    let _ = writeln!(out, "\nspanning trees: {}", opt(t.agreed()));
    let _ = writeln!(
        out,
        "  brute force {}, minor {}, det'/V {}, harmonic {}, regular {}",
        opt(t.brute_force),
        opt(t.minor),
        opt(t.det_prime_over_v),
        opt(t.harmonic),
        opt(t.regular)
    );
    for e in &t.errors {
        let _ = writeln!(out, "  error: {e}");
    }

    let e = &report.tree_estimate;
    let _ = writeln!(out, "\ntree estimate from det'(quantum)");
    let _ = writeln!(out, "  T = {} -> {}", e.t_gamma.0, e.nearest);
    let _ = writeln!(out, "  reference length {}, spread {}", e.reference_length.0, e.spread.0);
    let _ = writeln!(out, "  threshold {} certified {}", e.threshold.0, e.certified);
    let _ = writeln!(out, "  relaxed threshold {} certified {}", opt_f(e.relaxed_threshold), opt(e.relaxed_certified));
    if let Some(s) = e.star_half_length {
        let _ = writeln!(out, "  star with spread <= length/2: {s}");
    }

    let _ = writeln!(out, "\nbounds (lhs below rhs)");
    for b in &report.bounds {
        let op = if b.strict { "<" } else { "<=" };
        let verdict = if b.holds { "holds" } else { "FAILS" };
        let _ = writeln!(out, "  {:<24} {:>24} {:<2} {:<24} {}", b.name, b.lhs.0, op, b.rhs.0, verdict);
    }

    if let Some(rows) = &report.zeta {
        let _ = writeln!(out, "\nspectral zeta");
        out.push_str(&render_zeta(rows));
    }

    for n in &report.notes {
        let _ = writeln!(out, "\nnote: {n}");
    }
    let _ = writeln!(out, "\nchecks");
    for c in &report.checks {
        let _ = writeln!(out, "  {:<36} {}", c.name, if c.passed { "pass" } else { "FAIL" });
    }
    let _ = writeln!(out, "status: {}", if report.consistent { "consistent" } else { "INCONSISTENT" });
    out
}

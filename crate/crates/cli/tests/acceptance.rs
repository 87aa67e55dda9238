//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::{E, PI};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qgraph_core::bounds::{
    det_drift, eigenvalue_drift, mckay_lower, norm_bound, product_difference, tree_drift, upper_bounds,
    BoundError,
};
use qgraph_core::fixtures::{self, catalog, GraphSampler};
use qgraph_core::quantum_det::{
    det_prime_equilateral, det_prime_friedlander, threshold_delta, tree_estimator, tree_value,
};
use qgraph_core::spanning_trees::{count_all, count_brute_force};
use qgraph_core::spectrum_oracle::{enumerate_equilateral, secular_solve};
use qgraph_core::zeta::{log_det_via_zeta, zeta_direct_sum, zeta_hurwitz};
use qgraph_core::{Graph, MetricGraph};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn kirchhoff_catalog() -> Outcome {
    let start = Instant::now();
    let graphs = catalog(7);
    for (i, g) in graphs.iter().enumerate() {
        let s = count_all(g).map_err(|e| format!("graph {i}: {e}"))?;
        let brute = s.brute_force.ok_or_else(|| format!("graph {i}: brute force unavailable"))?;
        if !(brute == s.minor && brute == s.harmonic && brute == s.det_prime_over_v) {
            return Err(format!("graph {i}: {s:?}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} graphs in {:.2}s", graphs.len(), elapsed.as_secs_f64()))
}

fn complete_bipartite_closed_form() -> Outcome {
    let mut checked = 0;
    for (m, p) in [(1, 3), (2, 4), (3, 3)] {
        let g = fixtures::complete_bipartite(m, p);
        for l in [0.5f64, 1.0, 2.0] {
            let mp = (m * p) as i32;
            let expected = 2f64.powi(mp) * l.powi(mp - m as i32 - p as i32 + 2);
            let mg = MetricGraph::equilateral(g.clone(), l).map_err(|e| e.to_string())?;
            let routes = [
                det_prime_equilateral(&g, l).map_err(|e| e.to_string())?.det_prime(),
                det_prime_friedlander(&mg).map_err(|e| e.to_string())?.det_prime(),
            ];
            for got in routes {
                if relative_gap(got, expected) > 1e-9 {
                    return Err(format!("K_{{{m},{p}}} ℓ={l}: {got} vs {expected}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} determinants"))
}

fn generic_star() -> Outcome {
    let mut rng = GraphSampler::new(3);
    let mut checked = 0;
    for leaves in 2..=6 {
        for _ in 0..20 {
            let lengths = rng.lengths(leaves, 1.0, 1.0);
            let sum: f64 = lengths.iter().sum();
            let expected = 2f64.powi(leaves as i32) / leaves as f64 * sum;
            let mg = MetricGraph::new(fixtures::star(leaves), lengths).map_err(|e| e.to_string())?;
            let got = det_prime_friedlander(&mg).map_err(|e| e.to_string())?.det_prime();
            if relative_gap(got, expected) > 1e-9 {
                return Err(format!("star E={leaves}: {got} vs {expected}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} stars"))
}

fn equilateral_recovery() -> Outcome {
    let mut rng = GraphSampler::new(4);
    for trial in 0..200 {
        let g = rng.connected_graph(2, 8, 24);
        let count = count_brute_force(&g).map_err(|e| e.to_string())?.count;
        for l in [0.5, 1.0, E] {
            let mg = MetricGraph::equilateral(g.clone(), l).map_err(|e| e.to_string())?;
            let routes = [
                det_prime_equilateral(&g, l).map_err(|e| e.to_string())?.det_prime(),
                det_prime_friedlander(&mg).map_err(|e| e.to_string())?.det_prime(),
            ];
            for d in routes {
                let t = tree_value(&g, l, d);
                if t.round() as u64 != count {
                    return Err(format!("trial {trial} ℓ={l}: T = {t}, brute force {count}"));
                }
            }
        }
    }
    Ok("200 graphs × 3 lengths × 2 routes".into())
}

fn threshold_recovery() -> Outcome {
    let mut rng = GraphSampler::new(5);
    let l = 1.0;
    for trial in 0..500 {
        let g = rng.connected_graph(2, 6, 15);
        let delta = 0.9 * threshold_delta(&g, l);
        let mut lengths = rng.lengths(g.edge_count(), l, delta);
        lengths[0] = l;
        let mg = MetricGraph::new(g.clone(), lengths).map_err(|e| e.to_string())?;
        let count = count_brute_force(&g).map_err(|e| e.to_string())?.count;
        let est = tree_estimator(&mg).map_err(|e| e.to_string())?;
        if !est.spread_ok || est.nearest != count {
            return Err(format!("trial {trial}: nearest {} vs {count}, spread_ok {}", est.nearest, est.spread_ok));
        }
        let drift = tree_drift(&mg, l, delta).map_err(|e| e.to_string())?;
        if !drift.holds {
            return Err(format!("trial {trial}: {drift:?}"));
        }
    }
    Ok("500 trials".into())
}

fn equilateral_fixtures() -> [(&'static str, Graph); 4] {
    [
        ("P2", fixtures::path(2)),
        ("star3", fixtures::star(3)),
        ("C3", fixtures::cycle(3)),
        ("K24", fixtures::complete_bipartite(2, 4)),
    ]
}

fn zeta_cross_check() -> Outcome {
    let mut rows = 0;
    for (name, g) in equilateral_fixtures() {
        for l in [1.0, PI] {
            let cutoff = 60.0 / l;
            for s in [1.5, 2.0, 3.0] {
                let h = zeta_hurwitz(&g, l, s).map_err(|e| e.to_string())?;
                let d = zeta_direct_sum(&g, l, s, cutoff).map_err(|e| e.to_string())?;
                let tail = d.tail_bound.ok_or_else(|| format!("{name}: direct sum has no tail bound"))?;
                if (h.value - d.value).abs() > tail {
                    return Err(format!("{name} ℓ={l} s={s}: |{} - {}| exceeds tail {tail}", h.value, d.value));
                }
                rows += 1;
            }
            let z = log_det_via_zeta(&g, l).map_err(|e| e.to_string())?.det_prime();
            let c = det_prime_equilateral(&g, l).map_err(|e| e.to_string())?.det_prime();
            if relative_gap(z, c) > 1e-10 {
                return Err(format!("{name} ℓ={l}: zeta det {z} vs closed form {c}"));
            }
        }
    }
    Ok(format!("{rows} zeta rows, 8 determinants"))
}

fn spectrum_oracle() -> Outcome {
    let mut compared = 0;
    for (name, g) in equilateral_fixtures() {
        for l in [1.0, PI, 0.7] {
            let cutoff = 15.0 / l;
            let e = enumerate_equilateral(&g, l, cutoff).map_err(|e| e.to_string())?;
            let mg = MetricGraph::equilateral(g.clone(), l).map_err(|e| e.to_string())?;
            let s = secular_solve(&mg, cutoff).map_err(|e| e.to_string())?;
            if e.ks.len() != s.ks.len() {
                return Err(format!("{name} ℓ={l}: {} vs {} eigenvalues", e.ks.len(), s.ks.len()));
            }
            for (a, b) in e.ks.iter().zip(&s.ks) {
                if (a - b).abs() >= 1e-7 {
                    return Err(format!("{name} ℓ={l}: {a} vs {b}"));
                }
            }
            compared += e.ks.len();
        }
    }
    let interval = fixtures::path(2);
    let neumann: Vec<f64> = (0..=4).map(f64::from).collect();
    let e = enumerate_equilateral(&interval, PI, 15.0 / PI).map_err(|e| e.to_string())?;
    let s = secular_solve(&MetricGraph::equilateral(interval, PI).map_err(|e| e.to_string())?, 15.0 / PI)
        .map_err(|e| e.to_string())?;
    for (label, ks) in [("enumeration", &e.ks), ("secular", &s.ks)] {
        if ks.len() != neumann.len() || ks.iter().zip(&neumann).any(|(a, b)| (a - b).abs() >= 1e-7) {
            return Err(format!("P2 ℓ=π {label}: {ks:?}"));
        }
    }
    Ok(format!("{compared} eigenvalues matched, P2 gives 0..4"))
}

fn bounds_suite() -> Outcome {
    let mut rng = GraphSampler::new(8);
    let mut guarded = 0;
    for trial in 0..500 {
        let g = rng.connected_graph(2, 10, 24);
        let l = 0.5 + 2.0 * rng.unit();
        let delta = l * 0.5 * 10f64.powf(-5.7 * rng.unit());
        let lengths = rng.lengths(g.edge_count(), l, delta);
        let mg = MetricGraph::new(g.clone(), lengths).map_err(|e| e.to_string())?;
        let fail = |what: String| Err(format!("trial {trial}: {what}"));
        let n = norm_bound(&mg, l, delta).map_err(|e| e.to_string())?;
        if !(n.report.holds && n.intermediate.holds) {
            return fail(format!("{n:?}"));
        }
        for r in eigenvalue_drift(&mg, l, delta).map_err(|e| e.to_string())? {
            if !r.holds {
                return fail(format!("{r:?}"));
            }
        }
        match det_drift(&mg, l, delta) {
            Ok(r) if r.holds => guarded += 1,
            Ok(r) => return fail(format!("{r:?}")),
            Err(BoundError::DeltaTooLarge { .. }) => {}
            Err(e) => return fail(e.to_string()),
        }
        let lower = mckay_lower(&g).map_err(|e| e.to_string())?;
        let up = upper_bounds(&g).map_err(|e| e.to_string())?;
        for r in [&lower, &up.vertex_count, &up.degree_sum] {
            if !r.holds {
                return fail(format!("{r:?}"));
            }
        }
    }
    let lemma = product_difference(&[2.0, 3.0, 4.0], 1.0).map_err(|e| e.to_string())?;
    if !(lemma.lhs == 36.0 && lemma.rhs == 96.0 && lemma.holds) {
        return Err(format!("self-test: {lemma:?}"));
    }
    Ok(format!("500 instances, {guarded} guarded det_drift, 36 < 96"))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qgraph"))
            .args(["verify", "--seed", "42", "--trials", "100", "--max-v", "7", "--json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() {
        return Err(format!("verify exited with {}", a.status));
    }
    if a.stdout != b.stdout {
        return Err("summaries differ".into());
    }
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Kirchhoff consistency on the V ≤ 7 catalog", kirchhoff_catalog),
        ("complete bipartite closed form", complete_bipartite_closed_form),
        ("generic star determinant", generic_star),
        ("equilateral tree recovery", equilateral_recovery),
        ("threshold tree recovery", threshold_recovery),
        ("zeta cross-check", zeta_cross_check),
        ("spectrum oracle", spectrum_oracle),
        ("bounds suite", bounds_suite),
        ("verify determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS  [{detail}]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} ({name}): FAIL  [{why}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

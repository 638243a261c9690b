//! End-to-end acceptance checks, one line per criterion.
//!
//! Runs without the libtest harness so every verdict line is printed. The
//! SAT solver is the `borsuk-kissat` binary built alongside this test.
//! Two claims are false as stated. Their checks report a known failure
//! only when the observed deviation is exactly the documented one, so any
//! other discrepancy still fails the run.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use borsuk_core::coloring::{encode_coloring, exact_chromatic_small, verify_coloring, SatOutcome};
use borsuk_core::configs::verify_classification_claims;
use borsuk_core::cover::{
    build_cover_10_4, build_tnk2, verify_cover_membership, verify_n9, verify_prop8, U1, U2, V, W,
};
use borsuk_core::cube::{distance, group_order, parse_mask};
use borsuk_core::graph::{connected_components, parity_bipartition, trim};
use borsuk_core::search::run_case;
use borsuk_core::{BitGraph, CaseSpec, DistanceGraph, Isometry, RunOptions, SatSolver, VertexSet};

enum Verdict {
    Pass(String),
    Known(String),
    Fail(String),
}

type Check = Result<Verdict, String>;
type Criterion = (u8, &'static str, fn() -> Check);

fn solver() -> SatSolver {
    SatSolver::new(PathBuf::from(env!("CARGO_BIN_EXE_borsuk-kissat")))
}

fn check(cond: bool, ok: String, bad: impl FnOnce() -> String) -> Check {
    Ok(if cond {
        Verdict::Pass(ok)
    } else {
        Verdict::Fail(bad())
    })
}

fn parity_law() -> Check {
    let mut graphs = 0;
    for n in 1..=10usize {
        for k in (1..=n as u8).step_by(2) {
            let g = DistanceGraph::full_cube(n, k).map_err(|e| e.to_string())?;
            let coloring = parity_bipartition(n, k).map_err(|e| e.to_string())?;
            if !verify_coloring(g.graph(), &coloring).map_err(|e| e.to_string())?
                || coloring.color_count() != 2
            {
                return Ok(Verdict::Fail(format!(
                    "parity coloring improper for n={n} k={k}"
                )));
            }
            graphs += 1;
        }
    }
    Ok(Verdict::Pass(format!(
        "{graphs} odd-k cube graphs properly 2-colored by weight parity"
    )))
}

fn component_structure() -> Check {
    let mut two_equal = 0;
    let mut antipodal = Vec::new();
    for n in 2..=8usize {
        for k in (2..=n as u8).step_by(2) {
            let comps =
                connected_components(&DistanceGraph::full_cube(n, k).map_err(|e| e.to_string())?);
            let even_inside = comps.iter().all(|c| {
                c.masks()
                    .iter()
                    .all(|&a| c.masks().iter().all(|&b| distance(a, b).is_multiple_of(2)))
            });
            if !even_inside {
                return Ok(Verdict::Fail(format!(
                    "odd distance inside a component, n={n} k={k}"
                )));
            }
            if comps.len() == 2 && comps[0].len() == comps[1].len() {
                two_equal += 1;
                continue;
            }
            // At k = n each vertex sees only its complement.
            let full = (1u16 << n) - 1;
            let pairs = comps
                .iter()
                .all(|c| c.len() == 2 && c.masks()[0] ^ c.masks()[1] == full);
            if usize::from(k) == n && pairs && comps.len() == 1 << (n - 1) {
                antipodal.push(n);
            } else {
                return Ok(Verdict::Fail(format!(
                    "n={n} k={k}: {} components",
                    comps.len()
                )));
            }
        }
    }
    let summary = format!("{two_equal} graphs have 2 equal even-distance components");
    Ok(if antipodal.is_empty() {
        Verdict::Pass(summary)
    } else {
        Verdict::Known(format!(
            "{summary}; k=n for n in {antipodal:?} splits into 2^(n-1) antipodal pairs, not 2 components"
        ))
    })
}

fn group_action() -> Check {
    let order = group_order(10).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..10_000 {
        let g = Isometry::random(10, &mut rng).map_err(|e| e.to_string())?;
        let p: [u16; 3] = [
            rng.random_range(0..1024),
            rng.random_range(0..1024),
            rng.random_range(0..1024),
        ];
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            if distance(g.apply_mask(p[a]), g.apply_mask(p[b])) != distance(p[a], p[b]) {
                return Ok(Verdict::Fail("distance not preserved".into()));
            }
        }
    }
    let expected: u64 = (1..=10u64).product::<u64>() << 10;
    check(
        order == expected && order == 3_715_891_200,
        format!("|I_10| = {order}; 10^4 random triples preserved"),
        || format!("group order {order}"),
    )
}

fn clique_classes() -> Check {
    let r = verify_classification_claims(20);
    let summary: Vec<String> = r
        .counts
        .iter()
        .map(|c| format!("{}:{}", c.family, c.classes))
        .collect();
    check(
        r.claims_hold(),
        format!(
            "classes {}; XOR disagreements {}",
            summary.join(" "),
            r.k4_xor_disagreements
        ),
        || format!("{r:?}"),
    )
}

fn cover_sets_colored() -> Check {
    // Independent scans for the set sizes.
    let m = |s: &str| parse_mask(s).unwrap();
    let u1 = [0, m(U1), m(U2)];
    let trim_u1 = (0..1024u16)
        .filter(|&v| u1.iter().all(|&s| distance(s, v) <= 4))
        .count();
    let w: BTreeSet<u16> = (0..1024u16).filter(|v| v.count_ones() <= 2).collect();
    let mut u2w = w.clone();
    u2w.extend([m(U1)].into_iter().chain(V.iter().map(|s| m(s))));
    let mut u3w = w.clone();
    u3w.extend([m(U1), m(V[0])].into_iter().chain(W.iter().map(|s| m(s))));
    let expected = [trim_u1, u2w.len(), u3w.len()];

    let system = build_cover_10_4().map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = system.sets.iter().map(VertexSet::len).collect();
    if sizes != expected {
        return Ok(Verdict::Fail(format!("sizes {sizes:?}, scan {expected:?}")));
    }
    let verdict =
        verify_prop8(Duration::from_secs(1800), Some(&solver())).map_err(|e| e.to_string())?;
    let outcomes: Vec<String> = verdict
        .sets
        .iter()
        .map(|s| format!("{}={}", s.label, s.outcome))
        .collect();
    check(
        verdict.passed,
        format!("sizes {sizes:?}; {}", outcomes.join(" ")),
        || outcomes.join(" "),
    )
}

fn n9_colorings() -> Check {
    let verdict =
        verify_n9(Duration::from_secs(1800), Some(&solver())).map_err(|e| e.to_string())?;
    let outcomes: Vec<String> = verdict
        .sets
        .iter()
        .map(|s| format!("k={}:{}", s.k, s.outcome))
        .collect();
    let missed: Vec<_> = verdict.sets.iter().filter(|s| !s.colored()).collect();
    Ok(if verdict.passed {
        Verdict::Pass(outcomes.join(" "))
    } else if missed.len() == 1 && missed[0].k == 4 && missed[0].outcome == "unsat" {
        // T(9,4,2) has no 10-coloring; the solver proves it.
        Verdict::Known(format!(
            "{}; T(9,4,2) is not 10-colorable",
            outcomes.join(" ")
        ))
    } else {
        Verdict::Fail(outcomes.join(" "))
    })
}

fn anchor_rows() -> Check {
    let options = RunOptions {
        solver: Some(solver()),
        jobs: 1,
        ..Default::default()
    };
    let mut parts = Vec::new();
    for row in [1u8, 4] {
        let r =
            run_case(&CaseSpec::table_row(row).unwrap(), &options).map_err(|e| e.to_string())?;
        if r.leaves != 1 || !r.not_colored.is_empty() || r.truncated {
            return Ok(Verdict::Fail(format!(
                "row {row}: leaves={} not_colored={:?}",
                r.leaves, r.not_colored_outcomes
            )));
        }
        parts.push(format!("row {row}: 1 leaf colored in {:.2}s", r.elapsed_s));
    }
    Ok(Verdict::Pass(parts.join("; ")))
}

fn truncated_rows() -> Check {
    let mut parts = Vec::new();
    for row in [2u8, 3, 5, 6, 7, 8] {
        let mut spec = CaseSpec::table_row(row).unwrap();
        spec.leaf_budget = Some(50);
        let first = run_case(
            &spec,
            &RunOptions {
                solver: Some(solver()),
                jobs: 1,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let second = run_case(
            &spec,
            &RunOptions {
                solver: Some(solver()),
                jobs: 2,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        if first.leaves != 50 || !first.truncated {
            return Ok(Verdict::Fail(format!(
                "row {row}: {} leaves, truncated={}",
                first.leaves, first.truncated
            )));
        }
        if first.leaf_digest != second.leaf_digest || first.leaves != second.leaves {
            return Ok(Verdict::Fail(format!(
                "row {row}: leaf sequence differs between runs"
            )));
        }
        parts.push(format!("r{row}:{}/{}", first.colored, first.leaves));
    }
    Ok(Verdict::Pass(format!(
        "50-leaf budgets reached, sequences identical across runs (colored/leaves {})",
        parts.join(" ")
    )))
}

fn random_graph(rng: &mut ChaCha8Rng) -> BitGraph {
    let n = rng.random_range(1..=12);
    let p: f64 = rng.random_range(0.2..0.9);
    let mut g = BitGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                g.add_edge(a, b);
            }
        }
    }
    g
}

fn sat_matches_exact() -> Check {
    let s = solver();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut decisions = 0;
    for i in 0..200 {
        let g = random_graph(&mut rng);
        let chi = exact_chromatic_small(&g).map_err(|e| e.to_string())?;
        for c in [chi.saturating_sub(1), chi] {
            if c == 0 {
                continue;
            }
            let sat = match s
                .solve(&encode_coloring(&g, c), Duration::from_secs(30))
                .map_err(|e| e.to_string())?
            {
                SatOutcome::Sat(_) => true,
                SatOutcome::Unsat => false,
                SatOutcome::TimedOut => {
                    return Ok(Verdict::Fail(format!("graph {i}: solver timed out")))
                }
            };
            if sat != (c >= chi) {
                return Ok(Verdict::Fail(format!(
                    "graph {i}: chi={chi}, SAT says {c}-colorable={sat}"
                )));
            }
            decisions += 1;
        }
    }
    Ok(Verdict::Pass(format!(
        "{decisions} SAT decisions agree with branch and bound"
    )))
}

fn trim_oracles() -> Check {
    let mut sizes = Vec::new();
    for k in [2u8, 4, 6] {
        let u = if k == 2 { 0 } else { (1u16 << k) - 1 };
        let seeds: Vec<u16> = if k == 2 { vec![0] } else { vec![0, u] };
        let got = trim(10, k, &VertexSet::from_masks(10, seeds.clone()).unwrap())
            .map_err(|e| e.to_string())?;
        let scan = (0..1024u16)
            .filter(|&v| seeds.iter().all(|&s| (v ^ s).count_ones() <= u32::from(k)))
            .count();
        if got.len() != scan {
            return Ok(Verdict::Fail(format!(
                "k={k}: trim {} vs scan {scan}",
                got.len()
            )));
        }
        sizes.push(got.len());
    }
    check(
        sizes == [56, 190, 692],
        format!("sizes {sizes:?} match scans"),
        || format!("sizes {sizes:?}"),
    )
}

fn cover_membership() -> Check {
    let r = verify_cover_membership(100_000, 0).map_err(|e| e.to_string())?;
    check(
        r.failures.is_empty() && r.samples == 100_000,
        format!(
            "{} samples, {} parity classes placed (triangle {}, sunflower {}, five-set {}, trivial {})",
            r.samples, r.parts, r.via_triangle, r.via_sunflower, r.via_five_set, r.trivial
        ),
        || format!("{} failures, first {:?}", r.failures.len(), r.failures.first()),
    )
}

fn dimacs_golden() -> Check {
    let golden = |name: &str| {
        std::fs::read_to_string(
            PathBuf::from(env!("CARGO_MANIFEST_DIR"))
                .join("tests/golden")
                .join(name),
        )
        .unwrap()
    };
    let c5 = BitGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
    let path = BitGraph::from_edges(3, [(0, 1), (1, 2)]);
    let cases = [
        ("k2_c1.cnf", encode_coloring(&BitGraph::complete(2), 1)),
        ("path3_c2.cnf", encode_coloring(&path, 2)),
        ("c5_c3.cnf", encode_coloring(&c5, 3)),
    ];
    for (name, f) in &cases {
        if f.to_dimacs() != golden(name) {
            return Ok(Verdict::Fail(format!("{name} differs from golden")));
        }
    }
    // Colored outcomes are re-verified inside the pipeline; spot-check one here.
    let g = DistanceGraph::build(&build_tnk2(10, 2).unwrap(), 2).unwrap();
    let s = solver();
    match s
        .solve(&encode_coloring(g.graph(), 11), Duration::from_secs(60))
        .map_err(|e| e.to_string())?
    {
        SatOutcome::Sat(model) => {
            let a = borsuk_core::coloring::decode_coloring(g.graph().vertex_count(), 11, &model)
                .map_err(|e| e.to_string())?;
            check(
                verify_coloring(g.graph(), &a).unwrap(),
                "3 golden encodings byte-equal; SAT model re-verified".into(),
                || "SAT model is an improper coloring".into(),
            )
        }
        other => Ok(Verdict::Fail(format!(
            "T(10,2,2) with 11 colors: {other:?}"
        ))),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "parity law", parity_law),
        (2, "component structure", component_structure),
        (3, "group order and action", group_action),
        (4, "clique classification", clique_classes),
        (5, "(10,4) cover sets 11-colorable", cover_sets_colored),
        (6, "n=9 colorings", n9_colorings),
        (7, "anchor rows 1 and 4", anchor_rows),
        (8, "truncated deep rows", truncated_rows),
        (9, "SAT vs exact oracle", sat_matches_exact),
        (10, "trim oracles", trim_oracles),
        (11, "cover membership", cover_membership),
        (12, "DIMACS conformance", dimacs_golden),
    ];
    let filter: Option<u8> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = 0;
    let mut known = 0;
    for (id, name, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let start = Instant::now();
        let verdict = run().unwrap_or_else(|e| Verdict::Fail(format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Verdict::Pass(detail) => {
                println!("criterion {id:>2} PASS [{secs:.1}s] {name}: {detail}")
            }
            Verdict::Known(detail) => {
                known += 1;
                println!("criterion {id:>2} FAIL (known) [{secs:.1}s] {name}: {detail}");
            }
            Verdict::Fail(detail) => {
                unexpected += 1;
                println!("criterion {id:>2} FAIL [{secs:.1}s] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {unexpected} unexpected failure(s), {known} known failure(s)");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

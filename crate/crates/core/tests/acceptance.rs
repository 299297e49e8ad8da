//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use racg::coloring::chromatic_coloring;
use racg::embed::{phi_c, phi_c_along};
use racg::geometry::ball;
use racg::harness::{builtin_group, run_suite, Suite, TestGroup, VerificationReport};
use racg::{validate_coloring, Coloring, CommutationGraph, Gen, GroupElement, SeparationParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(suite: Suite, group: &str, radius: usize) -> VerificationReport {
    let tg = TestGroup::builtin(group).expect("builtin group");
    let params = SeparationParams::new(tg.coloring.n(), 3);
    let report = run_suite(suite, &tg, radius, &params, SEED).expect("suite runs");
    for f in report.failures.iter().take(5) {
        eprintln!("    {suite} on {group}: {}", serde_json::to_string(f).unwrap());
    }
    report
}

fn suites(list: &[(Suite, &str, usize)]) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for &(suite, group, radius) in list {
        let report = run(suite, group, radius);
        passed &= report.passed();
        parts.push(format!(
            "{suite}/{group}@{radius}: {} checks, {} failures",
            report.checks_run,
            report.total_failures()
        ));
    }
    Outcome { passed, detail: parts.join("; ") }
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    for group in ["hexagon", "pentagon"] {
        let n = TestGroup::builtin(group).unwrap().coloring.n() as u64;
        let params = SeparationParams::new(n as usize, 3);
        ok &= (1..=20).all(|i| params.nu(i) == (4 * n * i as u64).max(8));
    }
    let mut out = suites(&[(Suite::LocalIsometry, "hexagon", 6), (Suite::LocalIsometry, "pentagon", 6)]);
    if !ok {
        out.passed = false;
        out.detail.push_str("; ν(i) differs from max(4ni, 8)");
    }
    out
}

fn criterion_4() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for group in ["hexagon", "pentagon"] {
        let report = run(Suite::Separation, group, 6);
        passed &= report.passed();
        parts.push(format!(
            "{group}: {} reflections, {} label collisions, {} failures",
            report.stats["reflections"],
            report.stats["collisions"],
            report.total_failures()
        ));
    }
    Outcome { passed, detail: parts.join("; ") }
}

/// A random reduced word for `a`: a random walk on swaps of adjacent
/// commuting letters, starting from the normal form.
fn shuffled_word(g: &CommutationGraph, a: &GroupElement, rng: &mut ChaCha8Rng) -> Vec<Gen> {
    let mut w = a.letters().to_vec();
    if w.len() < 2 {
        return w;
    }
    for _ in 0..8 * w.len() {
        let i = rng.gen_range(0..w.len() - 1);
        if g.commute(w[i], w[i + 1]) {
            w.swap(i, i + 1);
        }
    }
    w
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = 0;
    let mut failures = 0;
    let mut distinct_words = 0;
    for group in ["hexagon", "pentagon", "cube-3", "free-2"] {
        let tg = TestGroup::builtin(group).unwrap();
        let g = &tg.graph;
        let b = ball(g, 7).unwrap();
        let pool: Vec<&GroupElement> = b.elements().iter().filter(|a| a.len() >= 2).collect();
        for _ in 0..200 {
            let a = pool[rng.gen_range(0..pool.len())];
            for _ in 0..3 {
                let w = shuffled_word(g, a, &mut rng);
                if w != a.letters() {
                    distinct_words += 1;
                }
                for c in tg.coloring.colours() {
                    checks += 1;
                    if phi_c(g, a, &tg.coloring, c).unwrap() != phi_c_along(g, &w, &tg.coloring, c).unwrap() {
                        failures += 1;
                    }
                }
            }
        }
    }
    Outcome {
        passed: failures == 0,
        detail: format!("{checks} comparisons over 4 groups ({distinct_words} words differ from the normal form), {failures} failures"),
    }
}

fn graph(k: usize, edges: &[(usize, usize)]) -> CommutationGraph {
    let names: Vec<String> = (1..=k).map(|i| format!("s{i}")).collect();
    let edges: Vec<[String; 2]> = edges.iter().map(|&(i, j)| [names[i].clone(), names[j].clone()]).collect();
    CommutationGraph::new(&names, edges).unwrap()
}

/// Chromatic number by trying every assignment with `k = 1, 2, …` colours.
fn brute_force_chromatic(k: usize, edges: &[(usize, usize)]) -> usize {
    (1..=k.max(1))
        .find(|&colours| {
            let total = colours.pow(k as u32);
            (0..total).any(|code| {
                let mut c = vec![0; k];
                let mut rest = code;
                for slot in c.iter_mut() {
                    *slot = rest % colours;
                    rest /= colours;
                }
                edges.iter().all(|&(i, j)| c[i] != c[j])
            })
        })
        .unwrap()
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let expect = |name: &str, n: usize, failures: &mut Vec<String>| {
        let g = builtin_group(name).unwrap();
        let col = chromatic_coloring(&g).unwrap();
        if col.n() != n || !validate_coloring(&g, &col) {
            failures.push(format!("{name}: {} colours", col.n()));
        }
    };
    expect("hexagon", 2, &mut failures);
    expect("pentagon", 3, &mut failures);
    for k in 1..=8 {
        expect(&format!("cube-{k}"), k, &mut failures);
        expect(&format!("free-{k}"), 1, &mut failures);
    }

    // Every graph on at most 5 vertices, then seeded random graphs on 6 to 8.
    let mut graphs: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
    for k in 1..=5 {
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        for mask in 0u32..1 << pairs.len() {
            graphs.push((k, pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &p)| p).collect()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..300 {
        let k = rng.gen_range(6..=8);
        let density = rng.gen_range(0.1..0.9);
        let edges = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|_| rng.gen_bool(density)).collect();
        graphs.push((k, edges));
    }
    for (k, edges) in &graphs {
        let g = graph(*k, edges);
        let col: Coloring = chromatic_coloring(&g).unwrap();
        let optimum = brute_force_chromatic(*k, edges);
        if col.n() != optimum || !validate_coloring(&g, &col) {
            failures.push(format!("{k} vertices {edges:?}: solver {} vs brute force {optimum}", col.n()));
        }
    }
    Outcome {
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("builtins as expected; {} graphs on ≤ 8 vertices match brute force", graphs.len())
        } else {
            failures.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let hex_pent = |suite| [(suite, "hexagon", 6), (suite, "pentagon", 6)];
    let mut word_suites = Vec::new();
    for group in ["hexagon", "pentagon", "cube-3", "free-2"] {
        let big = if group == "free-2" { 10 } else { 6 };
        word_suites.push((Suite::NormalForm, group, big));
        word_suites.push((Suite::Halfspace, group, big));
        word_suites.push((Suite::Median, group, if group == "free-2" { 10 } else { 5 }));
        word_suites.push((Suite::Walls, group, big));
    }

    let criteria: Vec<Criterion> = vec![
        ("1 μ is an isometry on B(1,6)", Box::new(move || suites(&hex_pent(Suite::IsometryMu)))),
        ("2 ψ satisfies d/16n ≤ dψ ≤ d on B(1,6)", Box::new(move || suites(&hex_pent(Suite::BilipschitzPsi)))),
        ("3 ψ is isometric on radius-3 balls in B(1,6)", Box::new(criterion_3)),
        ("4 equal fin labels imply mirror distance ≥ 4ni", Box::new(criterion_4)),
        (
            "5 representation: involutions, multiplicativity, faithfulness, 3^ℓ bound, σ at ν=2",
            Box::new(|| suites(&[(Suite::Representation, "hexagon", 8), (Suite::Representation, "pentagon", 8)])),
        ),
        ("6 word combinatorics, halfspaces, medians, walls", Box::new(move || suites(&word_suites))),
        ("7 φ_c is independent of the reduced word", Box::new(criterion_7)),
        ("8 chromatic solver is exact", Box::new(criterion_8)),
    ];

    let mut all = true;
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = check();
        all &= outcome.passed;
        println!(
            "criterion {name}: {} ({:.1}s) {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

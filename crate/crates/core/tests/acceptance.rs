//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcp3::coloring::digits;
use vcp3::convolution::{convolve_fast, convolve_naive, SetFunction, INF};
use vcp3::cutcount::{
    count_parity_tables, decide_constrained_cvcp3, CountOptions, Decision, WeightAssignment,
};
use vcp3::decomposition::{
    heuristic_decompose, make_nice, make_nice_rooted, validate_nice, NodeKind, Strategy, TreeDecomposition,
};
use vcp3::generate::{generate, Family, InstanceSpec};
use vcp3::oracle::{brute_cvcp3, brute_vcp3, count_cut_pairs, join_by_pair_enumeration};
use vcp3::vcp3::{solve_vcp3, table_join, DpTable, SolveOptions, UNREACHABLE};
use vcp3::{is_vcp3_set, Graph, VertexSet};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn vcp3_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let instances = common::corpus(300, 14, 10_000);
    for (name, g) in &instances {
        let nd = common::nice(g);
        let sol = solve_vcp3(g, &nd, SolveOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let want = brute_vcp3(g).unwrap().size;
        ensure(sol.size == want, || format!("{name}: solver {} vs brute force {want}", sol.size))?;
        ensure(is_vcp3_set(g, &sol.witness) && sol.witness.len() == sol.size, || {
            format!("{name}: bad witness {}", sol.witness)
        })?;
    }
    Ok(format!("{} instances, {:.1}s", instances.len(), start.elapsed().as_secs_f64()))
}

fn join_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pairs = 0;
    let mut largest = 0;
    while pairs < 100 {
        let shared = pairs % 6;
        let (a, b, c) = (shared, shared + 1, shared + 2);
        let bag = |extra: usize| (0..shared).chain([extra]).collect::<Vec<_>>();
        let td = TreeDecomposition::new(vec![bag(a), bag(b), bag(c)], vec![(0, 1), (0, 2)]);
        let g = Graph::from_edges(shared + 3, (0..shared).map(|v| (v, a))).unwrap();
        let nd = make_nice_rooted(&td, &g, 0).unwrap();
        let t = (0..nd.len()).find(|&t| nd.node(t).kind == NodeKind::Join).ok_or("no join node")?;
        let k = nd.node(t).bag.len();
        largest = largest.max(k);
        let mut random = |node: usize| DpTable {
            node,
            values: (0..3usize.pow(k as u32))
                .map(|f| {
                    let floor = digits(f, k, 3).iter().filter(|&&d| d == 0).count() as u32;
                    if rng.gen_bool(0.2) { UNREACHABLE } else { floor + rng.gen_range(0..40) }
                })
                .collect(),
        };
        let left = random(nd.node(t).children[0]);
        let right = random(nd.node(t).children[1]);
        let want = join_by_pair_enumeration(&nd, t, &left, &right).unwrap();
        let got = table_join(&nd, t, &left, &right, Default::default()).unwrap();
        ensure(got == want, || format!("pair {pairs}, bag size {k}: tables differ"))?;
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, bag sizes up to {largest}"))
}

fn subset_convolution() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..1000 {
        let k = trial % 13;
        let mut random = || {
            let values = (0..1usize << k)
                .map(|_| if rng.gen_bool(0.15) { INF } else { rng.gen_range(0..=20) })
                .collect();
            SetFunction::new(k, values).unwrap()
        };
        let (g, h) = (random(), random());
        let fast = convolve_fast(&g, &h, 20).unwrap();
        let naive = convolve_naive(&g, &h).unwrap();
        ensure(fast == naive, || format!("trial {trial} (ground size {k}) differs"))?;
    }
    Ok(format!("1000 pairs, ground sizes 0..=12, {:.1}s", start.elapsed().as_secs_f64()))
}

fn decomposition_validity() -> Outcome {
    let mut checked = 0;
    let mut instances = common::corpus(300, 30, 20_000);
    for seed in 0..30 {
        let (g, _) = generate(&InstanceSpec::new(Family::Tree, 5 + seed as usize * 3, seed)).unwrap();
        instances.push((format!("tree seed={seed}"), g));
    }
    for (name, g) in &instances {
        for strategy in [Strategy::MinDegree, Strategy::MinFill] {
            let td = heuristic_decompose(g, strategy);
            let report = td.validate(g);
            ensure(report.is_valid(), || format!("{name} {strategy}: {:?}", report.violations))?;
            if g.edge_count() + 1 == g.vertex_count() && g.is_connected() && g.vertex_count() > 1 {
                ensure(td.width() == 1, || format!("{name}: tree of width {}", td.width()))?;
            }
            let nd = make_nice(&td, g).map_err(|e| format!("{name}: {e}"))?;
            let problems = validate_nice(&nd, g);
            ensure(problems.is_empty(), || format!("{name}: {problems:?}"))?;
            ensure(nd.width() == td.width(), || format!("{name}: width {} -> {}", td.width(), nd.width()))?;
            let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for node in nd.nodes() {
                if let NodeKind::IntroduceEdge(u, v) = node.kind {
                    *seen.entry((u, v)).or_default() += 1;
                }
            }
            ensure(seen.len() == g.edge_count() && seen.values().all(|&c| c == 1), || {
                format!("{name}: edges not introduced exactly once")
            })?;
            checked += 1;
        }
    }
    for k in 1..=4 {
        for seed in 0..10 {
            let (g, td) = generate(&InstanceSpec::partial_k_tree(16, k, 0.3, seed)).unwrap();
            let td = td.unwrap();
            ensure(td.validate(&g).is_valid() && td.width() <= k, || format!("planted k={k} seed={seed}"))?;
            ensure(validate_nice(&make_nice(&td, &g).unwrap(), &g).is_empty(), || format!("planted k={k}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} decompositions"))
}

fn parity_identity() -> Outcome {
    let instances = common::corpus(50, 8, 30_000);
    let mut odd = 0;
    for (idx, (name, g)) in instances.iter().enumerate() {
        let n = g.vertex_count();
        let nd = common::nice(g);
        let w = WeightAssignment::draw(n, idx as u64, 0);
        let v1 = idx % n;
        let s: VertexSet = [v1].into_iter().collect();
        let root = count_parity_tables(g, &nd, &s, v1, &w, CountOptions::default()).map_err(|e| e.to_string())?;
        let counts = count_cut_pairs(g, &s, v1, w.as_slice()).unwrap();
        for i in 0..=n {
            for wt in 0..=2 * n * n {
                let want = counts.get(&(i, wt as u64)).copied().unwrap_or(0) % 2 == 1;
                ensure(root.get(i, wt, 0) == want, || format!("{name}: entry (i={i}, w={wt}) differs"))?;
                odd += usize::from(want);
            }
        }
    }
    Ok(format!("50 graphs, every (i, W) entry, {odd} odd entries"))
}

/// Instances with ground truth: (name, graph, S, k, truth).
fn cutcount_cases() -> Vec<(String, Graph, VertexSet, usize, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    common::corpus(200, 9, 40_000)
        .into_iter()
        .map(|(name, g)| {
            let n = g.vertex_count();
            let s: VertexSet = (0..n).filter(|_| rng.gen_bool(0.15)).collect();
            let best = brute_cvcp3(&g, &s).unwrap();
            // Half the cases sit just below the optimum, the rest at a random budget.
            let k = match best {
                Some(b) if b > 0 && rng.gen_bool(0.5) => b - 1,
                _ => rng.gen_range(0..=n),
            };
            let truth = best.is_some_and(|b| b <= k);
            (name, g, s, k, truth)
        })
        .collect()
}

fn soundness() -> Outcome {
    let cases = cutcount_cases();
    let mut no_cases = 0;
    for (name, g, s, k, truth) in &cases {
        let nd = common::nice(g);
        if !truth {
            no_cases += 1;
        }
        for seed in 0..20 {
            let d = decide_constrained_cvcp3(g, &nd, s, *k, seed, 1, CountOptions::default())
                .map_err(|e| e.to_string())?;
            ensure(*truth || d == Decision::No, || format!("{name} S={s} k={k} seed={seed}: YES on a NO instance"))?;
        }
    }
    Ok(format!("{} instances ({no_cases} NO), 20 seeds each, no false YES", cases.len()))
}

fn completeness() -> Outcome {
    let cases: Vec<_> = cutcount_cases().into_iter().filter(|c| c.4).collect();
    // Tight budgets at the optimum, plus graphs with many optimal sets.
    let mut tight_cases: Vec<(String, Graph, VertexSet)> = cases
        .iter()
        .filter(|c| c.3 > 0)
        .take(12)
        .map(|c| (c.0.clone(), c.1.clone(), c.2.clone()))
        .collect();
    for n in [6usize, 9] {
        tight_cases.push((format!("C{n}"), Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap(), VertexSet::new()));
    }
    let k5 = Graph::from_edges(5, (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)))).unwrap();
    tight_cases.push(("K5".into(), k5, VertexSet::new()));
    let grid = [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8), (0, 3), (3, 6), (1, 4), (4, 7), (2, 5), (5, 8)];
    tight_cases.push(("grid 3x3".into(), Graph::from_edges(9, grid).unwrap(), VertexSet::new()));
    let mut worst = 1.0f64;
    for (name, g, s) in &tight_cases {
        let nd = common::nice(g);
        let Some(k) = brute_cvcp3(g, s).unwrap() else { continue };
        let mut yes = 0;
        for seed in 0..200 {
            if decide_constrained_cvcp3(g, &nd, s, k, seed, 1, CountOptions::default()).unwrap() == Decision::Yes {
                yes += 1;
            }
        }
        let rate = yes as f64 / 200.0;
        worst = worst.min(rate);
        ensure(rate >= 0.45, || format!("{name} S={s} k={k}: single-draw YES rate {rate:.3}"))?;
    }
    let tight = tight_cases.len();
    for (name, g, s, k, _) in &cases {
        let nd = common::nice(g);
        let d = decide_constrained_cvcp3(g, &nd, s, *k, 12345, 20, CountOptions::default()).unwrap();
        ensure(d == Decision::Yes, || format!("{name} S={s} k={k}: NO with 20 repetitions"))?;
    }
    Ok(format!(
        "{tight} tight instances, lowest single-draw rate {worst:.3}; {} YES instances all YES at 20 repetitions",
        cases.len()
    ))
}

fn scaling() -> Outcome {
    let widths = 1..=5usize;
    let mut times = Vec::new();
    for k in widths.clone() {
        let mut total = 0.0;
        for seed in 0..8 {
            let (g, td) = generate(&InstanceSpec::partial_k_tree(60, k, 0.1, seed)).unwrap();
            let nd = make_nice(&td.unwrap(), &g).unwrap();
            let best = (0..7)
                .map(|_| {
                    let start = Instant::now();
                    std::hint::black_box(solve_vcp3(&g, &nd, SolveOptions::default()).unwrap());
                    start.elapsed().as_secs_f64()
                })
                .fold(f64::INFINITY, f64::min);
            total += best;
        }
        times.push(total);
    }
    let fmt: Vec<String> = widths.clone().zip(&times).map(|(k, t)| format!("w{k}={:.4}s", t)).collect();
    let detail = fmt.join(" ");
    ensure(times.windows(2).all(|w| w[0] <= w[1]), || format!("not monotone: {detail}"))?;
    let (r3, r5) = (times[2] / times[1], times[4] / times[1]);
    ensure(r5 > r3, || format!("ratio w5/w2 {r5:.2} <= w3/w2 {r3:.2}: {detail}"))?;
    Ok(format!("{detail}; w3/w2={r3:.1} w5/w2={r5:.1}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let stem = dir.path().join("det");
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_vcp3")).args(args).output().unwrap();
    let gen = run(&["gen", "--family", "partial-k-tree", "--n", "16", "--k", "3", "--seed", "9", "--out",
        stem.to_str().unwrap()]);
    ensure(gen.status.success(), || "gen failed".into())?;
    let g = stem.with_extension("gr");
    let td = stem.with_extension("td");
    let (g, td) = (g.to_str().unwrap(), td.to_str().unwrap());
    let runs: [&[&str]; 4] = [
        &["solve", "--problem", "vcp3", "--graph", g, "--td", td, "--json"],
        &["solve", "--problem", "vcp3", "--graph", g, "--heuristic", "min-degree", "--threads", "1", "--json"],
        &["solve", "--problem", "cvcp3", "--graph", g, "--seed", "42", "--reps", "5", "--json"],
        &["solve", "--problem", "cvcp3", "--graph", g, "--k", "6", "--S", "0,3", "--seed", "7", "--json"],
    ];
    for args in runs {
        let (a, b) = (run(args), run(args));
        ensure(a.status.success(), || format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr)))?;
        ensure(a.stdout == b.stdout, || format!("{args:?}: reports differ"))?;
    }
    Ok(format!("{} command lines, two runs each, identical bytes", runs.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("VCP3 oracle equivalence", vcp3_oracle_equivalence),
        ("join-node correctness", join_correctness),
        ("subset convolution", subset_convolution),
        ("decomposition validity", decomposition_validity),
        ("parity identity", parity_identity),
        ("Cut&Count soundness", soundness),
        ("Cut&Count completeness rate", completeness),
        ("scaling in width", scaling),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

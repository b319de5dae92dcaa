//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::ffi::OsString;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dppr_core::datasets::{self, karate_club};
use dppr_core::diffusion::diffuse_trace;
use dppr_core::dppr::{dppr_distance, dppr_score_pairs, SolverConfig};
use dppr_core::eval::{aupr, run_benchmark, summarize, sweep, GraphSource, Method, MethodConfigs, MethodSummary, Protocol, SweepAxis};
use dppr_core::generators::{random_connected, BaParams, LfrParams};
use dppr_core::linsolve::{cg_solve, dense_resolvent_solve, CgConfig};
use dppr_core::ppr::{fixed_point_residual, ppr_solve, PprConfig};
use dppr_core::Graph;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn mean_of(summary: &[MethodSummary], m: Method) -> f64 {
    summary.iter().find(|s| s.method == m).map_or(f64::NAN, |s| s.mean)
}

fn fmt_means(summary: &[MethodSummary]) -> String {
    summary.iter().map(|s| format!("{}={:.3}", s.method, s.mean)).collect::<Vec<_>>().join(" ")
}

/// Karate, 20% holdout, 30 splits, over the alpha x beta grid.
fn karate_ordering() -> Outcome {
    let start = Instant::now();
    let src = GraphSource::Fixed(karate_club());
    let protocol = Protocol { fraction: 0.2, repeats: 30, seed: 0 };
    let mut lines = Vec::new();
    let mut best: Option<(f64, f64, f64, f64)> = None;
    for alpha in [0.1, 1.0, 10.0] {
        for beta in [0.5, 0.85, 0.95] {
            let mut cfg = MethodConfigs::default();
            cfg.solver.alpha = alpha;
            cfg.solver.beta = beta;
            let results = run_benchmark(&src, &Method::ALL, &protocol, &cfg, None).expect("valid protocol");
            let s = summarize(&results);
            let (d, k) = (mean_of(&s, Method::Dppr), mean_of(&s, Method::Katz));
            let local = mean_of(&s, Method::Cn).max(mean_of(&s, Method::Aa));
            let ordered = d > k && k > local;
            lines.push(format!("    alpha={alpha:<4} beta={beta:<4} {} ordered={ordered}", fmt_means(&s)));
            if ordered && best.map_or(true, |b| d > b.2) {
                best = Some((alpha, beta, d, k));
            }
        }
    }
    let elapsed = start.elapsed();

    // The 10% holdout, reported alongside for comparison only.
    let mut cfg = MethodConfigs::default();
    if let Some((a, b, _, _)) = best {
        cfg.solver.alpha = a;
        cfg.solver.beta = b;
    }
    let ten = summarize(&run_benchmark(&src, &Method::ALL, &Protocol { fraction: 0.1, ..protocol }, &cfg, None).unwrap());
    lines.push(format!("    10% holdout at the same alpha/beta: {}", fmt_means(&ten)));
    for l in &lines {
        println!("{l}");
    }

    let fast = elapsed < Duration::from_secs(120);
    match best {
        Some((a, b, d, k)) => {
            let near = (d - 0.800).abs() <= 0.10 && (k - 0.748).abs() <= 0.10;
            outcome(
                near && fast,
                format!(
                    "best ordered config alpha={a} beta={b}: dppr={d:.3} (target 0.800) katz={k:.3} (target 0.748), {:.1}s",
                    elapsed.as_secs_f64()
                ),
            )
        }
        None => outcome(false, format!("no configuration with dppr > katz > max(cn, aa), {:.1}s", elapsed.as_secs_f64())),
    }
}

/// Non-decreasing up to one inversion of at most 0.02.
fn nearly_monotone(xs: &[f64]) -> bool {
    let drops: Vec<f64> = xs.windows(2).map(|w| w[0] - w[1]).filter(|&d| d > 0.0).collect();
    drops.is_empty() || (drops.len() == 1 && drops[0] <= 0.02)
}

fn ba_density() -> Outcome {
    let start = Instant::now();
    let src = GraphSource::Ba(BaParams { n: 500, m: 2, seed: 1000 });
    let protocol = Protocol { fraction: 0.1, repeats: 10, seed: 0 };
    let cells = sweep(SweepAxis::BaM, &[2.0, 4.0, 6.0, 8.0], &src, &Method::ALL, &protocol, &MethodConfigs::default(), None).unwrap();
    let elapsed = start.elapsed();
    let dppr: Vec<f64> = cells.iter().map(|c| mean_of(&c.summary, Method::Dppr)).collect();
    for c in &cells {
        println!("    m={} {}", c.value, fmt_means(&c.summary));
    }
    let gain = dppr[3] - dppr[0];
    let pass = gain >= 0.05 && nearly_monotone(&dppr) && elapsed < Duration::from_secs(600);
    outcome(pass, format!("dppr by m: {dppr:.3?}, gain {gain:.3}, {:.1}s", elapsed.as_secs_f64()))
}

fn lfr_modularity() -> Outcome {
    let start = Instant::now();
    let src = GraphSource::Lfr(LfrParams { seed: 2000, ..LfrParams::default() });
    let protocol = Protocol { fraction: 0.1, repeats: 10, seed: 0 };
    let cells = sweep(SweepAxis::LfrMu, &[0.1, 0.3, 0.5, 0.7], &src, &Method::ALL, &protocol, &MethodConfigs::default(), None).unwrap();
    let elapsed = start.elapsed();
    for c in &cells {
        println!("    mu={} {}", c.value, fmt_means(&c.summary));
    }
    let (first, last) = (&cells[0].summary, &cells[3].summary);
    let declines = Method::ALL.iter().all(|&m| mean_of(last, m) < mean_of(first, m));
    let resilient = mean_of(last, Method::Dppr) >= mean_of(last, Method::Cn) && mean_of(last, Method::Dppr) >= mean_of(last, Method::Aa);
    let pass = declines && resilient && elapsed < Duration::from_secs(600);
    outcome(pass, format!("all decline 0.1 -> 0.7: {declines}; dppr >= cn, aa at 0.7: {resilient}; {:.1}s", elapsed.as_secs_f64()))
}

fn dataset_ingestion() -> Outcome {
    let expected = [
        ("karate", 34, 78, "4.59"),
        ("metabolic", 1039, 4741, "9.13"),
        ("air-china", 949, 10757, "22.67"),
        ("london-tube", 301, 358, "2.38"),
    ];
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, n, m, k) in expected {
        let g = datasets::load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        match g {
            Some(g) => {
                let got = (g.node_count(), g.edge_count(), format!("{:.2}", g.average_degree()));
                let ok = got == (n, m, k.to_string());
                pass &= ok;
                notes.push(format!("{name} {}/{}/{}{}", got.0, got.1, got.2, if ok { "" } else { " MISMATCH" }));
            }
            None => {
                pass = false;
                notes.push(format!("{name} missing (set ${})", datasets::DATA_DIR_ENV));
            }
        }
    }
    outcome(pass, notes.join(", "))
}

fn graphs(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_n);
            let p = rng.gen_range(0.0..(6.0 / n as f64).min(1.0));
            random_connected(n, p, rng.gen())
        })
        .collect()
}

fn cg_vs_dense() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for g in graphs(50, 200, 50) {
        let n = g.node_count();
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let alpha = [0.1, 1.0, 10.0][rng.gen_range(0..3)];
        let cg = cg_solve(&g, &b, &CgConfig { alpha, tol: 1e-12, max_iter: None }).unwrap().solution;
        let dense = dense_resolvent_solve(&g, &b, alpha).unwrap();
        let diff: f64 = cg.iter().zip(&dense).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = dense.iter().map(|x| x * x).sum::<f64>().sqrt();
        worst = worst.max(diff / norm);
    }
    outcome(worst <= 1e-8, format!("max relative error {worst:.2e} over 50 graphs, {:.1}s", start.elapsed().as_secs_f64()))
}

fn ppr_fixed_point() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = PprConfig::default();
    let (mut worst_res, mut worst_mass, mut isolated_graphs) = (0.0f64, 0.0f64, 0);
    let mut negative = false;
    for (i, g) in graphs(50, 200, 60).into_iter().enumerate() {
        // Every other graph loses all edges at a few nodes.
        let g = if i % 2 == 1 && g.node_count() > 3 {
            isolated_graphs += 1;
            let victims: Vec<usize> = (0..3).map(|_| rng.gen_range(0..g.node_count())).collect();
            let cut: Vec<(usize, usize)> = g.edges().filter(|(a, b)| victims.contains(a) || victims.contains(b)).collect();
            g.without_edges(&cut)
        } else {
            g
        };
        for _ in 0..3 {
            let u = rng.gen_range(0..g.node_count());
            let s = ppr_solve(&g, u, &cfg).unwrap();
            worst_res = worst_res.max(fixed_point_residual(&g, &s, cfg.beta).unwrap() / cfg.tol);
            worst_mass = worst_mass.max((s.values.iter().sum::<f64>() - 1.0).abs());
            negative |= s.values.iter().any(|&x| x < 0.0);
        }
    }
    outcome(
        worst_res <= 2.0 && worst_mass <= 1e-9 && !negative,
        format!(
            "max residual {worst_res:.3} x tol, max |sum - 1| {worst_mass:.1e}, {isolated_graphs} graphs with isolated nodes, {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn pseudometric() -> Outcome {
    let start = Instant::now();
    let cfg = SolverConfig::default();
    let (mut asym, mut ident, mut excess) = (0usize, 0.0f64, f64::NEG_INFINITY);
    let mut triples = 0usize;
    for g in graphs(20, 50, 70) {
        let n = g.node_count();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        let scored = dppr_score_pairs(&g, &pairs, &cfg);
        let mut d = vec![vec![0.0; n]; n];
        for (&(u, v), s) in pairs.iter().zip(scored) {
            d[u][v] = s.unwrap().distance;
        }
        for u in 0..n {
            let su = ppr_solve(&g, u, &cfg.ppr()).unwrap();
            ident = ident.max(dppr_distance(&g, &su, &su, &cfg).unwrap());
            for v in 0..n {
                if d[u][v] != d[v][u] {
                    asym += 1;
                }
                for w in 0..n {
                    excess = excess.max(d[u][w] - d[u][v] - d[v][w]);
                    triples += 1;
                }
            }
        }
    }
    outcome(
        asym == 0 && ident <= 1e-10 && excess <= 1e-8,
        format!(
            "{asym} asymmetric pairs, max d(u,u) {ident:.1e}, max triangle excess {excess:.1e} over {triples} triples, {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    )
}

/// Average precision from first principles: each item's rank counts the
/// items strictly ahead of it, with ties resolved by input position.
fn brute_average_precision(labels: &[bool], scores: &[f64]) -> f64 {
    let n = labels.len();
    let rank = |i: usize| 1 + (0..n).filter(|&j| scores[j] > scores[i] || (scores[j] == scores[i] && j < i)).count();
    let pos: Vec<usize> = (0..n).filter(|&i| labels[i]).collect();
    pos.iter()
        .map(|&i| {
            let r = rank(i);
            pos.iter().filter(|&&j| rank(j) <= r).count() as f64 / r as f64
        })
        .sum::<f64>()
        / pos.len() as f64
}

fn aupr_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut tied_sets = 0;
    for i in 0..100 {
        let n = rng.gen_range(1..300);
        let mut labels: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        labels[0] = true;
        // Every other set draws from a handful of values, forcing ties.
        let scores: Vec<f64> = if i % 2 == 0 {
            tied_sets += 1;
            (0..n).map(|_| rng.gen_range(0..6) as f64 * 0.5).collect()
        } else {
            (0..n).map(|_| rng.gen::<f64>()).collect()
        };
        worst = worst.max((aupr(&labels, &scores).unwrap() - brute_average_precision(&labels, &scores)).abs());
    }
    outcome(
        worst <= 1e-12,
        format!("max deviation {worst:.1e} over 100 sets ({tied_sets} with ties), {:.1}s", start.elapsed().as_secs_f64()),
    )
}

fn dense_heat(g: &Graph, s0: &[f64], t: f64) -> Vec<f64> {
    let n = g.node_count();
    let l = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            g.neighbors(i).len() as f64
        } else if g.has_edge(i, j) {
            -1.0
        } else {
            0.0
        }
    });
    let eig = l.symmetric_eigen();
    let q = &eig.eigenvectors;
    let decay = DMatrix::from_diagonal(&eig.eigenvalues.map(|lam| (-lam * t).exp()));
    (q * decay * q.transpose() * DVector::from_column_slice(s0)).iter().copied().collect()
}

fn diffusion() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let times = [0.0, 0.5, 1.0, 2.0, 5.0];
    let (mut mass, mut err) = (0.0f64, 0.0f64);
    for g in graphs(10, 50, 90) {
        let n = g.node_count();
        let mut s0 = vec![0.0; n];
        s0[rng.gen_range(0..n)] = 1.0;
        let trace = diffuse_trace(&g, &s0, &times, 1000).unwrap();
        for (t, snap) in times.iter().zip(&trace.snapshots) {
            mass = mass.max((snap.iter().sum::<f64>() - 1.0).abs());
            let exact = dense_heat(&g, &s0, *t);
            err = err.max(snap.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
    }
    outcome(
        mass <= 1e-9 && err <= 1e-3,
        format!("max mass drift {mass:.1e}, max error vs exp(-Lt) {err:.1e}, {:.1}s", start.elapsed().as_secs_f64()),
    )
}

/// Runs the command-line entry point in-process, as `dppr` would from a shell.
fn run_cli(out: &Path, jobs: usize) -> bool {
    let jobs = jobs.to_string();
    let args = ["dppr", "--jobs", &jobs, "benchmark", "--dataset", "karate", "--fraction", "0.2", "--repeats", "30", "--seed", "0"];
    let args = args.iter().map(OsString::from).chain([OsString::from("--output"), out.as_os_str().to_owned()]);
    dppr_cli::main_from(args) == ExitCode::SUCCESS
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let runs = [("a", 1), ("b", 1), ("c", 4)];
    for (name, jobs) in runs {
        if !run_cli(&dir.path().join(name), jobs) {
            return outcome(false, format!("benchmark run {name} (--jobs {jobs}) failed"));
        }
    }
    let read = |run: &str, file: &str| std::fs::read(dir.path().join(run).join(file)).unwrap();
    // Sidecars record the output directory, which necessarily differs.
    let sidecar = |run: &str| {
        let mut v: serde_json::Value = serde_json::from_slice(&read(run, "results.csv.json")).unwrap();
        v["details"]["config"]["output"]["dir"] = serde_json::Value::Null;
        v
    };
    let mut same = true;
    for other in ["b", "c"] {
        same &= read("a", "results.csv") == read(other, "results.csv");
        same &= read("a", "scores.csv") == read(other, "scores.csv");
        same &= sidecar("a") == sidecar(other);
    }
    outcome(
        same,
        format!("results.csv, scores.csv and sidecar identical across --jobs 1, 1, 4: {same}, {:.1}s", start.elapsed().as_secs_f64()),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    // `cargo test -- --list` and filters come through here too; run only
    // when invoked plainly or with a filter matching "acceptance".
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    if let Some(filter) = args.iter().find(|a| !a.starts_with('-')) {
        if !"acceptance".contains(filter.as_str()) {
            return;
        }
    }

    let criteria: [Criterion; 10] = [
        (1, "Karate ordering dppr > katz > max(cn, aa)", karate_ordering),
        (2, "BA density trend", ba_density),
        (3, "LFR modularity trend", lfr_modularity),
        (4, "dataset ingestion", dataset_ingestion),
        (5, "CG vs dense solve", cg_vs_dense),
        (6, "PPR fixed point", ppr_fixed_point),
        (7, "D-PPR pseudometric", pseudometric),
        (8, "AUPR vs brute force", aupr_oracle),
        (9, "diffusion trace", diffusion),
        (10, "end-to-end determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let o = check();
        println!("{} [{id}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}

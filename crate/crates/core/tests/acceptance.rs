//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use posort::bench::{run_instance, run_suite, BenchReport, InstanceRecord, RunOptions, SuiteSpec};
use posort::extensions::{check_run, CheckOutcome, RunChecks};
use posort::finger_tree::REBALANCE_PER_ELEMENT;
use posort::generate::{self, GraphKind};
use posort::oracle::sample_extension;
use posort::{sort, Dag};

const LOG_TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// First few records failing `bad`, for the FAIL line.
fn offenders(records: &[InstanceRecord], bad: impl Fn(&InstanceRecord) -> bool) -> Vec<usize> {
    records.iter().filter(|r| bad(r)).map(|r| r.index).take(5).collect()
}

fn check_of(r: &InstanceRecord, pick: fn(&RunChecks) -> &CheckOutcome) -> &CheckOutcome {
    pick(r.checks.as_ref().expect("checks enabled"))
}

fn count_where(records: &[InstanceRecord], bad: impl Fn(&InstanceRecord) -> bool) -> (usize, Vec<usize>) {
    (records.iter().filter(|r| bad(r)).count(), offenders(records, bad))
}

fn correctness_sweep(report: &BenchReport, elapsed: Duration) -> Outcome {
    let r = &report.records;
    let (bad, first) = count_where(r, |r| !r.correct || r.baselines_agree != Some(true));
    outcome(
        bad == 0 && r.len() == 10_000,
        format!(
            "{} instances, {bad} mismatches {first:?}, {:.1}s",
            r.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn small_k_bound(r: &[InstanceRecord]) -> Outcome {
    let (bad, first) = count_where(r, |r| {
        let le = r.log2_e.expect("n <= 16 is countable");
        r.k as f64 > le + LOG_TOL || !check_of(r, |c| &c.c1_k_bound).is_pass()
    });
    let min_slack = r
        .iter()
        .map(|r| r.log2_e.unwrap() - r.k as f64)
        .fold(f64::INFINITY, f64::min);
    outcome(
        bad == 0,
        format!("{} instances, {bad} violations {first:?}, min slack {min_slack:.3}", r.len()),
    )
}

fn level_identity(all: &[&[InstanceRecord]], large: &[RunChecks]) -> Outcome {
    let mut n = 0;
    let mut bad = 0;
    for r in all.iter().flat_map(|s| s.iter()) {
        n += 1;
        bad += usize::from(!check_of(r, |c| &c.c2_level_sum).is_pass());
    }
    for c in large {
        n += 1;
        bad += usize::from(!c.c2_level_sum.is_pass());
    }
    outcome(bad == 0, format!("{n} instances, {bad} violations"))
}

fn disjointness(r: &[InstanceRecord]) -> Outcome {
    let (bad, first) = count_where(r, |r| !check_of(r, |c| &c.c3_disjoint).is_pass());
    outcome(bad == 0, format!("{} instances, {bad} violations {first:?}", r.len()))
}

fn interval_entropy(r: &[InstanceRecord]) -> Outcome {
    let (bad, first) = count_where(r, |r| {
        let c = r.checks.as_ref().unwrap();
        c.sum_log2_r > r.log2_e.unwrap() + LOG_TOL || !c.c4_interval_entropy.is_pass()
    });
    let min_slack = r
        .iter()
        .map(|r| r.log2_e.unwrap() - r.checks.as_ref().unwrap().sum_log2_r)
        .fold(f64::INFINITY, f64::min);
    outcome(
        bad == 0,
        format!("{} instances, {bad} violations {first:?}, min slack {min_slack:.3}", r.len()),
    )
}

fn interval_covers_distance(all: &[&[InstanceRecord]], large: &[RunChecks]) -> Outcome {
    let mut n = 0;
    let mut bad = 0;
    for r in all.iter().flat_map(|s| s.iter()) {
        n += 1;
        bad += usize::from(!check_of(r, |c| &c.c5_interval_covers_distance).is_pass());
    }
    for c in large {
        n += 1;
        bad += usize::from(!c.c5_interval_covers_distance.is_pass());
    }
    outcome(bad == 0, format!("{n} instances, {bad} violations"))
}

fn per_search_bound(all: &[&[InstanceRecord]], large: &[RunChecks]) -> Outcome {
    let mut n = 0;
    let mut bad = 0;
    for r in all.iter().flat_map(|s| s.iter()) {
        n += 1;
        bad += usize::from(!check_of(r, |c| &c.per_insert_queries).is_pass());
    }
    for c in large {
        n += 1;
        bad += usize::from(!c.per_insert_queries.is_pass());
    }
    outcome(bad == 0, format!("{n} runs checked insert by insert, {bad} violating runs"))
}

fn global_query_bound(all: &[&[InstanceRecord]]) -> Outcome {
    let r: Vec<&InstanceRecord> = all.iter().flat_map(|s| s.iter()).filter(|r| r.n <= 16).collect();
    let ratio = |r: &InstanceRecord| r.queries_main as f64 / (r.log2_e.unwrap() + 1.0);
    let over: Vec<usize> = r
        .iter()
        .filter(|r| r.queries_main as f64 > 16.0 * (r.log2_e.unwrap() + 1.0) + LOG_TOL)
        .map(|r| r.index)
        .collect();
    let worst = r.iter().map(|r| ratio(r)).fold(0.0, f64::max);
    outcome(
        over.is_empty(),
        format!(
            "{} instances, {} violations {:?}, max queries/(log2 e + 1) = {worst:.3}",
            r.len(),
            over.len(),
            &over[..over.len().min(5)]
        ),
    )
}

fn hamiltonian_paths() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [1usize, 10, 1000] {
        // relabel so the path is not the identity order
        let mut label: Vec<usize> = (0..n).collect();
        label.shuffle(&mut rng);
        let edges: Vec<_> = (1..n).map(|i| (label[i - 1], label[i])).collect();
        let g = Dag::new(n, &edges).unwrap();
        let mut o = sample_extension(&g, rng.gen());
        let out = sort(&g, &mut o).unwrap();
        let q = o.query_count();
        pass &= q == 0 && out.trace.totals.queries == 0 && out.order == label;
        parts.push(format!("n={n}: {q} queries"));
    }
    outcome(pass, parts.join(", "))
}

fn sparse_random(n: usize, avg_in: usize, seed: u64) -> Dag {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        for _ in 0..rng.gen_range(0..=2 * avg_in) {
            edges.push((rng.gen_range(0..v), v));
        }
    }
    Dag::new(n, &edges).unwrap()
}

fn linear_work() -> (Outcome, Vec<RunChecks>) {
    let n = 100_000;
    let graphs: Vec<(&str, Dag)> = vec![
        ("sparse_random", sparse_random(n, 3, 1)),
        ("layered", {
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            generate::layered(&generate::random_widths(n, &mut rng), 0.5, 2).unwrap()
        }),
        ("path_plus_isolated", generate::path_plus_isolated(n, 5_000).unwrap()),
        ("edgeless", Dag::new(n, &[]).unwrap()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    let mut all_checks = Vec::new();
    for (name, g) in graphs {
        let oracle = sample_extension(&g, 77);
        let mut o = oracle.fresh();
        let start = Instant::now();
        let out = sort(&g, &mut o).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let t = &out.trace.totals;
        let checks = check_run(&g, &out.trace, oracle.ranks());
        let ok = out.order == oracle.sorted_order()
            && t.compare_max <= g.m() as u64
            && t.rebalance_steps <= REBALANCE_PER_ELEMENT * (n as u64 + 1)
            && checks.compare_linear.is_pass()
            && checks.structure_work_linear.is_pass()
            && secs < 5.0;
        pass &= ok;
        parts.push(format!(
            "{name}: m={} compare_max={} rebalance={} ({:.2}/n) {secs:.2}s",
            g.m(),
            t.compare_max,
            t.rebalance_steps,
            t.rebalance_steps as f64 / n as f64
        ));
        all_checks.push(checks);
    }
    (outcome(pass, parts.join("; ")), all_checks)
}

fn query_advantage() -> (Outcome, RunChecks) {
    let g = generate::path_plus_isolated(1024, 32).unwrap();
    let oracle = sample_extension(&g, 2024);
    let opts = RunOptions {
        checks: true,
        baselines: true,
        ..RunOptions::default()
    };
    let r = run_instance(&g, &oracle, opts).unwrap();
    let b = r.queries_baselines.unwrap();
    let q = r.queries_main;
    let pass = r.correct
        && r.baselines_agree == Some(true)
        && q < b.binary_insertion
        && q < b.heap_toposort;
    let detail = format!(
        "posort {q}, heap_toposort {} (ratio {:.3}), binary_insertion {} (ratio {:.3})",
        b.heap_toposort,
        q as f64 / b.heap_toposort as f64,
        b.binary_insertion,
        q as f64 / b.binary_insertion as f64
    );
    (outcome(pass, detail), r.checks.unwrap())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let sweep = SuiteSpec {
        count: 10_000,
        n_min: 1,
        n_max: 12,
        kinds: vec![GraphKind::Gnp, GraphKind::Layered],
        p: None,
        t: None,
        seed: 20_240_601,
        checks: true,
    };
    let sweep_report = run_suite(&sweep).expect("sweep runs");
    let sweep_time = start.elapsed();

    let small = SuiteSpec {
        count: 1000,
        n_min: 1,
        n_max: 16,
        kinds: GraphKind::ALL.to_vec(),
        seed: 7,
        ..sweep.clone()
    };
    let small_report = run_suite(&small).expect("small suite runs");
    let s = &small_report.records;

    let (c10, mut large) = linear_work();
    let (c11, adv_checks) = query_advantage();
    large.push(adv_checks);
    let sweeps: [&[InstanceRecord]; 2] = [&sweep_report.records, s];

    let results = [
        ("1 correctness sweep vs oracle and baselines", correctness_sweep(&sweep_report, sweep_time)),
        ("2 k <= log2 e(P_G)", small_k_bound(s)),
        ("3 k = sum (L_i - 1)", level_identity(&sweeps, &large)),
        ("4 reachable pairs get disjoint ordered intervals", disjointness(s)),
        ("5 sum log2 #R_i <= log2 e(P_G)", interval_entropy(s)),
        ("6 #R_i >= d_i", interval_covers_distance(&sweeps, &large)),
        ("7 per-search queries <= 4 ceil(log2(d+1)) + 4 (+1 head)", per_search_bound(&sweeps, &large)),
        ("8 total queries <= 16 (log2 e(P_G) + 1), n <= 16", global_query_bound(&sweeps)),
        ("9 Hamiltonian paths use 0 queries", hamiltonian_paths()),
        ("10 compare_max <= m, rebalance <= c n at n = 1e5", c10),
        ("11 path_plus_isolated(1024, 32) beats both baselines", c11),
    ];

    let mut failed = 0;
    for (name, o) in &results {
        println!("{} [{name}] {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

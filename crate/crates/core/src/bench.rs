//! Instance runs and line-delimited JSON reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{binary_insertion_sort, heap_toposort};
use crate::error::{Error, Result};
use crate::extensions::{check_run, RunChecks};
use crate::generate::{self, GraphKind};
use crate::graph::Dag;
use crate::oracle::{sample_extension, LinearOracle};
use crate::posort::{sort, RunTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineQueries {
    pub heap_toposort: u64,
    pub binary_insertion: u64,
}

/// One sorted instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub kind: Option<GraphKind>,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub queries_main: u64,
    pub queries_baselines: Option<BaselineQueries>,
    pub sum_log_d: f64,
    pub log2_e: Option<f64>,
    /// Output equals the oracle's order and respects every edge.
    pub correct: bool,
    /// Every baseline produced the same sequence; `None` if not run.
    pub baselines_agree: Option<bool>,
    pub checks: Option<RunChecks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<RunTrace>,
}

impl InstanceRecord {
    pub fn failed(&self) -> bool {
        !self.correct
            || self.baselines_agree == Some(false)
            || self.checks.as_ref().is_some_and(RunChecks::any_failed)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub checks: bool,
    pub baselines: bool,
    pub keep_order: bool,
    pub keep_trace: bool,
}

/// Sorts one instance and assembles its record. The oracle's counter is
/// reset for each algorithm so every query total starts from zero.
pub fn run_instance(g: &Dag, oracle: &LinearOracle, opts: RunOptions) -> Result<InstanceRecord> {
    let mut main = oracle.fresh();
    let out = sort(g, &mut main)?;
    let correct = crate::posort::replay_verify(g, oracle, &out.order);

    let (queries_baselines, baselines_agree) = if opts.baselines {
        let heap = heap_toposort(g, &mut oracle.fresh())?;
        let all: Vec<usize> = (0..g.n()).collect();
        let ins = binary_insertion_sort(&all, &mut oracle.fresh())?;
        (
            Some(BaselineQueries {
                heap_toposort: heap.queries,
                binary_insertion: ins.queries,
            }),
            Some(heap.order == out.order && ins.order == out.order),
        )
    } else {
        (None, None)
    };

    let checks = opts.checks.then(|| check_run(g, &out.trace, oracle.ranks()));
    Ok(InstanceRecord {
        index: 0,
        kind: None,
        seed: 0,
        n: g.n(),
        m: g.m(),
        k: out.trace.k,
        queries_main: out.trace.totals.queries,
        queries_baselines,
        sum_log_d: out.trace.sum_log2_d(),
        log2_e: checks.as_ref().and_then(|c| c.log2_e),
        correct,
        baselines_agree,
        checks,
        order: opts.keep_order.then(|| out.order.clone()),
        trace: opts.keep_trace.then_some(out.trace),
    })
}

/// A randomized benchmark sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub kinds: Vec<GraphKind>,
    /// Edge probability; drawn per instance from `[0.05, 0.6]` when absent.
    pub p: Option<f64>,
    /// Isolated vertices for `path_plus_isolated`; `max(1, n / 32)` when absent.
    pub t: Option<usize>,
    pub seed: u64,
    pub checks: bool,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        SuiteSpec {
            count: 1000,
            n_min: 1,
            n_max: 12,
            kinds: vec![GraphKind::Gnp, GraphKind::Layered],
            p: None,
            t: None,
            seed: 0,
            checks: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub kind: GraphKind,
    pub seed: u64,
    pub graph: Dag,
    pub oracle: LinearOracle,
}

impl SuiteSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_min > self.n_max {
            return Err(Error::BadParams(format!(
                "n range {}..={} is empty",
                self.n_min, self.n_max
            )));
        }
        if self.kinds.is_empty() && self.count > 0 {
            return Err(Error::BadParams("no graph kinds selected".into()));
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::BadParams(format!("p = {p} not in [0, 1]")));
            }
        }
        Ok(())
    }

    /// Deterministic instance `i`: its own ChaCha stream of the master seed.
    pub fn instance(&self, i: usize) -> Result<Instance> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64);
        let kind = self.kinds[i % self.kinds.len()];
        let n = rng.gen_range(self.n_min..=self.n_max);
        let p = self.p.unwrap_or_else(|| rng.gen_range(0.05..=0.6));
        let seed: u64 = rng.gen();
        let graph = match kind {
            GraphKind::Gnp => generate::gnp(n, p, seed)?,
            GraphKind::Layered => {
                let widths = generate::random_widths(n.max(1), &mut rng);
                generate::layered(&widths, p, seed)?
            }
            GraphKind::PathPlusIsolated => {
                generate::path_plus_isolated(n, self.t.unwrap_or((n / 32).max(1)).min(n))?
            }
            GraphKind::ChainOfAntichains => {
                generate::chain_of_antichains(&generate::random_widths(n.max(1), &mut rng))?
            }
        };
        let oracle = sample_extension(&graph, seed ^ 0x9e37_79b9_7f4a_7c15);
        Ok(Instance {
            kind,
            seed,
            graph,
            oracle,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub instances: usize,
    pub failures: usize,
    pub queries_main: u64,
    pub queries_heap_toposort: u64,
    pub queries_binary_insertion: u64,
    /// Largest `queries / (log2 e(P_G) + 1)` over instances with exact counts.
    pub max_queries_per_log_e: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub records: Vec<InstanceRecord>,
    pub summary: BenchSummary,
}

impl BenchReport {
    /// One JSON object per line, records first, then `{"summary": ...}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        let summary = serde_json::json!({ "summary": self.summary });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }

    pub fn failed(&self) -> bool {
        self.summary.failures > 0
    }
}

/// Runs the sweep in parallel; records come back in instance order.
pub fn run_suite(spec: &SuiteSpec) -> Result<BenchReport> {
    spec.validate()?;
    let opts = RunOptions {
        checks: spec.checks,
        baselines: true,
        ..RunOptions::default()
    };
    let records = (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let inst = spec.instance(i)?;
            let mut rec = run_instance(&inst.graph, &inst.oracle, opts)?;
            rec.index = i;
            rec.kind = Some(inst.kind);
            rec.seed = inst.seed;
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&records);
    Ok(BenchReport { records, summary })
}

fn summarize(records: &[InstanceRecord]) -> BenchSummary {
    let mut s = BenchSummary {
        instances: records.len(),
        ..BenchSummary::default()
    };
    for r in records {
        s.failures += usize::from(r.failed());
        s.queries_main += r.queries_main;
        if let Some(b) = r.queries_baselines {
            s.queries_heap_toposort += b.heap_toposort;
            s.queries_binary_insertion += b.binary_insertion;
        }
        if let Some(le) = r.log2_e {
            let ratio = r.queries_main as f64 / (le + 1.0);
            s.max_queries_per_log_e = Some(s.max_queries_per_log_e.map_or(ratio, |m| m.max(ratio)));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite() {
        let spec = SuiteSpec {
            count: 0,
            ..SuiteSpec::default()
        };
        let report = run_suite(&spec).unwrap();
        assert!(report.records.is_empty());
        assert!(!report.failed());
        assert_eq!(report.to_jsonl().lines().count(), 1);
    }

    #[test]
    fn suite_is_deterministic() {
        let spec = SuiteSpec {
            count: 40,
            seed: 17,
            ..SuiteSpec::default()
        };
        let a = run_suite(&spec).unwrap().to_jsonl();
        let b = run_suite(&spec).unwrap().to_jsonl();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 41);
    }

    #[test]
    fn small_suite_passes() {
        let spec = SuiteSpec {
            count: 200,
            kinds: GraphKind::ALL.to_vec(),
            seed: 3,
            ..SuiteSpec::default()
        };
        let report = run_suite(&spec).unwrap();
        let bad: Vec<_> = report.records.iter().filter(|r| r.failed()).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn bad_spec_rejected() {
        let spec = SuiteSpec {
            n_min: 5,
            n_max: 2,
            ..SuiteSpec::default()
        };
        assert!(matches!(run_suite(&spec), Err(Error::BadParams(_))));
    }
}

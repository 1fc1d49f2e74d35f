//! C ABI over the `posort` library.
//!
//! Objects cross the boundary as opaque heap handles created by `*_new` style
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`PosortStatus`]; results are written through out-pointers only
//! on success. Panics are caught and reported as `POSORT_STATUS_PANIC`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use posort::baselines::{binary_insertion_sort, heap_toposort};
use posort::extensions::{check_run, count_extensions, CheckOutcome};
use posort::oracle::sample_extension;
use posort::{Dag, Error, LinearOracle, SortOutput};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosortStatus {
    Ok = 0,
    NullPointer,
    VertexOutOfRange,
    SelfLoop,
    CycleDetected,
    InvalidPermutation,
    NotAnExtension,
    TooLarge,
    BadParams,
    Parse,
    InvalidUtf8,
    BufferTooSmall,
    Internal,
    Panic,
}

impl From<&Error> for PosortStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::VertexOutOfRange { .. } => PosortStatus::VertexOutOfRange,
            Error::SelfLoop(_) => PosortStatus::SelfLoop,
            Error::CycleDetected => PosortStatus::CycleDetected,
            Error::InvalidPermutation { .. } => PosortStatus::InvalidPermutation,
            Error::NotAnExtension { .. } => PosortStatus::NotAnExtension,
            Error::TooLarge { .. } => PosortStatus::TooLarge,
            Error::BadParams(_) => PosortStatus::BadParams,
            Error::Parse { .. } => PosortStatus::Parse,
            _ => PosortStatus::Internal,
        }
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn posort_status_message(status: PosortStatus) -> *const c_char {
    let s: &'static CStr = match status {
        PosortStatus::Ok => c"ok",
        PosortStatus::NullPointer => c"null pointer argument",
        PosortStatus::VertexOutOfRange => c"vertex out of range",
        PosortStatus::SelfLoop => c"self-loop in edge list",
        PosortStatus::CycleDetected => c"graph contains a cycle",
        PosortStatus::InvalidPermutation => c"ranks are not a permutation",
        PosortStatus::NotAnExtension => c"order does not extend the graph",
        PosortStatus::TooLarge => c"input too large for exact counting",
        PosortStatus::BadParams => c"invalid parameters",
        PosortStatus::Parse => c"parse error",
        PosortStatus::InvalidUtf8 => c"text is not valid UTF-8",
        PosortStatus::BufferTooSmall => c"output buffer too small",
        PosortStatus::Internal => c"internal error",
        PosortStatus::Panic => c"panic inside posort",
    };
    s.as_ptr()
}

/// Opaque DAG handle.
pub struct PosortDag(Dag);

/// Opaque hidden-order handle.
pub struct PosortOracle(LinearOracle);

/// Opaque handle to a finished sort and its trace.
pub struct PosortRun(SortOutput);

/// Outcome counts of the exact bound checks for one run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PosortCheckSummary {
    pub passed: u32,
    pub failed: u32,
    pub skipped: u32,
    /// `log2 e(P_G)`, or NaN when the graph is too large to count.
    pub log2_e: f64,
    pub sum_log2_d: f64,
}

fn guard(f: impl FnOnce() -> Result<(), PosortStatus>) -> PosortStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PosortStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => PosortStatus::Panic,
    }
}

fn lift<T>(r: posort::Result<T>) -> Result<T, PosortStatus> {
    r.map_err(|e| PosortStatus::from(&e))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, PosortStatus> {
    p.as_ref().ok_or(PosortStatus::NullPointer)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), PosortStatus> {
    if out.is_null() {
        return Err(PosortStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn array<'a, T>(p: *const T, len: usize) -> Result<&'a [T], PosortStatus> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(PosortStatus::NullPointer)
    } else {
        Ok(slice::from_raw_parts(p, len))
    }
}

/// Builds a DAG on `n` vertices. `edges` holds `2 * edge_count` values,
/// each edge as a `(from, to)` pair.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values unless
/// `edge_count` is zero; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn posort_dag_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut PosortDag,
) -> PosortStatus {
    guard(|| {
        let len = edge_count.checked_mul(2).ok_or(PosortStatus::BadParams)?;
        let flat = array(edges, len)?;
        let pairs: Vec<_> = flat.chunks_exact(2).map(|e| (e[0], e[1])).collect();
        let g = lift(Dag::new(n, &pairs))?;
        put(out, Box::into_raw(Box::new(PosortDag(g))))
    })
}

/// Parses the edge-list text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn posort_dag_parse(
    text: *const c_char,
    out: *mut *mut PosortDag,
) -> PosortStatus {
    guard(|| {
        if text.is_null() {
            return Err(PosortStatus::NullPointer);
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| PosortStatus::InvalidUtf8)?;
        let g = lift(Dag::parse_edge_list(s))?;
        put(out, Box::into_raw(Box::new(PosortDag(g))))
    })
}

/// Vertex count; 0 for NULL.
///
/// # Safety
/// `dag` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn posort_dag_n(dag: *const PosortDag) -> usize {
    dag.as_ref().map_or(0, |g| g.0.n())
}

/// Distinct edge count; 0 for NULL.
///
/// # Safety
/// `dag` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn posort_dag_m(dag: *const PosortDag) -> usize {
    dag.as_ref().map_or(0, |g| g.0.m())
}

/// # Safety
/// `dag` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn posort_dag_free(dag: *mut PosortDag) {
    if !dag.is_null() {
        drop(Box::from_raw(dag));
    }
}

/// Hidden order from ranks: `ranks[v]` is the position of vertex `v`.
/// When `dag` is non-NULL the order must extend it.
///
/// # Safety
/// `ranks` must point to `n` readable values; `dag` must be NULL or live;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn posort_oracle_from_ranks(
    ranks: *const usize,
    n: usize,
    dag: *const PosortDag,
    out: *mut *mut PosortOracle,
) -> PosortStatus {
    guard(|| {
        let ranks = array(ranks, n)?.to_vec();
        let g = dag.as_ref().map(|d| &d.0);
        let o = lift(LinearOracle::from_ranks(ranks, g))?;
        put(out, Box::into_raw(Box::new(PosortOracle(o))))
    })
}

/// Random linear extension of `dag`, deterministic per seed.
///
/// # Safety
/// `dag` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn posort_oracle_sample(
    dag: *const PosortDag,
    seed: u64,
    out: *mut *mut PosortOracle,
) -> PosortStatus {
    guard(|| {
        let g = deref(dag)?;
        put(out, Box::into_raw(Box::new(PosortOracle(sample_extension(&g.0, seed)))))
    })
}

/// # Safety
/// `oracle` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn posort_oracle_free(oracle: *mut PosortOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

/// Sorts `dag` against `oracle`. The oracle handle is not modified; the run
/// counts its own queries from zero.
///
/// # Safety
/// `dag` and `oracle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn posort_sort(
    dag: *const PosortDag,
    oracle: *const PosortOracle,
    out: *mut *mut PosortRun,
) -> PosortStatus {
    guard(|| {
        let g = deref(dag)?;
        let mut o = deref(oracle)?.0.fresh();
        let output = lift(posort::sort(&g.0, &mut o))?;
        put(out, Box::into_raw(Box::new(PosortRun(output))))
    })
}

/// Number of vertices in the run's output; 0 for NULL.
///
/// # Safety
/// `run` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn posort_run_len(run: *const PosortRun) -> usize {
    run.as_ref().map_or(0, |r| r.0.order.len())
}

/// Oracle queries the run used; 0 for NULL.
///
/// # Safety
/// `run` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn posort_run_queries(run: *const PosortRun) -> u64 {
    run.as_ref().map_or(0, |r| r.0.trace.totals.queries)
}

/// Vertices off the extracted longest path; 0 for NULL.
///
/// # Safety
/// `run` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn posort_run_k(run: *const PosortRun) -> usize {
    run.as_ref().map_or(0, |r| r.0.trace.k)
}

/// Copies the sorted order into `buf`, which must hold `posort_run_len`
/// values.
///
/// # Safety
/// `run` must be live; `buf` must point to `cap` writable values.
#[no_mangle]
pub unsafe extern "C" fn posort_run_order(
    run: *const PosortRun,
    buf: *mut usize,
    cap: usize,
) -> PosortStatus {
    guard(|| {
        let order = &deref(run)?.0.order;
        if cap < order.len() {
            return Err(PosortStatus::BufferTooSmall);
        }
        if order.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(PosortStatus::NullPointer);
        }
        ptr::copy_nonoverlapping(order.as_ptr(), buf, order.len());
        Ok(())
    })
}

/// # Safety
/// `run` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn posort_run_free(run: *mut PosortRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Exact number of linear extensions, for at most 20 vertices.
///
/// # Safety
/// `dag` must be live; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn posort_count_extensions(
    dag: *const PosortDag,
    out_value: *mut u64,
    out_log2: *mut f64,
) -> PosortStatus {
    guard(|| {
        let c = lift(count_extensions(&deref(dag)?.0))?;
        put(out_value, c.value)?;
        put(out_log2, c.log2_value)
    })
}

/// Runs the exact bound checks on a finished run. `oracle` must be the
/// order the run was sorted against.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn posort_run_check(
    dag: *const PosortDag,
    oracle: *const PosortOracle,
    run: *const PosortRun,
    out: *mut PosortCheckSummary,
) -> PosortStatus {
    guard(|| {
        let g = &deref(dag)?.0;
        let o = &deref(oracle)?.0;
        let r = &deref(run)?.0;
        if o.n() != g.n() || r.trace.n != g.n() {
            return Err(PosortStatus::BadParams);
        }
        let checks = check_run(g, &r.trace, o.ranks());
        let mut s = PosortCheckSummary {
            log2_e: checks.log2_e.unwrap_or(f64::NAN),
            sum_log2_d: checks.sum_log2_d,
            ..PosortCheckSummary::default()
        };
        for (_, c) in checks.all() {
            match c {
                CheckOutcome::Pass => s.passed += 1,
                CheckOutcome::Fail { .. } => s.failed += 1,
                CheckOutcome::Skipped { .. } => s.skipped += 1,
            }
        }
        put(out, s)
    })
}

/// Query totals of the two baseline sorts on the same input.
///
/// # Safety
/// `dag` and `oracle` must be live; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn posort_baseline_queries(
    dag: *const PosortDag,
    oracle: *const PosortOracle,
    out_heap_toposort: *mut u64,
    out_binary_insertion: *mut u64,
) -> PosortStatus {
    guard(|| {
        let g = &deref(dag)?.0;
        let o = &deref(oracle)?.0;
        let heap = lift(heap_toposort(g, &mut o.fresh()))?;
        let all: Vec<usize> = (0..g.n()).collect();
        let ins = lift(binary_insertion_sort(&all, &mut o.fresh()))?;
        put(out_heap_toposort, heap.queries)?;
        put(out_binary_insertion, ins.queries)
    })
}

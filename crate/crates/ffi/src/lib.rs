//! C interface to the `comic` crate.
//!
//! Graphs are opaque handles created by `comic_graph_*` and released with
//! `comic_graph_free`. Every other function returns a `ComicStatus`; on failure the message
//! is available from `comic_last_error` on the same thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use comic::learn::{learn_gaps, ActionLog, GapEstimate};
use comic::model::{estimate_boost, estimate_spread};
use comic::sandwich::{sandwich_select, SandwichConfig};
use comic::tim::{general_tim, TimParams};
use comic::world::{exact_spread, ExactOptions};
use comic::{EdgeListOptions, Error, GapSet, Graph, NodeId, Problem};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    Unweighted = 5,
    Regime = 6,
    Budget = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Which side the seeds are chosen for.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComicProblem {
    /// A-seeds maximizing A's spread given fixed B-seeds.
    SelfInfMax = 0,
    /// B-seeds maximizing the boost to A's spread given fixed A-seeds.
    CompInfMax = 1,
}

/// Opaque directed graph with edge probabilities.
pub struct ComicGraph {
    graph: Graph,
}

/// Global adoption probabilities.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct ComicGaps {
    pub q_a0: f64,
    pub q_ab: f64,
    pub q_b0: f64,
    pub q_ba: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ComicSpread {
    pub sigma_a: f64,
    pub sigma_b: f64,
    /// Zero for exact values.
    pub stderr_a: f64,
    pub stderr_b: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ComicBoost {
    pub boost: f64,
    pub stderr: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct ComicTimParams {
    pub k: usize,
    pub epsilon: f64,
    pub ell: f64,
    /// Number of RR-sets; 0 derives it from the bound.
    pub theta: u64,
    /// Keep the fixed seeds out of the candidates.
    pub exclude_fixed: bool,
}

/// Work summary of one selection; `ept_*` are mean edges examined per RR-set.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ComicRrStats {
    pub theta: u64,
    pub lb: f64,
    pub ept_f: f64,
    pub ept_b1: f64,
    pub ept_b2: f64,
    pub ept_bs: f64,
    pub ept_bo: f64,
    pub wall_time_ms: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ComicGapEstimate {
    /// False when the denominator is empty; the other fields are then zero.
    pub defined: bool,
    pub est: f64,
    pub n: u64,
    /// 95% interval.
    pub lo: f64,
    pub hi: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ComicLearnedGaps {
    pub q_a0: ComicGapEstimate,
    pub q_ab: ComicGapEstimate,
    pub q_b0: ComicGapEstimate,
    pub q_ba: ComicGapEstimate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(ComicStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io { .. } => ComicStatus::Io,
            Error::Parse { .. } => ComicStatus::Parse,
            Error::Invalid(_) => ComicStatus::InvalidArgument,
            Error::Unweighted => ComicStatus::Unweighted,
            Error::Regime { .. } => ComicStatus::Regime,
            Error::Budget(_) => ComicStatus::Budget,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: ComicStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ComicStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ComicStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            ComicStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const ComicGraph) -> Result<&'a Graph, Failure> {
    g.as_ref().map(|h| &h.graph).ok_or_else(|| fail(ComicStatus::NullPointer, "graph is null"))
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(ComicStatus::NullPointer, format!("{name} is null")))
}

/// A slice from a pointer and length; null is allowed when the length is zero.
unsafe fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(fail(ComicStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn string<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(ComicStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(ComicStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

fn gap_set(q: &ComicGaps) -> Result<GapSet, Failure> {
    Ok(GapSet::new(q.q_a0, q.q_ab, q.q_b0, q.q_ba)?)
}

fn problem(p: ComicProblem) -> Problem {
    match p {
        ComicProblem::SelfInfMax => Problem::SelfInfMax,
        ComicProblem::CompInfMax => Problem::CompInfMax,
    }
}

fn tim_params(p: &ComicTimParams) -> TimParams {
    TimParams {
        k: p.k,
        epsilon: p.epsilon,
        ell: p.ell,
        theta: (p.theta > 0).then_some(p.theta),
        exclude_fixed: p.exclude_fixed,
        ..TimParams::default()
    }
}

unsafe fn write_seeds(seeds: &[NodeId], out: *mut u32, capacity: usize, out_len: *mut usize) -> Result<(), Failure> {
    *out_ref(out_len, "out_len")? = seeds.len();
    if seeds.len() > capacity {
        return Err(fail(ComicStatus::BufferTooSmall, format!("{} seeds do not fit in {capacity}", seeds.len())));
    }
    if !seeds.is_empty() {
        if out.is_null() {
            return Err(fail(ComicStatus::NullPointer, "out_seeds is null"));
        }
        ptr::copy_nonoverlapping(seeds.as_ptr(), out, seeds.len());
    }
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn comic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn comic_default_tim_params() -> ComicTimParams {
    let d = TimParams::default();
    ComicTimParams { k: d.k, epsilon: d.epsilon, ell: d.ell, theta: 0, exclude_fixed: d.exclude_fixed }
}

/// Loads a whitespace-separated edge list (`u v [p]` per line). Unweighted graphs get
/// weighted-cascade probabilities `1 / in-degree`.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn comic_graph_load(
    path: *const c_char,
    undirected: bool,
    remap: bool,
    out: *mut *mut ComicGraph,
) -> ComicStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let path = string(path, "path")?;
        let mut graph = Graph::load_edge_list(Path::new(path), EdgeListOptions { undirected, remap })?;
        if !graph.is_weighted() {
            graph.assign_weighted_cascade();
        }
        *out = Box::into_raw(Box::new(ComicGraph { graph }));
        Ok(())
    })
}

/// Builds a graph on nodes `0..n` from `m` edges `src[i] -> dst[i]`. With `prob` null the
/// edges get weighted-cascade probabilities.
///
/// # Safety
/// `src` and `dst` (and `prob` unless null) must point to `m` elements.
#[no_mangle]
pub unsafe extern "C" fn comic_graph_from_edges(
    n: usize,
    src: *const u32,
    dst: *const u32,
    prob: *const f64,
    m: usize,
    out: *mut *mut ComicGraph,
) -> ComicStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let src = slice(src, m, "src")?;
        let dst = slice(dst, m, "dst")?;
        let prob = if prob.is_null() { None } else { Some(slice(prob, m, "prob")?) };
        let edges: Vec<_> = (0..m).map(|i| (src[i], dst[i], prob.map(|p| p[i]))).collect();
        let mut graph = Graph::from_edges(n, &edges)?;
        if prob.is_none() {
            graph.assign_weighted_cascade();
        }
        *out = Box::into_raw(Box::new(ComicGraph { graph }));
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn comic_graph_free(g: *mut ComicGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of nodes, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn comic_graph_node_count(g: *const ComicGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.n())
}

/// Number of edges, or 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn comic_graph_edge_count(g: *const ComicGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.m())
}

/// Monte Carlo estimate of both spreads. Depends only on `seed`, not on threads.
///
/// # Safety
/// Seed arrays must hold the given number of elements; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn comic_estimate_spread(
    g: *const ComicGraph,
    gaps: ComicGaps,
    seeds_a: *const u32,
    n_a: usize,
    seeds_b: *const u32,
    n_b: usize,
    iterations: usize,
    seed: u64,
    out: *mut ComicSpread,
) -> ComicStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let out = out_ref(out, "out")?;
        let e = estimate_spread(g, &gap_set(&gaps)?, slice(seeds_a, n_a, "seeds_a")?, slice(seeds_b, n_b, "seeds_b")?, iterations, seed)?;
        *out = ComicSpread { sigma_a: e.sigma_a, sigma_b: e.sigma_b, stderr_a: e.stderr_a, stderr_b: e.stderr_b };
        Ok(())
    })
}

/// Monte Carlo estimate of the increase in A's spread caused by the B-seeds.
///
/// # Safety
/// Seed arrays must hold the given number of elements; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn comic_estimate_boost(
    g: *const ComicGraph,
    gaps: ComicGaps,
    seeds_a: *const u32,
    n_a: usize,
    seeds_b: *const u32,
    n_b: usize,
    iterations: usize,
    seed: u64,
    out: *mut ComicBoost,
) -> ComicStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let out = out_ref(out, "out")?;
        let e = estimate_boost(g, &gap_set(&gaps)?, slice(seeds_a, n_a, "seeds_a")?, slice(seeds_b, n_b, "seeds_b")?, iterations, seed)?;
        *out = ComicBoost { boost: e.boost, stderr: e.stderr };
        Ok(())
    })
}

/// Exact spreads by enumeration; refuses graphs above 12 nodes or 20 edges with
/// `COMIC_STATUS_BUDGET`.
///
/// # Safety
/// Seed arrays must hold the given number of elements; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn comic_exact_spread(
    g: *const ComicGraph,
    gaps: ComicGaps,
    seeds_a: *const u32,
    n_a: usize,
    seeds_b: *const u32,
    n_b: usize,
    out: *mut ComicSpread,
) -> ComicStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let out = out_ref(out, "out")?;
        let e = exact_spread(
            g,
            &gap_set(&gaps)?,
            slice(seeds_a, n_a, "seeds_a")?,
            slice(seeds_b, n_b, "seeds_b")?,
            &ExactOptions::default(),
        )?;
        *out = ComicSpread { sigma_a: e.sigma_a, sigma_b: e.sigma_b, stderr_a: 0.0, stderr_b: 0.0 };
        Ok(())
    })
}

/// RR-set seed selection. Needs GAPs under which the objective is submodular, otherwise
/// returns `COMIC_STATUS_REGIME`; use `comic_sandwich` then. Writes the seeds to `out_seeds`
/// and their count to `out_len` (also on `COMIC_STATUS_BUFFER_TOO_SMALL`). `stats` may be
/// null.
///
/// # Safety
/// `fixed` must hold `n_fixed` elements and `out_seeds` `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn comic_select_seeds(
    g: *const ComicGraph,
    gaps: ComicGaps,
    problem_kind: ComicProblem,
    fixed: *const u32,
    n_fixed: usize,
    params: *const ComicTimParams,
    seed: u64,
    out_seeds: *mut u32,
    capacity: usize,
    out_len: *mut usize,
    stats: *mut ComicRrStats,
) -> ComicStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let params = params.as_ref().ok_or_else(|| fail(ComicStatus::NullPointer, "params is null"))?;
        let r = general_tim(g, &gap_set(&gaps)?, problem(problem_kind), slice(fixed, n_fixed, "fixed")?, &tim_params(params), seed)?;
        if let Some(s) = stats.as_mut() {
            let t = r.stats;
            *s = ComicRrStats {
                theta: t.theta,
                lb: t.lb,
                ept_f: t.ept_f,
                ept_b1: t.ept_b1,
                ept_b2: t.ept_b2,
                ept_bs: t.ept_bs,
                ept_bo: t.ept_bo,
                wall_time_ms: t.wall_time_ms,
            };
        }
        write_seeds(&r.seeds, out_seeds, capacity, out_len)
    })
}

/// Seed selection for any complementary GAPs: the best of the upper-bound, lower-bound and
/// greedy candidates, each scored with `eval_iterations` simulations. `ratio_upper` (may be
/// null) receives the estimated objective-to-upper-bound ratio of the upper-bound solution.
///
/// # Safety
/// `fixed` must hold `n_fixed` elements and `out_seeds` `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn comic_sandwich(
    g: *const ComicGraph,
    gaps: ComicGaps,
    problem_kind: ComicProblem,
    fixed: *const u32,
    n_fixed: usize,
    params: *const ComicTimParams,
    eval_iterations: usize,
    seed: u64,
    out_seeds: *mut u32,
    capacity: usize,
    out_len: *mut usize,
    ratio_upper: *mut f64,
) -> ComicStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let params = params.as_ref().ok_or_else(|| fail(ComicStatus::NullPointer, "params is null"))?;
        let cfg = SandwichConfig { tim: tim_params(params), eval_iterations, ..SandwichConfig::default() };
        let r = sandwich_select(g, &gap_set(&gaps)?, problem(problem_kind), slice(fixed, n_fixed, "fixed")?, &cfg, seed)?;
        if let Some(x) = ratio_upper.as_mut() {
            *x = r.ratio_upper;
        }
        write_seeds(&r.seeds, out_seeds, capacity, out_len)
    })
}

fn gap_estimate(e: &GapEstimate) -> ComicGapEstimate {
    match (e.est, e.lo, e.hi) {
        (Some(est), Some(lo), Some(hi)) => ComicGapEstimate { defined: true, est, n: e.n, lo, hi },
        _ => ComicGapEstimate { n: e.n, ..ComicGapEstimate::default() },
    }
}

/// Learns the four GAPs of `item_a` and `item_b` from a tab-separated action log
/// (`user item action time`, action `inform` or `rate`).
///
/// # Safety
/// The strings must be nul-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn comic_learn_gaps(
    log_path: *const c_char,
    item_a: *const c_char,
    item_b: *const c_char,
    out: *mut ComicLearnedGaps,
) -> ComicStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let log = ActionLog::load(Path::new(string(log_path, "log_path")?))?;
        let l = learn_gaps(&log, string(item_a, "item_a")?, string(item_b, "item_b")?)?;
        *out = ComicLearnedGaps {
            q_a0: gap_estimate(&l.q_a0),
            q_ab: gap_estimate(&l.q_ab),
            q_b0: gap_estimate(&l.q_b0),
            q_ba: gap_estimate(&l.q_ba),
        };
        Ok(())
    })
}

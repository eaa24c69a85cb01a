//! C ABI for commtune.
//!
//! Graphs and partitions are opaque heap handles owned by the caller and released
//! with `ct_graph_free` / `ct_partition_free`. Every fallible call returns a
//! [`CtStatus`]; on failure `ct_last_error_message` describes the error for the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use commtune::io::read_edge_list;
use commtune::{detect, tune, Error, Graph, Metric, ObjectiveKind, Partition, TuneConfig};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Malformed input data (edge list, labels, partition/graph mismatch).
    DataError = 3,
    Io = 4,
    /// The LFR generator could not realize the requested or estimated parameters.
    InfeasibleGeneration = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtAlgorithm {
    /// Modularity with resolution γ.
    Louvain = 0,
    /// Planted partition model with resolution γ.
    Ppm = 1,
    /// ILFR with mixing μ.
    Ilfr = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtMetric {
    Rand = 0,
    Jaccard = 1,
    Nmi = 2,
}

/// Opaque undirected graph.
pub struct CtGraph(Graph);

/// Opaque vertex partition tied to the graph it was built for.
pub struct CtPartition(Partition);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CtStatus {
    match e {
        _ if e.is_infeasible_generation() => CtStatus::InfeasibleGeneration,
        Error::InvalidParameter(_) | Error::SampleTooSmall(_) => CtStatus::InvalidArgument,
        Error::Io(_) => CtStatus::Io,
        _ => CtStatus::DataError,
    }
}

fn fail(status: CtStatus, message: impl Into<String>) -> CtStatus {
    set_error(message.into());
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), CtStatus>) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CtStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(CtStatus::Panic, format!("panic: {msg}"))
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, CtStatus>;
}

impl<T> OrStatus<T> for commtune::Result<T> {
    fn or_status(self) -> Result<T, CtStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, CtStatus> {
    // SAFETY: caller passes either null or a pointer obtained from this library
    unsafe { p.as_ref() }.ok_or_else(|| fail(CtStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<*mut T, CtStatus> {
    if p.is_null() {
        Err(fail(CtStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(p)
    }
}

fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], CtStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(CtStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: caller guarantees `len` readable elements at `p`
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn kind(algorithm: CtAlgorithm) -> ObjectiveKind {
    match algorithm {
        CtAlgorithm::Louvain => ObjectiveKind::Modularity,
        CtAlgorithm::Ppm => ObjectiveKind::Ppm,
        CtAlgorithm::Ilfr => ObjectiveKind::Ilfr,
    }
}

fn metric(m: CtMetric) -> Metric {
    match m {
        CtMetric::Rand => Metric::Rand,
        CtMetric::Jaccard => Metric::Jaccard,
        CtMetric::Nmi => Metric::Nmi,
    }
}

/// Message of the last failed call on this thread, or null if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ct_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph on vertices `0..n` from `m` edges `(src[i], dst[i])`.
///
/// # Safety
/// `src` and `dst` must each point to `m` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_graph_from_edges(
    n: usize,
    src: *const usize,
    dst: *const usize,
    m: usize,
    out: *mut *mut CtGraph,
) -> CtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let (s, d) = (slice(src, m, "src")?, slice(dst, m, "dst")?);
        let edges: Vec<(usize, usize)> = s.iter().copied().zip(d.iter().copied()).collect();
        let g = Graph::from_edges(n, &edges).or_status()?;
        // SAFETY: checked non-null above
        unsafe { *out = Box::into_raw(Box::new(CtGraph(g))) };
        Ok(())
    })
}

/// Reads a whitespace-separated edge list; vertex names are interned.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_graph_load_edge_list(path: *const c_char, out: *mut *mut CtGraph) -> CtStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if path.is_null() {
            return Err(fail(CtStatus::NullPointer, "path is null"));
        }
        // SAFETY: non-null, caller guarantees NUL termination
        let path = unsafe { CStr::from_ptr(path) }
            .to_str()
            .map_err(|_| fail(CtStatus::InvalidArgument, "path is not UTF-8"))?;
        let g = read_edge_list(Path::new(path)).or_status()?;
        // SAFETY: checked non-null above
        unsafe { *out = Box::into_raw(Box::new(CtGraph(g))) };
        Ok(())
    })
}

/// Number of vertices, 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_graph_num_vertices(graph: *const CtGraph) -> usize {
    unsafe { graph.as_ref() }.map_or(0, |g| g.0.n())
}

/// Number of edges, 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_graph_num_edges(graph: *const CtGraph) -> usize {
    unsafe { graph.as_ref() }.map_or(0, |g| g.0.edge_count())
}

/// Releases a graph; null is ignored.
///
/// # Safety
/// `graph` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ct_graph_free(graph: *mut CtGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Runs the Louvain engine with the given objective. `out_value` may be null.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_detect(
    graph: *const CtGraph,
    algorithm: CtAlgorithm,
    param: f64,
    seed: u64,
    out: *mut *mut CtPartition,
    out_value: *mut f64,
) -> CtStatus {
    guard(|| {
        let g = &non_null(graph, "graph")?.0;
        let out = out_ptr(out, "out")?;
        let objective = kind(algorithm).objective(param).or_status()?;
        let r = detect(g, &objective, seed).or_status()?;
        if !out_value.is_null() {
            // SAFETY: non-null, caller guarantees writability
            unsafe { *out_value = r.objective_value };
        }
        // SAFETY: checked non-null above
        unsafe { *out = Box::into_raw(Box::new(CtPartition(r.partition))) };
        Ok(())
    })
}

/// Partition of `graph` from one label per vertex (labels need not be dense).
///
/// # Safety
/// `labels` must point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_partition_from_labels(
    graph: *const CtGraph,
    labels: *const usize,
    n: usize,
    out: *mut *mut CtPartition,
) -> CtStatus {
    guard(|| {
        let g = &non_null(graph, "graph")?.0;
        let out = out_ptr(out, "out")?;
        let p = Partition::from_assignment(g, slice(labels, n, "labels")?).or_status()?;
        // SAFETY: checked non-null above
        unsafe { *out = Box::into_raw(Box::new(CtPartition(p))) };
        Ok(())
    })
}

/// Number of vertices covered, 0 for a null handle.
///
/// # Safety
/// `partition` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_partition_len(partition: *const CtPartition) -> usize {
    unsafe { partition.as_ref() }.map_or(0, |p| p.0.n())
}

/// Number of non-empty communities, 0 for a null handle.
///
/// # Safety
/// `partition` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_partition_num_communities(partition: *const CtPartition) -> usize {
    unsafe { partition.as_ref() }.map_or(0, |p| p.0.nonempty_communities())
}

/// Copies the community id of each vertex into `buf`, which holds `len` slots.
///
/// # Safety
/// `partition` must be a live handle; `buf` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn ct_partition_labels(
    partition: *const CtPartition,
    buf: *mut usize,
    len: usize,
) -> CtStatus {
    guard(|| {
        let p = &non_null(partition, "partition")?.0;
        let out = out_ptr(buf, "buf")?;
        if len < p.n() {
            return Err(fail(
                CtStatus::InvalidArgument,
                format!("buffer holds {len} labels, partition has {}", p.n()),
            ));
        }
        // SAFETY: caller guarantees `len >= n` writable slots
        unsafe { std::slice::from_raw_parts_mut(out, p.n()) }.copy_from_slice(p.assignment());
        Ok(())
    })
}

/// Releases a partition; null is ignored.
///
/// # Safety
/// `partition` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ct_partition_free(partition: *mut CtPartition) {
    if !partition.is_null() {
        drop(unsafe { Box::from_raw(partition) });
    }
}

/// Objective value of `partition` on `graph`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_objective_value(
    graph: *const CtGraph,
    partition: *const CtPartition,
    algorithm: CtAlgorithm,
    param: f64,
    out: *mut f64,
) -> CtStatus {
    guard(|| {
        let g = &non_null(graph, "graph")?.0;
        let p = &non_null(partition, "partition")?.0;
        let out = out_ptr(out, "out")?;
        let v = kind(algorithm).objective(param).or_status()?.value(g, p).or_status()?;
        // SAFETY: checked non-null above
        unsafe { *out = v };
        Ok(())
    })
}

/// Agreement between two partitions of the same vertex set.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_compare(
    a: *const CtPartition,
    b: *const CtPartition,
    which: CtMetric,
    out: *mut f64,
) -> CtStatus {
    guard(|| {
        let a = &non_null(a, "a")?.0;
        let b = &non_null(b, "b")?.0;
        let out = out_ptr(out, "out")?;
        let v = metric(which).evaluate(a, b).or_status()?;
        // SAFETY: checked non-null above
        unsafe { *out = v };
        Ok(())
    })
}

/// Chooses the parameter among `candidates` that best recovers planted communities
/// on `n_graphs` LFR graphs shaped like `graph`, `n_runs` detections per cell.
///
/// # Safety
/// `graph` must be live; `candidates` must hold `count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_tune(
    graph: *const CtGraph,
    algorithm: CtAlgorithm,
    candidates: *const f64,
    count: usize,
    which: CtMetric,
    n_graphs: usize,
    n_runs: usize,
    seed: u64,
    out: *mut f64,
) -> CtStatus {
    guard(|| {
        let g = &non_null(graph, "graph")?.0;
        let out = out_ptr(out, "out")?;
        let k = kind(algorithm);
        let mut config = TuneConfig::new(k, slice(candidates, count, "candidates")?.to_vec());
        config.metric = metric(which);
        config.n_graphs = n_graphs;
        config.n_runs = n_runs;
        config.master_seed = seed;
        let report = tune(g, k, &config).or_status()?;
        // SAFETY: checked non-null above
        unsafe { *out = report.chosen };
        Ok(())
    })
}

//! Replicate-level execution: data-parallel with rayon when the `parallel`
//! feature is on, with an always-available sequential path.
//!
//! Results are collected in replicate-index order, so reductions downstream
//! are deterministic regardless of how work was scheduled.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a batch of independent replicates should be executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    /// Uses the current rayon thread pool. Falls back to sequential when the
    /// crate is built without the `parallel` feature.
    Parallel,
}

impl Default for Mode {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Mode::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Mode::Sequential
    }
}

/// Maps `f` over `0..n` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, mode: Mode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        Mode::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Mode::Parallel => (0..n).into_par_iter().map(f).collect(),
        #[cfg(not(feature = "parallel"))]
        Mode::Parallel => (0..n).map(f).collect(),
    }
}

/// Runs `body` inside a rayon pool with `threads` workers (parallel builds).
/// With `threads == 0` the pool size is left to rayon. Sequential builds just
/// run `body`.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: usize, body: impl FnOnce() -> R + Send) -> R {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if threads > 0 {
        builder = builder.num_threads(threads);
    }
    match builder.build() {
        Ok(pool) => pool.install(body),
        Err(_) => body(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: usize, body: impl FnOnce() -> R + Send) -> R {
    body()
}

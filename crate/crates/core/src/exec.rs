//! Sequential / data-parallel execution of the crate's inner loops.
//!
//! Every helper here reduces with associative operations (sums, ordered
//! collection), so results are identical whichever mode or worker count is
//! used.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExecMode {
    Sequential,
    /// Falls back to sequential execution when built without `parallel`.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// `Σ f(i)` for `i` in `0..n`.
pub fn sum_range<F>(mode: ExecMode, n: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (0..n).into_par_iter().map(f).sum();
    }
    let _ = mode;
    (0..n).map(f).sum()
}

/// `[f(0), …, f(n-1)]`, in order.
pub fn map_range<T, F>(mode: ExecMode, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Ordered `filter_map` over `0..n`.
pub fn filter_map_range<T, F>(mode: ExecMode, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (0..n).into_par_iter().filter_map(f).collect();
    }
    let _ = mode;
    (0..n).filter_map(f).collect()
}

/// First (lowest index) `i` in `0..n` with `f(i)` returning `Some`.
pub fn find_first<T, F>(mode: ExecMode, n: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (0..n).into_par_iter().find_map_first(f);
    }
    let _ = mode;
    (0..n).find_map(f)
}

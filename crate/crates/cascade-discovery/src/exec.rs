//! Parallel/sequential execution of independent work items.
//!
//! With the `parallel` feature (default) [`map`] fans out over rayon and
//! collects results in input order, so outputs are identical to the
//! sequential fallback bit for bit. Disable default features for a fully
//! sequential build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Apply `f` to every item, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Apply `f` to every item, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Always-sequential variant, independent of feature flags. Used for
/// single-core timing and as the comparison arm in the benchmark suite.
pub fn map_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

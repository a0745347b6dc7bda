//! Data-parallel execution helpers.
//!
//! Batch operations (PageRank sweeps, per-assertion scoring, per-sentence LLM
//! fan-out) take a [`Parallelism`] selector. With the `parallel` feature
//! enabled (the default) `Parallelism::Parallel` runs on the rayon thread
//! pool; without it the same selector falls back to a sequential loop, so
//! callers never need feature-conditional code.

/// Execution mode for batch operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    /// Plain sequential iteration.
    Sequential,
    /// Rayon data parallelism; sequential fallback when the `parallel`
    /// feature is disabled.
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, R, F>(mode: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        Parallelism::Sequential => items.iter().map(f).collect(),
        Parallelism::Parallel => items.par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, R, F>(_mode: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n`, parallel or sequential per `mode`.
#[cfg(feature = "parallel")]
pub(crate) fn map_range<R, F>(mode: Parallelism, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        Parallelism::Sequential => (0..n).map(f).collect(),
        Parallelism::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<R, F>(_mode: Parallelism, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_slice(Parallelism::Sequential, &items, |x| x * x);
        let par = map_slice(Parallelism::Parallel, &items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(
            map_range(Parallelism::Parallel, 10, |i| i + 1),
            (1..=10).collect::<Vec<_>>()
        );
    }
}

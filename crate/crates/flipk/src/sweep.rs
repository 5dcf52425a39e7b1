//! Execution helpers for the sweep workloads (self-checks, batch CLI
//! evaluation). The core operations are pure, so sweeps are data-parallel.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every case, preserving input order in the output. Runs on
/// the rayon thread pool when the `parallel` feature is enabled, otherwise
/// falls back to a sequential loop.
pub fn map_cases<T, R, F>(cases: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        cases.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cases.iter().map(f).collect()
    }
}

/// Sequential reference implementation of `map_cases`; the benchmarks
/// compare the two on identical workloads.
pub fn map_cases_seq<T, R, F>(cases: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    cases.iter().map(f).collect()
}

//! Seeded trial sweeps, optionally in parallel.
//!
//! Results always come back in trial order, so the output of a sweep does not
//! depend on the number of threads.

use rayon::prelude::*;

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "EIGENBOUND_THREADS";

/// Worker count: `explicit`, else `EIGENBOUND_THREADS`, else rayon's default.
pub fn thread_count(explicit: Option<usize>) -> Result<Option<usize>> {
    if let Some(t) = explicit {
        if t == 0 {
            return Err(Error::Ensemble("thread count must be at least 1".into()));
        }
        return Ok(Some(t));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(Error::Ensemble(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `f(trial, spec_for_trial)` for `trial` in `0..trials`.
pub fn run<T, F>(base: &EnsembleSpec, trials: u64, threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, EnsembleSpec) -> T + Sync,
{
    let job = |trial: u64| f(trial, base.for_trial(trial));
    match thread_count(threads)? {
        Some(1) => Ok((0..trials).map(job).collect()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Ensemble(e.to_string()))?;
            Ok(pool.install(|| (0..trials).into_par_iter().map(job).collect()))
        }
        None => Ok((0..trials).into_par_iter().map(job).collect()),
    }
}

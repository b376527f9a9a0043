//! Deterministic parallel reductions.
//!
//! Sums are split into fixed-size chunks whose partial results are combined in
//! index order, so the floating-point result does not depend on the number of
//! worker threads.

use rayon::prelude::*;

use crate::algebra::{C64, ZERO};

const CHUNK: usize = 2048;

pub(crate) fn sum_c64<F>(n: usize, f: F) -> C64
where
    F: Fn(usize) -> C64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<C64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let hi = ((c + 1) * CHUNK).min(n);
            let mut s = ZERO;
            for i in c * CHUNK..hi {
                s += f(i);
            }
            s
        })
        .collect();
    partial.into_iter().fold(ZERO, |a, b| a + b)
}

pub(crate) fn sum_f64<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let hi = ((c + 1) * CHUNK).min(n);
            (c * CHUNK..hi).map(&f).sum::<f64>()
        })
        .collect();
    partial.into_iter().sum()
}

pub(crate) fn max_f64<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    (0..n).into_par_iter().map(&f).reduce(|| 0.0, f64::max)
}

/// Caps the global rayon pool from the `TOOL_THREADS` environment variable.
/// Absent or unparsable values leave the default (all cores).
pub fn configure_threads_from_env() {
    if let Some(n) = std::env::var("TOOL_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // A second initialization attempt fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

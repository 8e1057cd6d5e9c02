//! Execution strategy for the data-parallel inner loops.
//!
//! Enumeration and search partition their candidate spaces into
//! independent chunks; results are merged in chunk order, so the output
//! is identical for any worker count. `Mode::Parallel` uses the rayon
//! global pool when the `parallel` feature is enabled and silently
//! degrades to sequential execution otherwise.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Sequential,
    #[default]
    Parallel,
}

impl Mode {
    pub fn from_workers(workers: usize) -> Mode {
        if workers <= 1 {
            Mode::Sequential
        } else {
            Mode::Parallel
        }
    }
}

/// Map `f` over index chunks `[start, end)` of `0..total` and concatenate
/// the per-chunk outputs in chunk order.
pub fn map_chunks<T, F>(total: usize, chunk: usize, mode: Mode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize) -> Vec<T> + Sync,
{
    let chunk = chunk.max(1);
    let bounds: Vec<(usize, usize)> = (0..total)
        .step_by(chunk)
        .map(|s| (s, (s + chunk).min(total)))
        .collect();
    match mode {
        Mode::Sequential => bounds.into_iter().map(|(s, e)| f(s, e)).flatten().collect(),
        Mode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                bounds
                    .into_par_iter()
                    .map(|(s, e)| f(s, e))
                    .collect::<Vec<_>>()
                    .into_iter()
                    .flatten()
                    .collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                bounds.into_iter().map(|(s, e)| f(s, e)).flatten().collect()
            }
        }
    }
}

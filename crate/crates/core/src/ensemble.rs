//! Ordered data-parallel task execution.
//!
//! Tasks are pure functions of their index; results come back in index
//! order whatever the size of the rayon pool they run on, so any reduction
//! over them is independent of the worker count.

use rayon::prelude::*;

/// Runs `task(i)` for `i in 0..count` on the current rayon pool and returns
/// the results in index order.
pub fn run_indexed<T, F>(count: usize, task: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count as u64).into_par_iter().map(task).collect()
}

/// Fallible variant of [`run_indexed`]; the first error in index order wins.
pub fn try_run_indexed<T, E, F>(count: usize, task: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(u64) -> Result<T, E> + Sync + Send,
{
    let results: Vec<Result<T, E>> = run_indexed(count, task);
    results.into_iter().collect()
}

/// Runs `body` inside a dedicated pool of `workers` threads.
pub fn with_workers<R: Send>(workers: usize, body: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(body),
        Err(_) => body(),
    }
}

//! Chunked map/reduce with a rayon backend and a sequential fallback.
//!
//! Work is always split into the same fixed chunks and chunk results are
//! folded in chunk order, so the output never depends on the worker count.

use std::ops::Range;

/// How a data-parallel loop is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is off.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Runs `work` over `0..total` in chunks of `chunk` and folds the chunk
/// results in index order.
pub fn chunked_reduce<T, W, R>(
    exec: Execution,
    total: u64,
    chunk: u64,
    work: W,
    identity: T,
    reduce: R,
) -> T
where
    T: Send,
    W: Fn(Range<u64>) -> T + Sync,
    R: Fn(T, T) -> T,
{
    let chunk = chunk.max(1);
    let n_chunks = total.div_ceil(chunk);
    let range_of = |c: u64| c * chunk..((c + 1) * chunk).min(total);
    let parts: Vec<T> = if exec.is_parallel() {
        par_map(n_chunks, |c| work(range_of(c)))
    } else {
        (0..n_chunks).map(|c| work(range_of(c))).collect()
    };
    parts.into_iter().fold(identity, reduce)
}

#[cfg(feature = "parallel")]
fn par_map<T: Send, F: Fn(u64) -> T + Sync>(n: u64, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(&f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Send, F: Fn(u64) -> T + Sync>(n: u64, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Caps the global worker pool. Only the first call has an effect.
pub fn configure_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

/// Reads the `AMEN_THREADS` environment variable.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("AMEN_THREADS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Runs `f` inside a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
        {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_fixed() {
        let concat = |exec| {
            chunked_reduce(
                exec,
                103,
                10,
                |r| r.map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                String::new(),
                |a, b| {
                    if a.is_empty() {
                        b
                    } else {
                        a + "," + &b
                    }
                },
            )
        };
        let seq = concat(Execution::Sequential);
        assert_eq!(seq, concat(Execution::Parallel));
        assert_eq!(
            seq,
            (0..103)
                .map(|i: u64| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        assert_eq!(with_threads(3, || concat(Execution::Parallel)), seq);
    }

    #[test]
    fn empty_range() {
        assert_eq!(
            chunked_reduce(Execution::Parallel, 0, 8, |r| r.count(), 0, |a, b| a + b),
            0
        );
    }
}

//! Index-ordered batch execution.
//!
//! Results always come back in index order and each item depends only on its
//! index, so the worker count never changes an outcome.

/// Evaluates `f(0..n)` on the calling thread.
pub fn map_indexed_sequential<T, F>(n: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..n).map(f).collect()
}

/// Evaluates `f(0..n)` on a rayon pool of `workers` threads (one per core
/// when `None`). A single worker runs inline.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: u64, workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;

    match workers {
        Some(1) => map_indexed_sequential(n, f),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
            Err(_) => map_indexed_sequential(n, f),
        },
        None => (0..n).into_par_iter().map(f).collect(),
    }
}

/// Without the `parallel` feature every batch runs sequentially.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: u64, _workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    map_indexed_sequential(n, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_count_does_not_change_results() {
        let f = |i: u64| i.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
        let reference = map_indexed_sequential(1000, f);
        for workers in [None, Some(1), Some(2), Some(8)] {
            assert_eq!(map_indexed(1000, workers, f), reference);
        }
    }
}

//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! rayon's pool; without it every backend runs sequentially. Results are
//! always returned in index order, so output never depends on the backend or
//! thread count.

use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    Sequential,
    #[default]
    Parallel,
}

impl Backend {
    /// Whether `Parallel` actually runs in parallel in this build.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `(0..n).map(f)` collected in order.
pub fn map_range<T, F>(n: usize, backend: Backend, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match backend {
        #[cfg(feature = "parallel")]
        Backend::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Fallible [`map_range`]; the first error by index wins.
pub fn try_map_range<T, F>(n: usize, backend: Backend, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    map_range(n, backend, f).into_iter().collect()
}

/// Runs `op` with at most `jobs` worker threads (`0` = library default).
pub fn with_jobs<T, F>(jobs: usize, op: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(op);
            }
        }
    }
    let _ = jobs;
    op()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backends_agree() {
        let a = map_range(1000, Backend::Sequential, |i| i * i);
        let b = map_range(1000, Backend::Parallel, |i| i * i);
        assert_eq!(a, b);
        let c = with_jobs(2, || map_range(10, Backend::Parallel, |i| i + 1));
        assert_eq!(c, (1..=10).collect::<Vec<_>>());
    }
}

//! Data-parallel helpers with a sequential fallback.
//!
//! Every search in the crate funnels through these helpers. Results are
//! always reported in index order, so switching between [`Execution`]
//! variants never changes an answer.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How index-parallel loops are executed.
///
/// `Parallel` silently degrades to `Sequential` when the crate is built
/// without the `parallel` feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// The first `Some` in index order over `0..n`.
    pub fn find_map_first<R, F>(self, n: usize, f: F) -> Option<R>
    where
        R: Send,
        F: Fn(usize) -> Option<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().find_map_first(f),
            _ => (0..n).find_map(f),
        }
    }

    /// `f` applied to `0..n`, collected in index order.
    pub fn map<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Indices in `0..n` for which `keep` holds, in increasing order.
    pub fn filter(self, n: usize, keep: impl Fn(usize) -> bool + Sync + Send) -> Vec<usize> {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().filter(|&i| keep(i)).collect(),
            _ => (0..n).filter(|&i| keep(i)).collect(),
        }
    }

    pub fn all(self, n: usize, pred: impl Fn(usize) -> bool + Sync + Send) -> bool {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().all(pred),
            _ => (0..n).all(pred),
        }
    }
}

/// Sizes the global worker pool. Returns false when the pool was already
/// built or the crate has no parallel backend.
pub fn set_threads(n: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        false
    }
}

//! Execution strategy for the data-parallel oracles.
//!
//! With the `parallel` feature (default) work items are spread over the rayon
//! pool; without it, or with [`Execution::Sequential`], they run in order on
//! the calling thread. Reductions only merge integer counts, so both paths
//! give identical results.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

pub(crate) trait Merge: Send + Default {
    fn merge(self, other: Self) -> Self;
}

pub(crate) fn map_merge<R, F>(exec: Execution, range: Range<u64>, f: F) -> R
where
    R: Merge,
    F: Fn(u64) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(f).reduce(R::default, R::merge)
        }
        _ => range.map(f).fold(R::default(), R::merge),
    }
}

/// Cap the global worker pool; a no-op without the `parallel` feature.
pub fn set_thread_limit(threads: usize) -> crate::Result<()> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| crate::StackError::Internal(e.to_string()))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(())
    }
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

//! Execution strategy for the data-parallel inner loops.
//!
//! With the `parallel` feature the loops run on rayon's pool; without it
//! [`Parallelism::Parallel`] quietly degrades to the sequential path. Both
//! paths produce results in index order, so outputs never depend on the
//! choice.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parallelism {
    Sequential,
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

impl Parallelism {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Maps `f` over `0..len`, collecting in index order.
pub fn map_indexed<T, F>(len: usize, mode: Parallelism, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..len).map(f).collect()
}

/// Maps `f` over a slice, collecting in slice order.
pub fn map_slice<S, T, F>(items: &[S], mode: Parallelism, f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Fills `out` in chunks of `chunk` elements; `f(start, slice)` writes the
/// entries for indices `start..start + slice.len()`.
pub fn fill_chunks<T, F>(out: &mut [T], chunk: usize, mode: Parallelism, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() && out.len() > chunk {
        use rayon::prelude::*;
        out.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, slice)| f(i * chunk, slice));
        return;
    }
    let _ = mode;
    for (i, slice) in out.chunks_mut(chunk.max(1)).enumerate() {
        f(i * chunk.max(1), slice);
    }
}

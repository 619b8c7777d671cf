//! Data-parallel helpers. With the `parallel` feature these run on the
//! ambient rayon pool; without it they fall back to plain iterators. Every
//! helper returns results in index order so callers stay deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_indices<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..len).map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Smallest `i < len` satisfying `pred`.
#[cfg(feature = "parallel")]
pub(crate) fn find_first(len: u64, pred: impl Fn(u64) -> bool + Sync + Send) -> Option<u64> {
    (0..len).into_par_iter().find_first(|&i| pred(i))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_first(len: u64, pred: impl Fn(u64) -> bool + Sync + Send) -> Option<u64> {
    (0..len).find(|&i| pred(i))
}

/// Folds `0..len` in contiguous chunks and combines the chunk results left
/// to right. `combine` must be associative for the result to be independent
/// of the chunking.
pub(crate) fn chunked_fold<A, F, C>(len: u64, chunk: u64, identity: A, fold: F, combine: C) -> A
where
    A: Send + Sync + Clone,
    F: Fn(A, u64) -> A + Sync + Send,
    C: Fn(A, A) -> A + Sync + Send,
{
    let chunks = len.div_ceil(chunk.max(1)) as usize;
    let partial = map_indices(chunks, |c| {
        let start = c as u64 * chunk;
        let end = (start + chunk).min(len);
        (start..end).fold(identity.clone(), &fold)
    });
    partial.into_iter().fold(identity, combine)
}

//! Thin seam between the rayon data-parallel core and the sequential
//! fallback selected by disabling the `parallel` feature.
//!
//! Every helper is deterministic: mapped results keep index order and
//! `first_hit` always reports the lowest matching index, so both builds
//! produce identical values.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Evaluate `f` over `0..n` and return the lowest index with a `Some`
/// result, together with that result.
pub(crate) fn first_hit<R, F>(n: usize, f: F) -> Option<(usize, R)>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .filter_map(|k| f(k).map(|r| (k, r)))
            .find_first(|_| true)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).filter_map(|k| f(k).map(|r| (k, r))).next()
    }
}

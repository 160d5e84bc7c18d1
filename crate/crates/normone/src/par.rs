//! Data-parallel helpers. With the `parallel` feature (default) the sweeps
//! run on rayon; without it they fall back to the sequential path. The
//! `*_seq` variants are always sequential so benchmarks can compare.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over the items, in parallel when the feature is enabled.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential twin of [`par_map`].
pub fn par_map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// True when every item satisfies the predicate, evaluated in parallel
/// when the feature is enabled.
pub fn par_all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().all(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().all(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_matches_seq() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = par_map(&xs, |x| x * x);
        let b = par_map_seq(&xs, |x| x * x);
        assert_eq!(a, b);
    }

    #[test]
    fn all_short_circuits_consistently() {
        let xs: Vec<u64> = (0..100).collect();
        assert!(par_all(&xs, |x| *x < 100));
        assert!(!par_all(&xs, |x| *x < 50));
    }
}

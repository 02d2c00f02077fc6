//! Execution strategy for the data-parallel loops.
//!
//! With the `parallel` feature (default) `Exec::Parallel` runs on the rayon
//! global pool; without it every strategy degrades to a plain sequential loop.
//! Results are always returned in input order, and every reduction used in
//! this crate is exact, so output never depends on the strategy.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Ordered map over a slice.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Ordered map over an index range.
    pub fn map_range<U, F>(self, range: std::ops::Range<usize>, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).collect()
            }
            _ => range.map(f).collect(),
        }
    }

    /// Map then fold with an associative, commutative operation.
    pub fn map_reduce<T, U, F, R, Z>(self, items: &[T], f: F, zero: Z, reduce: R) -> U
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
        Z: Fn() -> U + Sync + Send,
        R: Fn(U, U) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).reduce(zero, reduce)
            }
            _ => items.iter().map(f).fold(zero(), reduce),
        }
    }
}

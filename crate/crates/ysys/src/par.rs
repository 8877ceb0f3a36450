//! Execution strategy for the data-parallel hot loops.
//!
//! With the `parallel` feature enabled (the default), `Strategy::Parallel`
//! fans work out over rayon; without it, `Parallel` silently degrades to the
//! sequential path so callers never need to branch on the feature.

/// How to run embarrassingly-parallel loops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether this strategy will actually use worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Map `f` over `items`, parallel or sequential per `strategy`.
pub fn map_collect<T, U, F>(strategy: Strategy, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    let _ = strategy;
    items.into_iter().map(f).collect()
}

/// Find any item for which `f` returns `Some`, parallel or sequential.
pub fn find_map_any<T, U, F>(strategy: Strategy, items: Vec<T>, f: F) -> Option<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().find_map_any(f);
    }
    let _ = strategy;
    items.into_iter().find_map(f)
}

//! Execution strategy for batch sweeps.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! work out over rayon's global pool. Without it every sweep runs on the
//! calling thread and `Parallel` behaves exactly like `Sequential`.

use std::ops::Range;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `f` over an index range, preserving order.
pub fn map_range<R, F>(exec: Execution, range: Range<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map(Execution::Sequential, &items, |x| x * x);
        let par = map(Execution::Parallel, &items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(
            map_range(Execution::Sequential, 0..50, |i| i + 1),
            map_range(Execution::Parallel, 0..50, |i| i + 1)
        );
    }
}

//! Data-parallel helpers with a sequential fallback.

/// Execution mode for batch computations. Without the `parallel` feature both
/// modes run sequentially.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

/// `(0..n).map(f)` in index order, possibly evaluated in parallel.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_range(exec, items.len(), |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let a = map_range(Exec::Sequential, 50, |i| i * i);
        let b = map_range(Exec::Parallel, 50, |i| i * i);
        assert_eq!(a, b);
        assert_eq!(a[7], 49);
    }
}

//! Order-preserving batch evaluation.
//!
//! With the `parallel` feature (default) work is spread over the current rayon pool;
//! [`set_parallel`] switches to the sequential path at runtime, which is what the
//! benches and `--jobs 1` use. Both paths return results in input order.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(cfg!(feature = "parallel"));

/// Enables or disables the parallel path. Has no effect without the `parallel` feature.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled && cfg!(feature = "parallel"), Ordering::Relaxed);
}

pub fn is_parallel() -> bool {
    PARALLEL.load(Ordering::Relaxed)
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}

/// Maps `f` over `items` and concatenates the per-item outputs in input order.
pub fn flat_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Vec<R> + Sync + Send,
{
    map(items, f).into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        set_parallel(false);
        let seq = map(&items, |x| x * x);
        set_parallel(true);
        let par = map(&items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(flat_map(&items[..3], |&x| vec![x; x as usize]), vec![1, 2, 2]);
    }
}

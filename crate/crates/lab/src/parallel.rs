//! Replica-level parallelism with results in replica order, so output does
//! not depend on the thread count.

use rayon::prelude::*;

use crate::error::{LabError, Result};

/// `f(0), ..., f(count - 1)` evaluated in parallel and returned in order.
pub fn ordered_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// [`ordered_map`] for fallible jobs; the first error in replica order wins.
pub fn try_ordered_map<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    ordered_map(count, f).into_iter().collect()
}

/// Runs `job` on a pool of `threads` workers; `None` uses the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(0) => Err(LabError::invalid("threads", "must be positive")),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| LabError::Runtime(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_threads() {
        let a = with_threads(Some(1), || ordered_map(100, |i| i * i)).unwrap();
        let b = with_threads(Some(4), || ordered_map(100, |i| i * i)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[7], 49);
        assert!(with_threads(Some(0), || ()).is_err());
    }

    #[test]
    fn first_error_in_order() {
        let r: Result<Vec<usize>> =
            try_ordered_map(10, |i| if i >= 3 { Err(LabError::Runtime(format!("{i}"))) } else { Ok(i) });
        assert!(matches!(r, Err(LabError::Runtime(s)) if s == "3"));
    }
}

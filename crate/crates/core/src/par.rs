//! Data-parallel helpers. With the `parallel` feature, independent jobs run
//! on a crate-local rayon pool sized by [`set_jobs`]; otherwise, or with one
//! job, they run sequentially. Output order never depends on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};

static JOBS: AtomicUsize = AtomicUsize::new(0);

/// Sets the parallelism degree; `0` means one worker per available core.
pub fn set_jobs(n: usize) {
    JOBS.store(n, Ordering::SeqCst);
}

pub fn jobs() -> usize {
    match JOBS.load(Ordering::SeqCst) {
        0 => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        n => n,
    }
}

#[cfg(feature = "parallel")]
mod pool {
    use std::sync::{Arc, Mutex};

    use rayon::ThreadPool;

    static POOL: Mutex<Option<(usize, Arc<ThreadPool>)>> = Mutex::new(None);

    pub fn get(n: usize) -> Option<Arc<ThreadPool>> {
        let mut guard = POOL.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((size, pool)) = guard.as_ref() {
            if *size == n {
                return Some(pool.clone());
            }
        }
        let pool = Arc::new(rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()?);
        *guard = Some((n, pool.clone()));
        Some(pool)
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, G>(items: &[T], f: G) -> Vec<R>
where
    T: Sync,
    R: Send,
    G: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        let n = jobs();
        if n > 1 && items.len() > 1 && rayon::current_thread_index().is_none() {
            if let Some(pool) = pool::get(n) {
                use rayon::prelude::*;
                return pool.install(|| items.par_iter().map(&f).collect());
            }
        }
        if rayon::current_thread_index().is_some() {
            // already inside the pool: let rayon split nested work
            use rayon::prelude::*;
            return items.par_iter().map(&f).collect();
        }
    }
    items.iter().map(f).collect()
}

/// Like [`map`] for fallible jobs; the first error in item order wins.
pub fn try_map<T, R, E, G>(items: &[T], f: G) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    G: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(items, f).into_iter().collect()
}

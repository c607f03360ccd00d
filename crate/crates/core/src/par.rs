//! Order-preserving data-parallel map.
//!
//! With the `parallel` feature, `workers > 1` runs the map on a rayon pool of
//! that many threads. Without the feature, or with `workers <= 1`, it is a
//! plain sequential iterator. Either way the output order is the input
//! order, so callers that reduce left-to-right get worker-count independent
//! results.

#[cfg(feature = "parallel")]
mod pool {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};

    use rayon::ThreadPool;

    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();

    pub fn get(workers: usize) -> Arc<ThreadPool> {
        let mut pools = POOLS.get_or_init(Default::default).lock().expect("pool registry poisoned");
        pools
            .entry(workers)
            .or_insert_with(|| {
                Arc::new(
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(workers)
                        .thread_name(move |i| format!("defset-{workers}-{i}"))
                        .build()
                        .expect("thread pool"),
                )
            })
            .clone()
    }
}

/// Whether this build can run work on more than one thread.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

pub fn map_indexed<R, F>(len: usize, workers: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers > 1 && len > 1 {
        use rayon::prelude::*;
        return pool::get(workers).install(|| (0..len).into_par_iter().map(&f).collect());
    }
    let _ = workers;
    (0..len).map(f).collect()
}

pub fn map_slice<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_indexed(items.len(), workers, |i| f(&items[i]))
}

/// The first `Some` of `f(0), f(1), ...`, in index order. Indices are
/// evaluated in batches of a few per worker, so a hit near the front stops
/// the scan early while the answer stays the sequential one.
pub fn find_map_first<R, F>(len: usize, workers: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    if workers <= 1 {
        return (0..len).find_map(f);
    }
    let batch = workers * 4;
    (0..len).step_by(batch).find_map(|start| {
        let end = (start + batch).min(len);
        map_indexed(end - start, workers, |i| f(start + i)).into_iter().flatten().next()
    })
}

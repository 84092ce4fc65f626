//! Worker pools sized by the caller's `jobs` setting.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::{ThreadPool, ThreadPoolBuilder};

fn pool(jobs: usize) -> Option<Arc<ThreadPool>> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().ok()?;
    if let Some(p) = pools.get(&jobs) {
        return Some(p.clone());
    }
    let p = Arc::new(ThreadPoolBuilder::new().num_threads(jobs).build().ok()?);
    pools.insert(jobs, p.clone());
    Some(p)
}

/// Runs `f` on a pool with `jobs` workers (`0` means rayon's default).
/// Results never depend on `jobs`: every parallel pass in the crate merges
/// into an order-independent structure before anything is emitted.
pub fn run<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    match pool(jobs) {
        Some(p) => p.install(f),
        None => f(),
    }
}

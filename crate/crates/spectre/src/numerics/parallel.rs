use std::sync::OnceLock;

use rayon::ThreadPool;

/// Environment variable capping internal parallelism.
pub const THREADS_VAR: &str = "SPECTRE_THREADS";

/// Worker count from `SPECTRE_THREADS`, or rayon's default when unset or invalid.
pub fn thread_count() -> usize {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build().expect("thread pool")
    })
}

/// Runs `f` inside the crate's pool so nested rayon iterators respect the cap.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    pool().install(f)
}

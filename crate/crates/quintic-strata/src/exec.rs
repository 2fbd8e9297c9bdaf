//! Worker-pool helper for embarrassingly parallel trial loops.
//!
//! The worker cap comes from `QUINTIC_STRATA_THREADS`, defaulting to the
//! available parallelism.  Output order always matches input order.

pub fn worker_count() -> usize {
    if let Ok(v) = std::env::var("QUINTIC_STRATA_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Apply `f` to `0..n` across the worker pool, collecting results in order.
pub fn par_map<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync,
{
    let workers = worker_count().min(n.max(1));
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let mut out: Vec<Option<R>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        let mut rest: &mut [Option<R>] = &mut out;
        let mut start = 0usize;
        let mut handles = Vec::new();
        while start < n {
            let take = chunk.min(n - start);
            let (head, tail) = rest.split_at_mut(take);
            rest = tail;
            let base = start;
            let fref = &f;
            handles.push(scope.spawn(move || {
                for (i, slot) in head.iter_mut().enumerate() {
                    *slot = Some(fref(base + i));
                }
            }));
            start += take;
        }
        for h in handles {
            h.join().expect("worker panicked");
        }
    });
    out.into_iter().map(|r| r.expect("filled")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let out = par_map(100, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}

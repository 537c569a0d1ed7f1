//! Thin data-parallel helpers. With the `parallel` feature (default) these
//! fan out over rayon; without it they run sequentially with identical
//! results, since every merge below is a commutative, associative fold.

use std::ops::Range;

/// Fills a `Vec<u8>` of length `total`; `f(start, chunk)` writes the values
/// for indices `start..start + chunk.len()`.
pub(crate) fn map_u8_range(total: usize, f: impl Fn(usize, &mut [u8]) + Sync) -> Vec<u8> {
    let mut out = vec![0u8; total];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let chunk = chunk_len(total);
        out.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i * chunk, c));
    }
    #[cfg(not(feature = "parallel"))]
    f(0, &mut out);
    out
}

/// Folds `f` over `0..total` into a `u64` accumulator vector of length
/// `acc_len`; partial accumulators are merged by element-wise addition.
pub(crate) fn fold_u64_range(
    total: u64,
    acc_len: usize,
    f: impl Fn(Range<u64>, &mut [u64]) + Sync,
) -> Vec<u64> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let chunk = chunk_len(total.min(usize::MAX as u64) as usize) as u64;
        let n_chunks = total.div_ceil(chunk);
        return (0..n_chunks)
            .into_par_iter()
            .fold(
                || vec![0u64; acc_len],
                |mut acc, i| {
                    let lo = i * chunk;
                    let hi = (lo + chunk).min(total);
                    f(lo..hi, &mut acc);
                    acc
                },
            )
            .reduce(
                || vec![0u64; acc_len],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut acc = vec![0u64; acc_len];
        f(0..total, &mut acc);
        acc
    }
}

#[cfg(feature = "parallel")]
fn chunk_len(total: usize) -> usize {
    let workers = rayon::current_num_threads().max(1);
    (total / (workers * 8)).clamp(1 << 12, 1 << 20).min(total.max(1))
}

/// Runs `op` on a rayon pool with the requested worker count (0 = default);
/// without the `parallel` feature `op` just runs on the current thread.
pub fn with_workers<T: Send>(workers: usize, op: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        if workers == 0 {
            op()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("failed to build worker pool")
                .install(op)
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        op()
    }
}

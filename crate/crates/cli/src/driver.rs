//! Chunk-parallel summation with a deterministic in-order merge.
//!
//! The term range is cut into the library's fixed chunk grid; a batch of
//! `workers` chunks is evaluated on scoped threads, then absorbed strictly
//! in chunk order through the same merge types the sequential evaluator
//! uses. The folded result is therefore bit-identical for every worker
//! count — parallelism changes only who computes a chunk, never the order
//! in which chunks meet the accumulator.

use std::ops::Range;
use std::thread;

use sintail_core::{
    chunk_certified, chunk_count, chunk_fast, chunk_range, partial_sum_with_progress,
    CertifiedSumParts, Ctx, Engine, FastSumParts, PartialSum, PrecisionBits,
    Result as CoreResult,
};

const PROGRESS_STEP: u64 = 1_000_000;

/// Sums the first `n_max` terms on `workers` threads. With one worker the
/// sequential evaluator runs directly on the caller's context.
pub fn partial_sum_parallel(
    n_max: u64,
    engine: Engine,
    p: PrecisionBits,
    workers: usize,
    ctx: &mut Ctx,
    progress: &mut dyn FnMut(u64),
) -> CoreResult<PartialSum> {
    if workers <= 1 || chunk_count(n_max) <= 1 {
        return partial_sum_with_progress(n_max, engine, p, ctx, progress);
    }
    let chunks = chunk_count(n_max);
    match engine {
        Engine::Fast => {
            let mut parts = FastSumParts::new();
            let mut next = 0u64;
            while next < chunks {
                let end = (next + workers as u64).min(chunks);
                for chunk in eval_batch(next..end, |c, ctx| chunk_fast(c, n_max, ctx))? {
                    let (first, last) = (chunk.first_n, chunk.last_n);
                    parts.absorb(&chunk)?;
                    report_progress(first, last, progress);
                }
                next = end;
            }
            parts.finish(n_max)
        }
        Engine::Certified => {
            let mut parts = CertifiedSumParts::new(p);
            let mut next = 0u64;
            while next < chunks {
                let end = (next + workers as u64).min(chunks);
                let batch = eval_batch(next..end, |c, ctx| chunk_certified(c, n_max, p, ctx))?;
                for (c, value) in (next..end).zip(&batch) {
                    let (first, last) = chunk_range(c, n_max)?;
                    parts.absorb(c, n_max, value)?;
                    report_progress(first, last, progress);
                }
                next = end;
            }
            parts.finish(n_max)
        }
    }
}

/// Evaluates one chunk per scoped thread, each with its own context, and
/// returns the results in chunk order.
fn eval_batch<T, F>(range: Range<u64>, eval: F) -> CoreResult<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut Ctx) -> CoreResult<T> + Sync,
{
    let results: Vec<CoreResult<T>> = thread::scope(|s| {
        let handles: Vec<_> = range
            .map(|c| {
                let eval = &eval;
                s.spawn(move || {
                    let mut ctx = Ctx::new();
                    eval(c, &mut ctx)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("summation worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

/// Invokes `progress` for every million-term boundary inside [first, last],
/// mirroring the sequential evaluator's reporting points.
fn report_progress(first: u64, last: u64, progress: &mut dyn FnMut(u64)) {
    let mut m = first.div_ceil(PROGRESS_STEP).max(1);
    while m * PROGRESS_STEP <= last {
        progress(m * PROGRESS_STEP);
        m += 1;
    }
}

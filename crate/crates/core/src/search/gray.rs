//! Exhaustive `f(r)` over all line subsets by reflected Gray code.

use crate::bits::LineSet;
use crate::error::{param, Result};
use crate::plane::Plane;

/// Largest plane searched: `2^N` steps must stay feasible (q <= 5).
pub const MAX_N: usize = 40;

/// Chunks of the subset space, fixed by the top lines; each is one
/// independent Gray-code run.
const CHUNK_BITS: usize = 4;

/// Per-`r` minimum of `|P^o(R)|` with the first line set attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exhaustive {
    pub values: Vec<usize>,
    pub witnesses: Vec<LineSet>,
    /// Subsets visited; always `2^N`.
    pub steps: u64,
}

struct Chunk {
    best: Vec<(u32, u64)>,
    steps: u64,
}

fn run_chunk(masks: &[u64], low: usize, prefix: u64) -> Chunk {
    let n = masks.len();
    let mut best = vec![(u32::MAX, 0u64); n + 1];
    let mut code = prefix << low;
    let mut parity = (0..n).filter(|&i| code >> i & 1 == 1).fold(0u64, |acc, i| acc ^ masks[i]);
    let mut r = code.count_ones() as usize;
    best[r] = (parity.count_ones(), code);
    let mut steps = 1u64;
    for i in 1u64..(1u64 << low) {
        let bit = i.trailing_zeros() as usize;
        code ^= 1 << bit;
        parity ^= masks[bit];
        if code >> bit & 1 == 1 {
            r += 1;
        } else {
            r -= 1;
        }
        let v = parity.count_ones();
        if v < best[r].0 {
            best[r] = (v, code);
        }
        steps += 1;
    }
    Chunk { best, steps }
}

/// Exact `f(r)` for every `0 <= r <= N`: `2^N` steps, each one XOR of a
/// line mask and one popcount.
///
/// Chunks are shared round-robin among `workers` threads and merged by
/// `(value, chunk)`, so the result does not depend on `workers`.
pub fn exhaustive_f(plane: &Plane, workers: usize) -> Result<Exhaustive> {
    let n = plane.n();
    if n > MAX_N {
        return param(format!("exhaustive search needs N <= {MAX_N}, got {n}"));
    }
    let masks: Vec<u64> = (0..n).map(|l| plane.line_points(l).words()[0]).collect();
    let top = CHUNK_BITS.min(n);
    let low = n - top;
    let chunks = 1u64 << top;
    let workers = workers.clamp(1, chunks as usize);
    let results: Vec<Vec<(u64, Chunk)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let masks = &masks;
                s.spawn(move || (w as u64..chunks).step_by(workers).map(|c| (c, run_chunk(masks, low, c))).collect())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut by_chunk: Vec<(u64, Chunk)> = results.into_iter().flatten().collect();
    by_chunk.sort_by_key(|(c, _)| *c);
    let mut best = vec![(u32::MAX, 0u64); n + 1];
    let mut steps = 0;
    for (_, chunk) in &by_chunk {
        steps += chunk.steps;
        for (slot, &cand) in best.iter_mut().zip(&chunk.best) {
            if cand.0 < slot.0 {
                *slot = cand;
            }
        }
    }
    Ok(Exhaustive {
        values: best.iter().map(|&(v, _)| v as usize).collect(),
        witnesses: best.iter().map(|&(_, code)| LineSet::from_words(n, vec![code])).collect(),
        steps,
    })
}

//! Seeded local search for upper-bound witnesses.
//!
//! Point mode looks for an even set `S` of a given size with exactly `r'`
//! odd lines, which proves `f(r) <= |S|`. Line mode minimizes `|P^o(R)|`
//! over `r`-sets of lines and always yields a valid witness.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{BitSet, LineSet, PointSet};
use crate::error::{param, Result};
use crate::plane::Plane;
use crate::witness::Witness;

/// Limits for one call of [`random_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalConfig {
    /// Moves across all restarts; the deterministic budget.
    pub steps: u64,
    /// Moves without a new best before restarting.
    pub stall: u64,
    /// Wall-clock cap; a run stopped by it may not be reproducible.
    pub wall: Option<Duration>,
}

impl Default for LocalConfig {
    fn default() -> Self {
        LocalConfig { steps: 200_000, stall: 2_000, wall: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalOutcome {
    pub r: usize,
    pub target: usize,
    /// Best witness found; proves `f(r) <= value`.
    pub witness: Witness,
    pub value: usize,
    pub reached: bool,
    pub steps: u64,
    /// Whether the wall-clock cap ended the run.
    pub timed_out: bool,
}

/// Swap-move local search over `k`-subsets of `0..n` minimizing `score`
/// of the XOR of the chosen masks. Returns the best subset and score.
struct Swapper<'a, const W: usize> {
    masks: &'a [[u64; W]],
    cfg: LocalConfig,
    started: Instant,
    steps: u64,
    timed_out: bool,
}

fn xor<const W: usize>(a: &[u64; W], b: &[u64; W]) -> [u64; W] {
    std::array::from_fn(|i| a[i] ^ b[i])
}

fn popcount<const W: usize>(a: &[u64; W]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

impl<const W: usize> Swapper<'_, W> {
    fn out_of_budget(&mut self) -> bool {
        if self.steps >= self.cfg.steps {
            return true;
        }
        if self.steps % 256 == 0 && self.cfg.wall.is_some_and(|w| self.started.elapsed() >= w) {
            self.timed_out = true;
            return true;
        }
        false
    }

    /// One descent run from `start`; stops at `goal` or on stall.
    fn descend(
        &mut self,
        start: Vec<usize>,
        score: &impl Fn(usize) -> usize,
        goal: usize,
        rng: &mut ChaCha8Rng,
    ) -> (Vec<usize>, usize) {
        let n = self.masks.len();
        let mut inside = vec![false; n];
        start.iter().for_each(|&i| inside[i] = true);
        let mut cur = start;
        let mut acc = cur.iter().fold([0u64; W], |a, &i| xor(&a, &self.masks[i]));
        let mut cur_score = score(popcount(&acc));
        let (mut best, mut best_score) = (cur.clone(), cur_score);
        let mut tabu = vec![0u64; n];
        let mut since = 0;
        while best_score > goal && since < self.cfg.stall && !self.out_of_budget() {
            self.steps += 1;
            since += 1;
            let mut moves: Vec<(usize, usize)> = Vec::new();
            let mut move_score = usize::MAX;
            for (slot, &a) in cur.iter().enumerate() {
                let without = xor(&acc, &self.masks[a]);
                for b in 0..n {
                    if inside[b] || tabu[b] > self.steps {
                        continue;
                    }
                    let s = score(popcount(&xor(&without, &self.masks[b])));
                    if s < move_score {
                        move_score = s;
                        moves.clear();
                    }
                    if s == move_score {
                        moves.push((slot, b));
                    }
                }
            }
            let Some(&(slot, b)) = moves.choose(rng) else { break };
            let a = cur[slot];
            acc = xor(&xor(&acc, &self.masks[a]), &self.masks[b]);
            inside[a] = false;
            inside[b] = true;
            cur[slot] = b;
            tabu[a] = self.steps + 1 + rng.gen_range(0..(n as u64 / 8).max(2));
            cur_score = move_score;
            if cur_score < best_score {
                best_score = cur_score;
                best = cur.clone();
                since = 0;
            }
        }
        (best, best_score)
    }

    /// Restarts from `seeds` in turn, then from random subsets.
    fn run(
        &mut self,
        k: usize,
        seeds: &[Vec<usize>],
        score: impl Fn(usize) -> usize,
        goal: usize,
        rng: &mut ChaCha8Rng,
    ) -> (Vec<usize>, usize) {
        let n = self.masks.len();
        let mut best: Option<(Vec<usize>, usize)> = None;
        let mut round = 0;
        loop {
            let start = match seeds.get(round) {
                Some(s) => s.clone(),
                None => rand::seq::index::sample(rng, n, k).into_vec(),
            };
            round += 1;
            let (set, s) = self.descend(start, &score, goal, rng);
            if best.as_ref().is_none_or(|(_, b)| s < *b) {
                best = Some((set, s));
            }
            if best.as_ref().is_some_and(|(_, b)| *b <= goal) || self.out_of_budget() {
                break;
            }
        }
        best.expect("at least one round")
    }
}

fn masks<T, const W: usize>(sets: impl Iterator<Item = BitSet<T>>) -> Vec<[u64; W]> {
    sets.map(|s| std::array::from_fn(|i| s.words().get(i).copied().unwrap_or(0))).collect()
}

/// Searches for a witness of `f(r) <= target`.
///
/// Point mode runs first over even sets of size `target`, seeded by those
/// `seeds` of that size; if it fails, line mode minimizes `|P^o(R)|` with
/// the rest of the step budget, seeded by the line sets of the seeds. The
/// result is the best verified witness either mode produced.
pub fn random_witness(
    plane: &Plane,
    r: usize,
    target: usize,
    seeds: &[PointSet],
    cfg: LocalConfig,
    rng: &mut ChaCha8Rng,
) -> Result<LocalOutcome> {
    match plane.n().div_ceil(64) {
        1 => local_words::<1>(plane, r, target, seeds, cfg, rng),
        2 => local_words::<2>(plane, r, target, seeds, cfg, rng),
        3 => local_words::<3>(plane, r, target, seeds, cfg, rng),
        4 => local_words::<4>(plane, r, target, seeds, cfg, rng),
        w => param(format!("local search supports N <= 256, got {w} words")),
    }
}

fn local_words<const W: usize>(
    plane: &Plane,
    r: usize,
    target: usize,
    seeds: &[PointSet],
    cfg: LocalConfig,
    rng: &mut ChaCha8Rng,
) -> Result<LocalOutcome> {
    let n = plane.n();
    if r == 0 || r >= n {
        return param(format!("r={r} must lie strictly between 0 and N={n}"));
    }
    let r_even = if r % 2 == 0 { r } else { n - r };
    let pencils: Vec<[u64; W]> = masks((0..n).map(|p| plane.point_lines(p).clone()));
    let lines: Vec<[u64; W]> = masks((0..n).map(|l| plane.line_points(l).clone()));
    let mut sw = Swapper::<W> { masks: &pencils, cfg, started: Instant::now(), steps: 0, timed_out: false };
    let mut outcome: Option<(Witness, usize)> = None;

    if target % 2 == 0 && target >= 2 && target < n {
        let point_seeds: Vec<Vec<usize>> = seeds.iter().filter(|s| s.count() == target).map(PointSet::to_vec).collect();
        let (set, miss) = sw.run(target, &point_seeds, |c| c.abs_diff(r_even), 0, rng);
        if miss == 0 {
            outcome = Some((Witness::OddSet(PointSet::from_indices(n, set)), target));
        }
    }
    if outcome.is_none() {
        sw.masks = &lines;
        sw.cfg.steps = cfg.steps.max(sw.steps + cfg.stall);
        let line_seeds: Vec<Vec<usize>> = seeds
            .iter()
            .map(|s| crate::parity::odd_lines(plane, s))
            .map(|l: LineSet| if l.count() == r { l } else { l.complement() })
            .filter(|l| l.count() == r)
            .map(|l| l.to_vec())
            .collect();
        let (set, value) = sw.run(r, &line_seeds, |c| c, target, rng);
        outcome = Some((Witness::Lines(LineSet::from_indices(n, set)), value));
    }
    let (witness, value) = outcome.expect("line mode always yields a set");
    witness.verify(plane, r, value)?;
    Ok(LocalOutcome { r, target, witness, value, reached: value <= target, steps: sw.steps, timed_out: sw.timed_out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn finds_two_point_dual() {
        let p = Plane::of_order(11).unwrap();
        let out = random_witness(&p, 22, 2, &[], LocalConfig::default(), &mut stream(1, "t")).unwrap();
        assert!(out.reached);
        assert_eq!(out.value, 2);
    }

    #[test]
    fn reproducible_and_always_valid() {
        let p = Plane::of_order(7).unwrap();
        let cfg = LocalConfig { steps: 300, stall: 50, wall: None };
        let a = random_witness(&p, 20, 4, &[], cfg, &mut stream(9, "t")).unwrap();
        let b = random_witness(&p, 20, 4, &[], cfg, &mut stream(9, "t")).unwrap();
        assert_eq!(a, b);
        assert!(a.witness.verify(&p, 20, a.value).is_ok());
        // An impossible target still returns a verified line witness.
        let c = random_witness(&p, 20, 2, &[], cfg, &mut stream(9, "t")).unwrap();
        assert!(!c.reached);
        assert!(c.value >= 4);
    }
}

//! Even point sets `S` up to collineation, recording `|L^o(S)|`.
//!
//! `f(r)` is the least even `|S|` with `|L^o(S)| = r'`, where `r'` is the
//! even one of `r` and `N - r`. Any four or more points either contain a
//! frame or lie on a line plus one point; frames are all equivalent, so the
//! sweep fixes the standard frame `F0` and enumerates supersets of it modulo
//! the stabilizer of `F0`, and measures the line-plus-point sets directly.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use serde::Serialize;

use super::group::{frame_stabilizer, standard_frame};
use crate::bits::PointSet;
use crate::error::{param, Result};
use crate::parity::odd_lines;
use crate::plane::Plane;

/// Leaves between deadline checks.
const CHECK_EVERY: u64 = 1 << 16;

/// What a sweep certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepResult {
    pub q: u32,
    /// Every even size up to here was enumerated completely.
    pub s_done: usize,
    pub s_max: usize,
    pub truncated: bool,
    /// Indexed by the even value `r'`: least size seen and a set attaining it.
    pub first: Vec<Option<(usize, PointSet)>>,
    /// Sets measured.
    pub leaves: u64,
}

impl SweepResult {
    fn even_side(&self, r: usize) -> usize {
        let n = self.first.len() - 1;
        if r % 2 == 0 {
            r
        } else {
            n - r
        }
    }

    /// `f(r)` when the sweep settles it: sizes up to `s_done` are complete,
    /// and a value first seen at `s_done + 2` cannot occur lower.
    pub fn certified(&self, r: usize) -> Option<usize> {
        match &self.first[self.even_side(r)] {
            Some((s, _)) if *s <= self.s_done + 2 => Some(*s),
            _ => None,
        }
    }

    /// A lower bound on `f(r)` for `0 < r < N`.
    pub fn lower(&self, r: usize) -> usize {
        self.certified(r).unwrap_or(self.s_done + 2)
    }

    pub fn witness(&self, r: usize) -> Option<&PointSet> {
        self.first[self.even_side(r)].as_ref().map(|(_, s)| s)
    }
}

struct Ctx<'a, const W: usize> {
    pencils: Vec<[u64; W]>,
    deadline: Option<Instant>,
    stop: &'a AtomicBool,
}

/// First set seen per value for one worker, keyed by task index.
struct Found {
    first: Vec<Option<(usize, Vec<usize>)>>,
    leaves: u64,
}

impl Found {
    fn record(&mut self, value: usize, task: usize, set: &[usize]) {
        if self.first[value].as_ref().is_none_or(|(t, _)| task < *t) {
            self.first[value] = Some((task, set.to_vec()));
        }
    }
}

fn xor<const W: usize>(a: &[u64; W], b: &[u64; W]) -> [u64; W] {
    std::array::from_fn(|i| a[i] ^ b[i])
}

fn popcount<const W: usize>(a: &[u64; W]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

impl<const W: usize> Ctx<'_, W> {
    fn expired(&self, found: &Found) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        if found.leaves % CHECK_EVERY == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stop.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    /// Extends `set` by `left` more of `cands[from..]`, increasing.
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        cands: &[usize],
        from: usize,
        left: usize,
        odd: [u64; W],
        set: &mut Vec<usize>,
        task: usize,
        found: &mut Found,
    ) -> bool {
        if left == 0 {
            found.leaves += 1;
            found.record(popcount(&odd), task, set);
            return !self.expired(found);
        }
        if cands.len() < from + left {
            return true;
        }
        for i in from..=cands.len() - left {
            let y = cands[i];
            set.push(y);
            let ok = self.dfs(cands, i + 1, left - 1, xor(&odd, &self.pencils[y]), set, task, found);
            set.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Sweep of all even sizes `s <= s_max`, stopping at `budget`.
///
/// Work is split into tasks by the first two points added to the frame and
/// dealt round-robin to `workers`; each value keeps the set from the lowest
/// task, so the result does not depend on `workers`.
pub fn dual_sweep(
    plane: &Plane,
    s_max: usize,
    budget: Option<std::time::Duration>,
    workers: usize,
) -> Result<SweepResult> {
    match plane.n().div_ceil(64) {
        1 => sweep_words::<1>(plane, s_max, budget, workers),
        2 => sweep_words::<2>(plane, s_max, budget, workers),
        3 => sweep_words::<3>(plane, s_max, budget, workers),
        4 => sweep_words::<4>(plane, s_max, budget, workers),
        w => param(format!("dual sweep supports N <= 256, got {w} words")),
    }
}

fn sweep_words<const W: usize>(
    plane: &Plane,
    s_max: usize,
    budget: Option<std::time::Duration>,
    workers: usize,
) -> Result<SweepResult> {
    let n = plane.n();
    let q = plane.q() as usize;
    let s_max = s_max.min(n - 1) & !1;
    let deadline = budget.map(|b| Instant::now() + b);
    let pencils: Vec<[u64; W]> =
        (0..n).map(|p| std::array::from_fn(|i| plane.point_lines(p).words().get(i).copied().unwrap_or(0))).collect();
    let stop = AtomicBool::new(false);
    let ctx = Ctx::<W> { pencils, deadline, stop: &stop };

    let frame = standard_frame(plane)?;
    let g0 = frame_stabilizer(plane)?;
    let orbit_min: Vec<usize> = (0..n).map(|p| g0.iter().map(|g| g.apply(p)).min().expect("identity")).collect();
    let free: Vec<usize> = (0..n).filter(|p| !frame.contains(p)).collect();
    let reps: Vec<usize> = free.iter().copied().filter(|&p| orbit_min[p] == p).collect();
    let later: Vec<Vec<usize>> =
        reps.iter().map(|&t| free.iter().copied().filter(|&y| y > t && orbit_min[y] >= t).collect()).collect();
    let frame_odd = frame.iter().fold([0u64; W], |acc, &p| xor(&acc, &ctx.pencils[p]));

    let mut first: Vec<Option<(usize, PointSet)>> = vec![None; n + 1];
    first[0] = Some((0, plane.empty_points()));
    let mut s_done = 0;
    let mut leaves = 1u64;
    let line0: Vec<usize> = plane.points_on(0).iter().map(|&p| p as usize).collect();
    let off0 = (0..n).find(|&p| !plane.incident(p, 0)).expect("a point off the line");

    for s in (2..=s_max).step_by(2) {
        let mut level: Vec<Option<(usize, Vec<usize>)>> = vec![None; n + 1];
        let mut degenerate = Vec::new();
        if s <= q + 1 {
            degenerate.push(line0[..s].to_vec());
        }
        if s <= q + 2 {
            let mut with_point = line0[..s - 1].to_vec();
            with_point.push(off0);
            degenerate.push(with_point);
        }
        for set in degenerate {
            let v = odd_lines(plane, &PointSet::from_indices(n, set.iter().copied())).count();
            leaves += 1;
            if level[v].is_none() {
                level[v] = Some((0, set));
            }
        }
        if s >= 4 {
            let tasks: Vec<(usize, usize)> = match s - 4 {
                0 => vec![(usize::MAX, usize::MAX)],
                1 => unreachable!("s is even"),
                _ => reps.iter().enumerate().flat_map(|(k, _)| (0..later[k].len()).map(move |i| (k, i))).collect(),
            };
            let workers = workers.clamp(1, tasks.len());
            let founds: Vec<Found> = std::thread::scope(|sc| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let (ctx, tasks, reps, later, frame) = (&ctx, &tasks, &reps, &later, &frame);
                        sc.spawn(move || {
                            let mut found = Found { first: vec![None; n + 1], leaves: 0 };
                            let mut set: Vec<usize> = frame.to_vec();
                            for idx in (w..tasks.len()).step_by(workers) {
                                let (k, i) = tasks[idx];
                                let ok = if k == usize::MAX {
                                    ctx.dfs(&[], 0, 0, frame_odd, &mut set, idx + 1, &mut found)
                                } else {
                                    let (t1, t2) = (reps[k], later[k][i]);
                                    set.extend([t1, t2]);
                                    let odd = xor(&xor(&frame_odd, &ctx.pencils[t1]), &ctx.pencils[t2]);
                                    let ok = ctx.dfs(&later[k], i + 1, s - 6, odd, &mut set, idx + 1, &mut found);
                                    set.truncate(4);
                                    ok
                                };
                                if !ok {
                                    break;
                                }
                            }
                            found
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            });
            for found in founds {
                leaves += found.leaves;
                for (v, cand) in found.first.into_iter().enumerate() {
                    if let Some((task, set)) = cand {
                        if level[v].as_ref().is_none_or(|(t, _)| task < *t) {
                            level[v] = Some((task, set));
                        }
                    }
                }
            }
        }
        for (v, entry) in level.into_iter().enumerate() {
            if let (None, Some((_, set))) = (&first[v], entry) {
                first[v] = Some((s, PointSet::from_indices(n, set)));
            }
        }
        if stop.load(Ordering::Relaxed) {
            break;
        }
        s_done = s;
    }
    Ok(SweepResult { q: plane.q(), s_done, s_max, truncated: s_done < s_max, first, leaves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::gray::exhaustive_f;

    #[test]
    fn agrees_with_exhaustive_q3() {
        let p = Plane::of_order(3).unwrap();
        let ex = exhaustive_f(&p, 1).unwrap();
        let sw = dual_sweep(&p, 12, None, 2).unwrap();
        assert!(!sw.truncated);
        for r in 1..p.n() {
            assert_eq!(sw.certified(r), Some(ex.values[r]), "r={r}");
            let s = sw.witness(r).unwrap();
            let lines = odd_lines(&p, s).count();
            assert!(lines == r || lines + r == p.n());
        }
    }

    #[test]
    fn two_points_give_2q() {
        let p = Plane::of_order(7).unwrap();
        let sw = dual_sweep(&p, 2, None, 1).unwrap();
        assert_eq!(sw.certified(14), Some(2));
        assert_eq!(sw.certified(43), Some(2));
        assert_eq!(sw.lower(20), 4);
    }

    #[test]
    fn independent_of_workers_and_budget_truncates() {
        let p = Plane::of_order(5).unwrap();
        let a = dual_sweep(&p, 8, None, 1).unwrap();
        let b = dual_sweep(&p, 8, None, 3).unwrap();
        assert_eq!(a, b);
        let t = dual_sweep(&p, 30, Some(std::time::Duration::ZERO), 1).unwrap();
        assert!(t.truncated);
    }
}

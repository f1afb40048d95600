//! Edge decompositions of complete graphs into cliques.
//!
//! A point set `S` induces a decomposition of the complete graph on `S` into
//! the cliques `S ∩ ℓ`. The sum of `⌊|clique|/2⌋` over those cliques
//! determines how many lines meet `S` oddly, so the questions "which sums
//! occur" and "which occur with a simple shape" drive the upper-bound
//! constructions.

use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

use crate::bits::PointSet;
use crate::error::{Error, Result};
use crate::parity::odd_lines;
use crate::plane::Plane;

fn binom2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn ceil_sqrt(n: usize) -> usize {
    let mut c = (n as f64).sqrt() as usize;
    while c * c < n {
        c += 1;
    }
    while c > 0 && (c - 1) * (c - 1) >= n {
        c -= 1;
    }
    c
}

#[inline]
fn edge_index(a: usize, b: usize) -> usize {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    j * (j - 1) / 2 + i
}

/// Partition of the edges of `K_r` into cliques on at least two vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueDecomposition {
    pub r: usize,
    pub cliques: Vec<Vec<usize>>,
}

impl CliqueDecomposition {
    /// Validates that every edge is covered exactly once.
    pub fn new(r: usize, mut cliques: Vec<Vec<usize>>) -> Result<Self> {
        let mut covered = vec![false; binom2(r)];
        for c in &mut cliques {
            c.sort_unstable();
            if c.len() < 2 {
                return Err(Error::Decomp(format!("clique {c:?} has fewer than two vertices")));
            }
            if c.windows(2).any(|w| w[0] == w[1]) || *c.last().unwrap() >= r {
                return Err(Error::Decomp(format!("clique {c:?} is not a vertex subset of K_{r}")));
            }
            for (i, &a) in c.iter().enumerate() {
                for &b in &c[i + 1..] {
                    let e = edge_index(a, b);
                    if covered[e] {
                        return Err(Error::Decomp(format!("edge ({a},{b}) covered twice")));
                    }
                    covered[e] = true;
                }
            }
        }
        if let Some(e) = covered.iter().position(|&c| !c) {
            return Err(Error::Decomp(format!("edge #{e} is not covered")));
        }
        Ok(CliqueDecomposition { r, cliques })
    }

    /// `K_r` as a single clique.
    pub fn complete(r: usize) -> Self {
        CliqueDecomposition { r, cliques: vec![(0..r).collect()] }
    }

    /// `K_r` as `C(r,2)` single edges.
    pub fn all_edges(r: usize) -> Self {
        let cliques = (0..r).flat_map(|j| (0..j).map(move |i| vec![i, j])).collect();
        CliqueDecomposition { r, cliques }
    }

    /// `K_7` as the seven lines of the Fano plane.
    pub fn fano() -> Self {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        CliqueDecomposition { r: 7, cliques: lines.iter().map(|l| l.to_vec()).collect() }
    }

    /// The decomposition cut out on `points` by the lines of the plane;
    /// vertices are the points in increasing index order.
    pub fn induced(plane: &Plane, points: &PointSet) -> Self {
        let pts = points.to_vec();
        let pos: HashMap<usize, usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut cliques = Vec::new();
        for l in 0..plane.n() {
            let meet = plane.line_points(l).and(points);
            if meet.count() >= 2 {
                cliques.push(meet.iter().map(|p| pos[&p]).collect());
            }
        }
        CliqueDecomposition { r: pts.len(), cliques }
    }

    /// Σ ⌊|clique|/2⌋.
    pub fn m_value(&self) -> usize {
        self.cliques.iter().map(|c| c.len() / 2).sum()
    }

    pub fn largest_clique(&self) -> usize {
        self.cliques.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// At most one clique has more than three vertices.
    pub fn is_simple(&self) -> bool {
        self.cliques.iter().filter(|c| c.len() > 3).count() <= 1
    }

    /// Clique sizes in decreasing order.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.cliques.iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

/// Decomposition into one distinguished clique, triangles and single edges;
/// the edges are every pair not covered by the others.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleDecomposition {
    pub r: usize,
    /// Vertices of the distinguished clique; empty when there is none.
    pub big: Vec<usize>,
    pub triangles: Vec<[usize; 3]>,
}

impl SimpleDecomposition {
    /// Checks that the big clique and triangles are pairwise edge-disjoint.
    pub fn verify(&self) -> Result<()> {
        let mut in_big = vec![false; self.r];
        for &v in &self.big {
            if v >= self.r || std::mem::replace(&mut in_big[v], true) {
                return Err(Error::Decomp(format!("bad clique vertex {v}")));
            }
        }
        // A triangle shares an edge with the clique iff two of its vertices lie in it.
        let mut covered = vec![0u64; binom2(self.r).div_ceil(64)];
        for &[a, b, c] in &self.triangles {
            if a == b || a == c || b == c || a.max(b).max(c) >= self.r {
                return Err(Error::Decomp(format!("bad triangle {:?}", [a, b, c])));
            }
            if [a, b, c].iter().filter(|&&v| in_big[v]).count() > 1 {
                return Err(Error::Decomp(format!("triangle {:?} overlaps the clique", [a, b, c])));
            }
            for (x, y) in [(a, b), (a, c), (b, c)] {
                let e = edge_index(x, y);
                if covered[e / 64] >> (e % 64) & 1 == 1 {
                    return Err(Error::Decomp(format!("edge ({x},{y}) covered twice")));
                }
                covered[e / 64] |= 1 << (e % 64);
            }
        }
        Ok(())
    }

    pub fn m_value(&self) -> usize {
        let big_edges = binom2(self.big.len());
        let t = self.triangles.len();
        self.big.len() / 2 + t + binom2(self.r) - big_edges - 3 * t
    }

    pub fn to_cliques(&self) -> CliqueDecomposition {
        let mut covered = vec![false; binom2(self.r)];
        let mut cliques = Vec::new();
        if self.big.len() >= 2 {
            for (i, &a) in self.big.iter().enumerate() {
                for &b in &self.big[i + 1..] {
                    covered[edge_index(a, b)] = true;
                }
            }
            cliques.push(self.big.clone());
        }
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                covered[edge_index(a, b)] = true;
            }
            cliques.push(t.to_vec());
        }
        for j in 0..self.r {
            for i in 0..j {
                if !covered[edge_index(i, j)] {
                    cliques.push(vec![i, j]);
                }
            }
        }
        CliqueDecomposition { r: self.r, cliques }
    }
}

/// Three-valued answer for questions with a one-sided guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Existence {
    Yes,
    No,
    Unknown,
}

/// Least `s` from which every admissible value is guaranteed to have a
/// simple decomposition of `K_r`; requires `r >= 4`.
pub fn guaranteed_window_start(r: usize) -> usize {
    let m = ceil_sqrt(r - 3).saturating_sub(1);
    (r - m) / 2 + m * (2 * r - 3 * m + 1) / 2
}

/// Whether `K_r` has a simple decomposition with M = `s`, as far as the
/// guaranteed window decides it.
pub fn simple_exists(r: usize, s: usize) -> Existence {
    let total = binom2(r);
    if s > total || s % 2 != total % 2 {
        return Existence::No;
    }
    if r >= 4 && s >= guaranteed_window_start(r) {
        return Existence::Yes;
    }
    Existence::Unknown
}

/// The M-range `[lo, hi]` reachable with a distinguished clique of order `r1`.
pub fn clique_window(r: usize, r1: usize) -> (usize, usize) {
    let rest = r - r1;
    let (e1, e2) = (r1 * rest, binom2(rest));
    let base = r1 / 2 + e1;
    (base.saturating_sub(e2), base + e2)
}

/// Clique orders `r1 >= max(2, ⌈r/2⌉)` whose window contains `s` with the
/// right parity, smallest first.
pub fn feasible_clique_orders(r: usize, s: usize) -> Vec<usize> {
    if s % 2 != binom2(r) % 2 {
        return Vec::new();
    }
    (r.div_ceil(2).max(2)..=r)
        .filter(|&r1| {
            let (lo, hi) = clique_window(r, r1);
            lo <= s && s <= hi
        })
        .collect()
}

/// The `n - 1` perfect matchings of `K_n` from the circle method.
pub fn one_factorization(n: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Decomp(format!("K_{n} has no one-factorization")));
    }
    let m = n - 1;
    Ok((0..m)
        .map(|i| {
            let mut matching = vec![(i, m)];
            for k in 1..n / 2 {
                let a = (i + k) % m;
                let b = (i + m - k) % m;
                matching.push((a.min(b), a.max(b)));
            }
            matching
        })
        .collect())
}

/// Matchings covering every edge of `K_n` exactly once, at most `n` of them.
fn partial_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    match n {
        0 | 1 => Vec::new(),
        _ if n % 2 == 0 => one_factorization(n).expect("n even"),
        _ => one_factorization(n + 1)
            .expect("n + 1 even")
            .into_iter()
            .map(|m| m.into_iter().filter(|&(_, b)| b < n).collect())
            .collect(),
    }
}

/// Distinguished clique on `0..r1` plus `|E2|` triangles, each joining a
/// matching edge of the remaining vertices to the big-clique vertex with the
/// matching's index. Exactly `convert` of them are dissolved into edges.
fn clique_with_triangles(r: usize, r1: usize, convert: usize) -> SimpleDecomposition {
    let triangles: Vec<[usize; 3]> = partial_matchings(r - r1)
        .into_iter()
        .enumerate()
        .flat_map(|(i, m)| m.into_iter().map(move |(a, b)| [i, r1 + a, r1 + b]))
        .collect();
    let keep = triangles.len() - convert;
    SimpleDecomposition {
        r,
        big: if r1 >= 2 { (0..r1).collect() } else { Vec::new() },
        triangles: triangles.into_iter().take(keep).collect(),
    }
}

/// Simple decomposition with distinguished clique of order `r1` and M = `s`.
pub fn build_with_clique(r: usize, r1: usize, s: usize) -> Result<SimpleDecomposition> {
    if r1 > r || 2 * r1 < r {
        return Err(Error::Decomp(format!("clique order {r1} outside [⌈{r}/2⌉, {r}]")));
    }
    let (lo, hi) = clique_window(r, r1);
    if s < lo || s > hi || (s - lo) % 2 == 1 {
        return Err(Error::Decomp(format!("M={s} not in window [{lo},{hi}] for r1={r1}")));
    }
    let d = clique_with_triangles(r, r1, (s - lo) / 2);
    d.verify()?;
    debug_assert_eq!(d.m_value(), s);
    Ok(d)
}

/// Bound on backtracking nodes for triangle packings.
const PACKING_BUDGET: usize = 2_000_000;

/// `k` edge-disjoint triangles in `K_r`, or `None` when the search proves
/// none exist or exhausts its budget.
fn pack_triangles(r: usize, k: usize) -> Option<Vec<[usize; 3]>> {
    if 3 * k > binom2(r) || k > r * ((r - 1) / 2) / 3 {
        return None;
    }
    let all: Vec<[usize; 3]> =
        (0..r).flat_map(|a| (a + 1..r).flat_map(move |b| (b + 1..r).map(move |c| [a, b, c]))).collect();
    struct Search<'a> {
        all: &'a [[usize; 3]],
        used: Vec<bool>,
        degree: Vec<usize>,
        chosen: Vec<[usize; 3]>,
        nodes: usize,
        k: usize,
    }
    impl Search<'_> {
        fn run(&mut self, from: usize) -> bool {
            if self.chosen.len() == self.k {
                return true;
            }
            self.nodes += 1;
            if self.nodes > PACKING_BUDGET {
                return false;
            }
            let room: usize = self.degree.iter().map(|d| d / 2).sum::<usize>() / 3;
            if self.chosen.len() + room < self.k {
                return false;
            }
            for i in from..self.all.len() {
                let [a, b, c] = self.all[i];
                let es = [edge_index(a, b), edge_index(a, c), edge_index(b, c)];
                if es.iter().any(|&e| self.used[e]) {
                    continue;
                }
                es.iter().for_each(|&e| self.used[e] = true);
                [a, b, c].iter().for_each(|&v| self.degree[v] -= 2);
                self.chosen.push([a, b, c]);
                if self.run(i + 1) {
                    return true;
                }
                self.chosen.pop();
                es.iter().for_each(|&e| self.used[e] = false);
                [a, b, c].iter().for_each(|&v| self.degree[v] += 2);
            }
            false
        }
    }
    let mut s =
        Search { all: &all, used: vec![false; binom2(r)], degree: vec![r - 1; r], chosen: Vec::new(), nodes: 0, k };
    s.run(0).then_some(s.chosen)
}

/// A simple decomposition of `K_r` with M = `s`.
///
/// Tries the smallest feasible distinguished-clique order first, then
/// decompositions made only of triangles and edges.
pub fn build_simple(r: usize, s: usize) -> Result<SimpleDecomposition> {
    let total = binom2(r);
    if s > total || s % 2 != total % 2 {
        return Err(Error::Decomp(format!("M={s} is impossible for K_{r}: need M ≤ {total} and M ≡ {total} mod 2")));
    }
    if let Some(&r1) = feasible_clique_orders(r, s).first() {
        return build_with_clique(r, r1, s);
    }
    let k = (total - s) / 2;
    let half = r / 2;
    let triangles = if k <= binom2(half) {
        // The triangles of the clique construction avoid the edges of its
        // distinguished clique, which then dissolve into single edges.
        let full = clique_with_triangles(r, r - half, 0).triangles;
        Some(full.into_iter().take(k).collect())
    } else {
        pack_triangles(r, k)
    };
    let triangles =
        triangles.ok_or_else(|| Error::Decomp(format!("no simple decomposition of K_{r} with M={s} found")))?;
    let d = SimpleDecomposition { r, big: Vec::new(), triangles };
    d.verify()?;
    debug_assert_eq!(d.m_value(), s);
    Ok(d)
}

/// `r(√(4r−3) − 1)/4`, below which every M value has a simple realization.
pub fn simplify_threshold(r: usize) -> f64 {
    r as f64 * (((4 * r - 3) as f64).sqrt() - 1.0) / 4.0
}

/// A simple decomposition with the same M as `d`.
///
/// Fails unless M(d) is strictly below [`simplify_threshold`], compared in
/// exact integer arithmetic.
pub fn simplify(d: &CliqueDecomposition) -> Result<SimpleDecomposition> {
    let m = d.m_value();
    let r = d.r as u128;
    let lhs = (4 * m as u128 + r).pow(2);
    let rhs = r * r * (4 * r).saturating_sub(3);
    if r < 1 || lhs >= rhs {
        return Err(Error::Threshold { r: d.r, m, threshold: format!("{:.4}", simplify_threshold(d.r)) });
    }
    if d.is_simple() {
        let mut big = Vec::new();
        let mut triangles = Vec::new();
        for c in &d.cliques {
            match c.len() {
                2 => {}
                3 => triangles.push([c[0], c[1], c[2]]),
                _ => big = c.clone(),
            }
        }
        let out = SimpleDecomposition { r: d.r, big, triangles };
        out.verify()?;
        return Ok(out);
    }
    let r1 = d.largest_clique();
    build_with_clique(d.r, r1, m)
}

/// Check of the identity Σ⌊|S∩ℓ|/2⌋ = |S|/2 + 2t, with `|odd_lines(S)| = |S|q − 4t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueSumCheck {
    pub r: usize,
    pub t: usize,
    pub odd_lines: usize,
    pub clique_sum: usize,
    pub holds: bool,
}

pub fn cv_identity(plane: &Plane, points: &PointSet) -> Result<CliqueSumCheck> {
    let r = points.count();
    if r % 2 == 1 {
        return Err(Error::Param(format!("|S| = {r} is odd")));
    }
    let odd = odd_lines(plane, points).count();
    let rq = r * plane.q() as usize;
    if odd > rq || (rq - odd) % 4 != 0 {
        return Err(Error::Decomp(format!("parity violation: {rq} - {odd} is not a nonnegative multiple of 4")));
    }
    let t = (rq - odd) / 4;
    let clique_sum = (0..plane.n()).map(|l| plane.line_points(l).intersection_count(points) / 2).sum();
    Ok(CliqueSumCheck { r, t, odd_lines: odd, clique_sum, holds: clique_sum == r / 2 + 2 * t && t <= binom2(r) })
}

/// Exact sets of M values over all decompositions of `K_r` and over simple ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AchievableM {
    pub r: usize,
    pub all: BTreeSet<usize>,
    pub simple: BTreeSet<usize>,
}

/// Largest `r` the exhaustive oracle accepts.
pub const BRUTE_MAX_R: usize = 8;

/// Exhaustive enumeration of clique decompositions of `K_r`.
///
/// Memoized on the set of uncovered edges; the clique placed next always
/// covers the lowest uncovered edge, so each decomposition is built once.
pub fn brute_min_m(r: usize) -> Result<AchievableM> {
    if r > BRUTE_MAX_R {
        return Err(Error::Param(format!("brute force supports r ≤ {BRUTE_MAX_R}, got {r}")));
    }
    if r < 2 {
        let zero = BTreeSet::from([0]);
        return Ok(AchievableM { r, all: zero.clone(), simple: zero });
    }
    let mut pairs = vec![(0, 0); binom2(r)];
    for j in 0..r {
        for i in 0..j {
            pairs[edge_index(i, j)] = (i, j);
        }
    }
    let mut oracle = Oracle { r, pairs, memo: HashMap::new() };
    let full = (1u32 << binom2(r)) - 1;
    let to_set = |bits: u64| (0..64).filter(|b| bits >> b & 1 == 1).collect::<BTreeSet<usize>>();
    Ok(AchievableM {
        r,
        all: to_set(oracle.solve(full, Mode::Any)),
        simple: to_set(oracle.solve(full, Mode::SimpleOpen)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Mode {
    Any,
    SimpleOpen,
    SimpleUsed,
}

struct Oracle {
    r: usize,
    pairs: Vec<(usize, usize)>,
    memo: HashMap<(u32, Mode), u64>,
}

impl Oracle {
    fn uncovered(&self, mask: u32, a: usize, b: usize) -> bool {
        mask >> edge_index(a, b) & 1 == 1
    }

    fn solve(&mut self, mask: u32, mode: Mode) -> u64 {
        if mask == 0 {
            return 1;
        }
        if let Some(&v) = self.memo.get(&(mask, mode)) {
            return v;
        }
        let (a, b) = self.pairs[mask.trailing_zeros() as usize];
        let candidates: Vec<usize> = (0..self.r)
            .filter(|&v| v != a && v != b && self.uncovered(mask, a, v) && self.uncovered(mask, b, v))
            .collect();
        let mut cliques = Vec::new();
        self.extend(mask, &candidates, 0, &mut vec![a, b], &mut cliques);
        let mut out = 0u64;
        for clique in cliques {
            let next_mode = match (mode, clique.len() > 3) {
                (Mode::SimpleUsed, true) => continue,
                (Mode::SimpleOpen, true) => Mode::SimpleUsed,
                (m, _) => m,
            };
            let mut rest = mask;
            for (i, &x) in clique.iter().enumerate() {
                for &y in &clique[i + 1..] {
                    rest &= !(1 << edge_index(x, y));
                }
            }
            out |= self.solve(rest, next_mode) << (clique.len() / 2);
        }
        self.memo.insert((mask, mode), out);
        out
    }

    fn extend(&self, mask: u32, cand: &[usize], from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for i in from..cand.len() {
            let v = cand[i];
            if cur[2..].iter().all(|&u| self.uncovered(mask, u, v)) {
                cur.push(v);
                self.extend(mask, cand, i + 1, cur, out);
                cur.pop();
            }
        }
    }
}

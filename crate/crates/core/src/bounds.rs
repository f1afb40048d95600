//! Per-`r` intervals `[lo, hi]` for `f(r)`.
//!
//! Lower bounds come from closed-form theory and from neighbouring values;
//! every upper bound is the value of a stored witness, re-evaluated before
//! it is accepted.

use serde::Serialize;

use crate::constructions::{self as cons, ConstructionResult};
use crate::error::{param, Error, Result};
use crate::gf::exact_sqrt;
use crate::parity::odd_points;
use crate::plane::Plane;
use crate::witness::Witness;

/// The interval known for one `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub q: u32,
    pub r: usize,
    pub lo: usize,
    pub hi: usize,
    pub exact: bool,
    /// Source of `lo` then source of `hi`.
    pub provenance: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

fn plane_size(q: u32) -> usize {
    let q = q as usize;
    q * q + q + 1
}

/// `r(q + 2 - r)` as a signed value.
fn quadratic(q: u32, r: usize) -> i64 {
    r as i64 * (q as i64 + 2 - r as i64)
}

/// The residue of `f(r)` mod 4.
pub fn residue_class(q: u32, r: usize) -> usize {
    quadratic(q, r).rem_euclid(4) as usize
}

/// Least `y >= x` with `y ≡ class (mod 4)`.
fn lift(x: i64, class: usize) -> usize {
    let x = x.max(0);
    (x + (class as i64 - x).rem_euclid(4)) as usize
}

/// Greatest `y <= x` with `y ≡ class (mod 4)`, if any.
fn lower(x: usize, class: usize) -> Option<usize> {
    let drop = (x as i64 - class as i64).rem_euclid(4) as usize;
    x.checked_sub(drop)
}

/// `f(r) = r(q + 2 - r)` for `0 <= r <= q + 1`.
pub fn exact_small(q: u32, r: usize) -> Result<usize> {
    if r > q as usize + 1 {
        return param(format!("r={r} exceeds q+1"));
    }
    Ok(quadratic(q, r) as usize)
}

/// `f(2q-1) = q+1`, `f(2q) = 2`, `f(2q+1) = q-1`.
pub fn exact_near_2q(q: u32, r: usize) -> Result<usize> {
    let q = q as usize;
    match r {
        _ if r + 1 == 2 * q => Ok(q + 1),
        _ if r == 2 * q => Ok(2),
        _ if r == 2 * q + 1 => Ok(q - 1),
        _ => param(format!("r={r} is not within one of 2q={}", 2 * q)),
    }
}

/// Interval for `f(q + 2)`: exactly `2q - 2` for `q <= 13`, otherwise from
/// `3(q+1)/2` rounded up into the residue class, to `2q - 2`.
pub fn fq2_interval(q: u32) -> (usize, usize) {
    let hi = 2 * q as usize - 2;
    if q <= 13 {
        return (hi, hi);
    }
    let floor = (3 * (q as i64 + 1) + 1) / 2;
    (lift(floor, residue_class(q, q as usize + 2)), hi)
}

/// Lower bound from `f(r) >= r(q+2-r)`, applied to `r` and `N - r`, from
/// `f(r) > 0` for `0 < r < N`, and from the residue of `f(r)` mod 4.
pub fn cong_floor(q: u32, r: usize) -> usize {
    let n = plane_size(q);
    if r == 0 || r >= n {
        return 0;
    }
    let base = quadratic(q, r).max(quadratic(q, n - r)).max(1);
    lift(base, residue_class(q, r))
}

/// Lower bound from the dual reading: `f(r)` is the size `s` of an even
/// point set whose odd lines number `r'`, the even one of `r` and `N - r`.
/// The dual of the same counting constrains `s(q+2-s) <= r' <= sq + 1` and
/// `r' ≡ s(q+2-s) (mod 4)`.
pub fn dual_floor(q: u32, r: usize) -> usize {
    let n = plane_size(q);
    if r == 0 || r >= n {
        return 0;
    }
    let r_even = if r % 2 == 0 { r } else { n - r } as i64;
    let class = residue_class(q, r);
    (2..=n)
        .step_by(2)
        .find(|&s| {
            let qs = quadratic(q, s);
            s % 4 == class && qs <= r_even && r_even <= (s * q as usize + 1) as i64 && (r_even - qs).rem_euclid(4) == 0
        })
        .unwrap_or(n)
}

/// Best formula bound on `f(r)` among the closed-form constructions, with
/// the tag of the formula; `None` when none applies.
pub fn upper_constructive(q: u32, r: usize) -> Option<(usize, &'static str)> {
    let n = plane_size(q);
    if r > n {
        return None;
    }
    let qq = q as usize;
    let mut best: Option<(usize, &'static str)> = None;
    let mut offer = |v: usize, tag: &'static str| {
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, tag));
        }
    };
    for x in [r, n - r] {
        offer(x * qq + 1, "Triv");
        if x <= qq + 1 {
            offer(x * (qq + 2 - x), "Thm-init");
        }
        if let Ok(v) = exact_near_2q(q, x) {
            offer(v, "Thm-2q");
        }
        if x == qq + 2 && qq >= 5 {
            offer(2 * qq - 2, "ConicB");
        }
        for k in 0..=(qq - 1) / 2 {
            for j in 0..=qq + 1 {
                let jj = j * (qq + 2 - j);
                if qq >= 5 && x == 3 * (qq - 1) / 2 + k * qq + j {
                    offer(3 * qq + jj, "L32");
                }
                if k % 2 == 0 && x == k * qq + j {
                    offer(k + jj, "LE");
                }
                if k % 2 == 0 && j < qq && x == qq + 1 + k * qq + j && q != 3 {
                    offer(qq + 1 + k + jj, "LO");
                }
            }
        }
        if let Some(s) = exact_sqrt(q).map(|s| s as usize).filter(|&s| s > 1) {
            if x == 2 * qq + s {
                offer(qq + s + 2, "Baer7");
            }
            if x == 2 * qq - s {
                offer(qq + s, "Baer8");
            }
            if x == 2 * qq + 2 * s + 2 {
                offer(2 * qq + 2 * s + 2, "Baer9");
            }
        }
    }
    best
}

/// Every closed-form construction instantiated on `plane`, each measured.
pub fn all_constructions(plane: &Plane) -> Vec<ConstructionResult> {
    let q = plane.q() as usize;
    let mut out = Vec::new();
    let mut push = |r: Result<ConstructionResult>| {
        if let Ok(c) = r {
            out.push(c);
        }
    };
    for r in 0..=q + 1 {
        push(cons::conic_subset(plane, r));
    }
    push(cons::conic_plus_b_point(plane));
    push(cons::two_points(plane));
    push(cons::line_swap(plane));
    push(cons::line_minus_two(plane));
    for k in 0..=(q - 1) / 2 {
        for j in 0..=q + 1 {
            push(cons::residue_vertical_conic(plane, k, j));
            if k % 2 == 0 {
                push(cons::vertical_conic(plane, k, j));
                push(cons::vertical_two_conics(plane, k, j));
            }
        }
    }
    push(cons::baer_plus_point(plane));
    push(cons::baer_minus_point(plane));
    push(cons::two_baer(plane));
    out
}

fn tag_of(kind: cons::ConstructionKind) -> &'static str {
    use cons::ConstructionKind as K;
    match kind {
        K::Conic => "Thm-init",
        K::ConicPlusB => "ConicB",
        K::Residue0 | K::Residue1 | K::ResidueVerticalConic => "L32",
        K::Vertical | K::VerticalConic => "LE",
        K::VerticalTwoConics => "LO",
        K::BaerPlusPoint => "Baer7",
        K::BaerMinusPoint => "Baer8",
        K::TwoBaer => "Baer9",
        K::TwoPoints | K::LineSwap | K::LineMinusTwo => "Thm-2q",
        K::Realize => "Realize",
    }
}

/// Working state of the table: the best witness per `r` as an explicit
/// line set.
struct Upper {
    lines: Vec<Option<(crate::LineSet, usize, String)>>,
    seeds: Vec<crate::LineSet>,
}

/// The line set one step from `lines` in the given direction whose odd set
/// is smallest, with that odd count.
fn best_toggle(
    plane: &Plane,
    lines: &crate::LineSet,
    odd: &crate::PointSet,
    grow: bool,
) -> Option<(crate::LineSet, crate::PointSet)> {
    let candidates = if grow { lines.complement() } else { lines.clone() };
    let l = candidates.iter().max_by_key(|&l| (plane.line_points(l).intersection_count(odd), std::cmp::Reverse(l)))?;
    let mut next = lines.clone();
    next.toggle(l);
    Some((next, odd.xor(plane.line_points(l))))
}

impl Upper {
    fn new(n: usize) -> Self {
        Upper { lines: vec![None; n + 1], seeds: Vec::new() }
    }

    /// Records `lines` at its size and the complementary size if better.
    fn offer(&mut self, plane: &Plane, lines: &crate::LineSet, value: usize, tag: &str) -> bool {
        let n = plane.n();
        let r = lines.count();
        if self.lines[r].as_ref().is_some_and(|(_, v, _)| *v <= value) {
            return false;
        }
        self.lines[r] = Some((lines.clone(), value, tag.to_string()));
        self.lines[n - r] = Some((lines.complement(), value, tag.to_string()));
        true
    }

    fn seed(&mut self, plane: &Plane, lines: crate::LineSet, value: usize, tag: &str) {
        self.offer(plane, &lines, value, tag);
        self.seeds.push(lines);
    }

    /// Follows the grow-only and shrink-only best-toggle chains from every
    /// seed to the end, then improves neighbours of the winners to a
    /// fixpoint. Each chain depends only on its seed, so more seeds never
    /// give a worse table.
    fn propagate(&mut self, plane: &Plane) {
        for seed in std::mem::take(&mut self.seeds) {
            for grow in [true, false] {
                let (mut lines, mut odd) = (seed.clone(), odd_points(plane, &seed));
                while let Some((next, next_odd)) = best_toggle(plane, &lines, &odd, grow) {
                    self.offer(plane, &next, next_odd.count(), "Prop");
                    (lines, odd) = (next, next_odd);
                }
            }
        }
        let n = plane.n();
        let mut dirty = vec![true; n + 1];
        while let Some(r) = dirty.iter().position(|&d| d) {
            dirty[r] = false;
            let Some((lines, _, _)) = self.lines[r].clone() else { continue };
            let odd = odd_points(plane, &lines);
            for grow in [true, false] {
                if let Some((next, next_odd)) = best_toggle(plane, &lines, &odd, grow) {
                    let nr = next.count();
                    if self.offer(plane, &next, next_odd.count(), "Prop") {
                        dirty[nr] = true;
                        dirty[n - nr] = true;
                    }
                }
            }
        }
    }
}

/// Lower bounds and witnesses from outside the closed-form theory, such as
/// search results.
#[derive(Debug, Clone, Default)]
pub struct Extra {
    pub witnesses: Vec<(Witness, String)>,
    /// `(r, lo, tag)`: a certified lower bound.
    pub lower: Vec<(usize, usize, String)>,
}

/// Tightens `lo` and `hi` by `|f(r+1) - f(r)| <= q - 1` on `0 < r < N - 2`,
/// the residue class mod 4 and `f(r) = f(N - r)`, to a fixpoint.
pub fn lipschitz_closure(q: u32, records: &mut [BoundRecord]) -> Result<()> {
    let n = plane_size(q);
    if records.len() != n + 1 {
        return param(format!("expected {} records, got {}", n + 1, records.len()));
    }
    let step = q as usize - 1;
    loop {
        let mut changed = false;
        for r in 0..=n {
            let class = residue_class(q, r);
            let mut lo = records[r].lo.max(records[n - r].lo);
            let mut hi = records[r].hi.min(records[n - r].hi);
            let mut lo_tag = None;
            for nb in [r.checked_sub(1), Some(r + 1)].into_iter().flatten() {
                let pair_start = r.min(nb);
                if pair_start == 0 || pair_start + 2 >= n || nb > n {
                    continue;
                }
                let from_lo = lift(records[nb].lo as i64 - step as i64, class);
                if from_lo > lo {
                    lo = from_lo;
                    lo_tag = Some("Lip");
                }
                if let Some(h) = lower(records[nb].hi + step, class) {
                    hi = hi.min(h);
                }
            }
            if 0 < r && r < n {
                lo = lo.max(lift(lo as i64, class));
            }
            if lo > hi {
                return Err(Error::Inconsistent { r, lo, hi });
            }
            if lo != records[r].lo || hi != records[r].hi {
                if lo != records[r].lo {
                    let tag = lo_tag.map(str::to_string).unwrap_or_else(|| records[n - r].provenance[0].clone());
                    records[r].provenance[0] = tag;
                }
                records[r].lo = lo;
                records[r].hi = hi;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for rec in records.iter_mut() {
        rec.exact = rec.lo == rec.hi;
    }
    Ok(())
}

/// The table from closed-form bounds and constructions only.
pub fn assemble(plane: &Plane) -> Result<Vec<BoundRecord>> {
    assemble_with(plane, &Extra::default())
}

/// The table with additional witnesses and lower bounds merged in.
pub fn assemble_with(plane: &Plane, extra: &Extra) -> Result<Vec<BoundRecord>> {
    let q = plane.q();
    let n = plane.n();
    let mut upper = Upper::new(n);
    upper.seed(plane, plane.empty_lines(), 0, "Trivial");
    for c in all_constructions(plane) {
        upper.seed(plane, c.witness.to_lines(plane), c.achieved, tag_of(c.kind));
    }
    for (w, tag) in &extra.witnesses {
        let e = w.evaluate(plane)?;
        upper.seed(plane, w.to_lines(plane), e.value, tag);
    }
    upper.propagate(plane);

    let mut records = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let (mut lo, mut lo_tag) = (cong_floor(q, r), "Cong");
        let mut raise = |v: usize, tag: &'static str| {
            if v > lo {
                lo = v;
                lo_tag = tag;
            }
        };
        raise(dual_floor(q, r), "Dual");
        for x in [r, n - r] {
            if let Ok(v) = exact_small(q, x) {
                raise(v, "Thm-init");
            }
            if let Ok(v) = exact_near_2q(q, x) {
                raise(v, "Thm-2q");
            }
            if x == q as usize + 2 {
                raise(fq2_interval(q).0, "Thm-q+2");
            }
        }
        let mut lo_tag = lo_tag.to_string();
        for (er, elo, tag) in &extra.lower {
            if (*er == r || *er + r == n) && *elo > lo {
                lo = *elo;
                lo_tag = tag.clone();
            }
        }
        let (lines, hi, hi_tag) = upper.lines[r].clone().expect("propagation reaches every r");
        records.push(BoundRecord {
            q,
            r,
            lo,
            hi,
            exact: false,
            provenance: vec![lo_tag, hi_tag],
            witness: Some(Witness::Lines(lines)),
        });
    }
    lipschitz_closure(q, &mut records)?;
    for rec in &records {
        let w = rec.witness.as_ref().expect("every record has a witness");
        if w.evaluate(plane)?.value != rec.hi {
            return Err(Error::Witness(format!("r={}: hi {} is not witnessed", rec.r, rec.hi)));
        }
    }
    for rec in &mut records {
        rec.provenance.dedup();
    }
    Ok(records)
}

/// Largest value of `f` as predicted for large `q`, with the table's own
/// maximum when every entry is exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxOfF {
    pub value: usize,
    pub argmax: Vec<usize>,
    /// `(max, argmax)` of a fully exact table.
    pub table: Option<(usize, Vec<usize>)>,
}

pub fn max_of_f(q: u32, records: Option<&[BoundRecord]>) -> MaxOfF {
    let n = plane_size(q);
    let qq = q as usize;
    let value = (qq * qq + 4 * qq).div_ceil(4);
    let argmax = vec![qq.div_ceil(2), (qq + 3) / 2, n - (qq + 3) / 2, n - qq.div_ceil(2)];
    let table = records.filter(|rs| rs.iter().all(|r| r.exact)).map(|rs| {
        let max = rs.iter().map(|r| r.hi).max().unwrap_or(0);
        (max, rs.iter().filter(|r| r.hi == max).map(|r| r.r).collect())
    });
    MaxOfF { value, argmax, table }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(exact_small(11, 5).unwrap(), 40);
        assert_eq!(exact_small(7, 4).unwrap(), 20);
        assert_eq!(exact_small(7, 0).unwrap(), 0);
        assert!(exact_small(7, 9).is_err());
        assert_eq!(exact_near_2q(5, 10).unwrap(), 2);
        assert_eq!(exact_near_2q(7, 13).unwrap(), 8);
        assert_eq!(exact_near_2q(9, 19).unwrap(), 8);
        assert!(exact_near_2q(9, 16).is_err());
        assert_eq!(fq2_interval(7), (12, 12));
        assert_eq!(fq2_interval(13), (24, 24));
        assert_eq!(fq2_interval(17), (28, 32));
    }

    #[test]
    fn floors() {
        assert_eq!(cong_floor(5, 3), 12);
        assert_eq!(cong_floor(11, 14), 2);
        assert_eq!(cong_floor(7, 9), 4);
        assert_eq!(cong_floor(7, 0), 0);
        for r in [14, 15, 18, 19] {
            assert_eq!(dual_floor(11, r), 14, "r={r}");
        }
    }

    #[test]
    fn formula_uppers() {
        assert_eq!(upper_constructive(9, 15), Some((12, "Baer8")));
        assert_eq!(upper_constructive(9, 21).map(|u| u.0), Some(14));
        assert_eq!(upper_constructive(9, 18), Some((2, "Thm-2q")));
    }

    #[test]
    fn q3_table_by_closure() {
        let p = Plane::of_order(3).unwrap();
        let recs = assemble(&p).unwrap();
        let values: Vec<usize> = recs.iter().map(|r| r.hi).collect();
        assert_eq!(values, vec![0, 4, 6, 6, 4, 4, 2, 2, 4, 4, 6, 6, 4, 0]);
        assert!(recs.iter().all(|r| r.exact));
    }

    #[test]
    fn closure_is_idempotent_and_symmetric() {
        for q in [5u32, 7] {
            let p = Plane::of_order(q).unwrap();
            let mut recs = assemble(&p).unwrap();
            let before = recs.clone();
            lipschitz_closure(q, &mut recs).unwrap();
            assert_eq!(recs, before);
            let n = p.n();
            for r in 0..=n {
                assert_eq!((recs[r].lo, recs[r].hi), (recs[n - r].lo, recs[n - r].hi));
            }
        }
    }

    #[test]
    fn max_claims() {
        assert_eq!(max_of_f(5, None).value, 12);
        assert_eq!(max_of_f(5, None).argmax, vec![3, 4, 27, 28]);
        assert_eq!(max_of_f(7, None).argmax, vec![4, 5, 52, 53]);
        assert_eq!(max_of_f(7, None).value, 20);
    }
}

//! Near-blockers, even-line floors and affine blocking sets.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{LineSet, PointSet};
use crate::error::{param, Error, Result};
use crate::plane::{BaerSubplane, Plane};

/// Points meeting every line of a family but one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearBlocker {
    pub points: PointSet,
    /// The single family line the points miss.
    pub unmet: usize,
}

impl NearBlocker {
    /// Whether the points meet exactly the lines of `family` other than `unmet`.
    pub fn check(&self, plane: &Plane, family: &LineSet) -> bool {
        family.contains(self.unmet)
            && family.iter().all(|l| (plane.line_points(l).intersection_count(&self.points) == 0) == (l == self.unmet))
    }
}

fn degree(plane: &Plane, family: &LineSet, p: usize) -> usize {
    plane.point_lines(p).intersection_count(family)
}

/// Lines of `family` missing `p`.
fn avoiding(plane: &Plane, family: &LineSet, p: usize) -> LineSet {
    family.minus(plane.point_lines(p))
}

/// The least point on every line of `family`, if the family is concurrent.
fn common_point(plane: &Plane, family: &LineSet) -> Option<usize> {
    let mut lines = family.iter();
    let first = lines.next()?;
    let mut acc = plane.line_points(first).clone();
    for l in lines {
        acc = acc.and(plane.line_points(l));
    }
    acc.first()
}

/// Two points meeting every line of `family`, least indices first; `None`
/// when no pair does. A concurrent family returns its point twice.
pub fn two_cover(plane: &Plane, family: &LineSet) -> Option<(usize, usize)> {
    let Some(first) = family.first() else {
        return Some((0, 0));
    };
    if let Some(x) = common_point(plane, family) {
        return Some((x, x));
    }
    for &a in plane.points_on(first) {
        let rest = avoiding(plane, family, a as usize);
        if rest.is_empty() {
            return Some((a as usize, a as usize));
        }
        if let Some(b) = common_point(plane, &rest) {
            return Some((a as usize, b));
        }
    }
    None
}

/// Three points meeting every line of `family`, if any exist.
pub fn three_cover(plane: &Plane, family: &LineSet) -> Option<[usize; 3]> {
    let Some(first) = family.first() else {
        return Some([0; 3]);
    };
    plane
        .points_on(first)
        .iter()
        .find_map(|&a| two_cover(plane, &avoiding(plane, family, a as usize)).map(|(b, c)| [a as usize, b, c]))
}

/// `keep` plus one point other than `apex` on each line of `family` through
/// `apex` that misses `keep`, except the least such line, which is left unmet.
fn complete_through(plane: &Plane, family: &LineSet, keep: &[usize], apex: usize) -> NearBlocker {
    let mut points = PointSet::from_indices(plane.n(), keep.iter().copied());
    let mut open = family.and(plane.point_lines(apex));
    for &k in keep {
        open = open.minus(plane.point_lines(k));
    }
    let mut lines = open.iter();
    let unmet = lines.next().expect("some family line through the apex misses the kept points");
    for l in lines {
        let p = plane.points_on(l).iter().map(|&p| p as usize).find(|&p| p != apex);
        points.insert(p.expect("a line has q+1 points"));
    }
    NearBlocker { points, unmet }
}

/// Least point of maximum degree in `family`.
fn max_degree_point(plane: &Plane, family: &LineSet) -> usize {
    (0..plane.n()).max_by_key(|&p| (degree(plane, family, p), std::cmp::Reverse(p))).expect("the plane is nonempty")
}

fn near_blocker_a(plane: &Plane, family: &LineSet) -> NearBlocker {
    if let Some(x) = common_point(plane, family) {
        // One point off x on every line but the least.
        return complete_through(plane, family, &[], x);
    }
    if let Some((a, b)) = two_cover(plane, family) {
        let (x1, x2) = if degree(plane, family, a) >= degree(plane, family, b) { (a, b) } else { (b, a) };
        return complete_through(plane, family, &[x1], x2);
    }
    let p = max_degree_point(plane, family);
    let mut inner = near_blocker_a(plane, &avoiding(plane, family, p));
    inner.points.insert(p);
    inner
}

fn near_blocker_b(plane: &Plane, family: &LineSet) -> NearBlocker {
    let q = plane.q() as usize;
    if family.count() <= q + 2 || two_cover(plane, family).is_some() {
        return near_blocker_a(plane, family);
    }
    if let Some(cover) = three_cover(plane, family) {
        let mut by_degree = cover;
        by_degree.sort_by_key(|&p| (std::cmp::Reverse(degree(plane, family, p)), p));
        return complete_through(plane, family, &by_degree[..2], by_degree[2]);
    }
    let p = max_degree_point(plane, family);
    let mut inner = near_blocker_b(plane, &avoiding(plane, family, p));
    inner.points.insert(p);
    inner
}

/// A near-blocker of `family`.
///
/// Below `q = 5` or when two points block the family, the greedy two-cover
/// recursion is used: at most `|U|/2` points for non-concurrent families.
/// Otherwise the three-cover refinement applies.
pub fn near_blocker(plane: &Plane, family: &LineSet) -> Result<NearBlocker> {
    if family.is_empty() {
        return param("near_blocker needs a nonempty family");
    }
    let out = if plane.q() >= 5 { near_blocker_b(plane, family) } else { near_blocker_a(plane, family) };
    if !out.check(plane, family) {
        return Err(Error::Construction("near-blocker misses the wrong lines".into()));
    }
    Ok(out)
}

/// The set a point set is compared against in [`even_line_floor`].
#[derive(Debug, Clone, Copy)]
pub enum BlockerShape<'a> {
    Line(usize),
    Baer(&'a BaerSubplane),
}

/// Lower bound on the even lines of `A = (base \ T1) ∪ T2`, for `base` a line
/// or a Baer subplane, `T1 ⊆ base` and `T2` disjoint from it.
pub fn even_line_floor(
    plane: &Plane,
    a: &PointSet,
    shape: BlockerShape<'_>,
    t1: &PointSet,
    t2: &PointSet,
) -> Result<i64> {
    let base = match shape {
        BlockerShape::Line(l) => plane.line_points(l).clone(),
        BlockerShape::Baer(b) => b.points.clone(),
    };
    if !t1.is_subset(&base) || !t2.and(&base).is_empty() || base.minus(t1).or(t2) != *a {
        return param("A is not (base \\ T1) ∪ T2 with T1 ⊆ base and T2 off it");
    }
    let (q, n1, n2) = (plane.q() as i64, t1.count() as i64, t2.count() as i64);
    Ok(match shape {
        BlockerShape::Line(_) => (n1 + n2) * q - n2 * (2 * n1 + n2 - 2),
        BlockerShape::Baer(_) => {
            let s = crate::gf::exact_sqrt(plane.q()).expect("Baer subplanes need square q") as i64;
            (n1 + n2) * q - n2 * (2 * n1 + n2 - 1) - n1 * s
        }
    })
}

/// Whether `points` (off `ideal`) meets every line other than `ideal`.
fn blocks_affine(plane: &Plane, ideal: usize, points: &PointSet) -> bool {
    (0..plane.n()).all(|l| l == ideal || plane.line_points(l).intersection_count(points) > 0)
}

/// Searches exhaustively for a blocking set of the affine plane obtained by
/// deleting `ideal`, with at most `size` points. Branches on the points of
/// the least unblocked line.
pub fn exhaustive_affine_blocker(plane: &Plane, ideal: usize, size: usize) -> Option<PointSet> {
    fn go(plane: &Plane, ideal: usize, chosen: &mut PointSet, left: usize) -> bool {
        let open = (0..plane.n()).find(|&l| l != ideal && plane.line_points(l).intersection_count(chosen) == 0);
        let Some(line) = open else { return true };
        if left == 0 {
            return false;
        }
        for &p in plane.points_on(line) {
            let p = p as usize;
            if plane.incident(p, ideal) {
                continue;
            }
            chosen.insert(p);
            if go(plane, ideal, chosen, left - 1) {
                return true;
            }
            chosen.remove(p);
        }
        false
    }
    let mut chosen = plane.empty_points();
    go(plane, ideal, &mut chosen, size).then_some(chosen)
}

/// Local search for an affine blocking set of exactly `size` points:
/// repeatedly swaps a point for one on an unblocked line. Returns the set if
/// one is found within `steps` moves.
pub fn random_affine_blocker(
    plane: &Plane,
    ideal: usize,
    size: usize,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Option<PointSet> {
    let affine: Vec<usize> = (0..plane.n()).filter(|&p| !plane.incident(p, ideal)).collect();
    if size > affine.len() {
        return None;
    }
    let mut chosen: Vec<usize> = affine.choose_multiple(rng, size).copied().collect();
    let mut set = PointSet::from_indices(plane.n(), chosen.iter().copied());
    for _ in 0..steps {
        let open: Vec<usize> =
            (0..plane.n()).filter(|&l| l != ideal && plane.line_points(l).intersection_count(&set) == 0).collect();
        let Some(&line) = open.choose(rng) else {
            return blocks_affine(plane, ideal, &set).then_some(set);
        };
        let candidates: Vec<usize> = plane
            .points_on(line)
            .iter()
            .map(|&p| p as usize)
            .filter(|&p| p != ideal && !plane.incident(p, ideal))
            .collect();
        let incoming = *candidates.choose(rng).expect("an affine line has q points");
        let slot = rng.gen_range(0..chosen.len());
        set.remove(chosen[slot]);
        chosen[slot] = incoming;
        set.insert(incoming);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::even_lines;
    use rand::SeedableRng;

    #[test]
    fn two_and_three_covers() {
        let p = Plane::of_order(5).unwrap();
        let pencil = p.point_lines(7).clone();
        assert_eq!(two_cover(&p, &pencil), Some((7, 7)));
        let two = pencil.or(p.point_lines(20));
        let (a, b) = two_cover(&p, &two).unwrap();
        assert!(two.iter().all(|l| p.incident(a, l) || p.incident(b, l)));
        let all = LineSet::full(p.n());
        assert!(two_cover(&p, &all).is_none());
        assert!(three_cover(&p, &all).is_none());
    }

    #[test]
    fn concurrent_family() {
        let p = Plane::of_order(7).unwrap();
        let family = p.point_lines(3).clone();
        let nb = near_blocker(&p, &family).unwrap();
        assert!(nb.check(&p, &family));
        assert_eq!(nb.points.count(), family.count() - 1);
        assert_eq!(nb.unmet, family.first().unwrap());
    }

    #[test]
    fn three_general_lines() {
        let p = Plane::of_order(7).unwrap();
        let family = LineSet::from_indices(p.n(), [0, 8, 56]);
        assert!(common_point(&p, &family).is_none());
        let nb = near_blocker(&p, &family).unwrap();
        assert!(nb.points.count() <= 1);
    }

    #[test]
    fn even_line_floor_examples() {
        let p = Plane::of_order(9).unwrap();
        let line = 0;
        let on: Vec<usize> = p.points_on(line).iter().map(|&x| x as usize).collect();
        let off = (0..p.n()).find(|&x| !p.incident(x, line)).unwrap();
        let t1 = PointSet::from_indices(p.n(), [on[0]]);
        let t2 = PointSet::from_indices(p.n(), [off]);
        let a = p.line_points(line).minus(&t1).or(&t2);
        let floor = even_line_floor(&p, &a, BlockerShape::Line(line), &t1, &t2).unwrap();
        assert_eq!(floor, 17);
        assert!(even_lines(&p, &a).count() as i64 >= floor);
        let empty = p.empty_points();
        let l = p.line_points(line).clone();
        assert_eq!(even_line_floor(&p, &l, BlockerShape::Line(line), &empty, &empty).unwrap(), 0);
        assert!(even_line_floor(&p, &a, BlockerShape::Line(line), &empty, &t2).is_err());

        let b = p.subfield_baer().unwrap();
        let t1 = PointSet::from_indices(p.n(), [b.points.first().unwrap()]);
        let a = b.points.minus(&t1);
        let floor = even_line_floor(&p, &a, BlockerShape::Baer(&b), &t1, &empty).unwrap();
        assert_eq!(floor, 6);
        assert!(even_lines(&p, &a).count() as i64 >= floor);
    }

    #[test]
    fn affine_blockers_small() {
        for q in [3u32, 5] {
            let p = Plane::of_order(q).unwrap();
            let ideal = p.index_of([0, 0, 1]).unwrap();
            let q = q as usize;
            assert!(exhaustive_affine_blocker(&p, ideal, 2 * q - 2).is_none());
            let found = exhaustive_affine_blocker(&p, ideal, 2 * q - 1).unwrap();
            assert!(blocks_affine(&p, ideal, &found));
        }
        let p = Plane::of_order(5).unwrap();
        let ideal = p.index_of([0, 0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(random_affine_blocker(&p, ideal, 8, 2000, &mut rng).is_none());
    }
}

//! Parity maps between point sets and line sets over GF(2).

use serde::Serialize;

use crate::bits::{LineSet, PointSet};
use crate::plane::Plane;

/// Points lying on an odd number of lines of `lines`.
pub fn odd_points(plane: &Plane, lines: &LineSet) -> PointSet {
    let mut acc = plane.empty_points();
    for l in lines.iter() {
        acc.xor_assign(plane.line_points(l));
    }
    acc
}

/// Lines containing an odd number of points of `points`.
pub fn odd_lines(plane: &Plane, points: &PointSet) -> LineSet {
    let mut acc = plane.empty_lines();
    for p in points.iter() {
        acc.xor_assign(plane.point_lines(p));
    }
    acc
}

pub fn even_points(plane: &Plane, lines: &LineSet) -> PointSet {
    odd_points(plane, lines).complement()
}

pub fn even_lines(plane: &Plane, points: &PointSet) -> LineSet {
    odd_lines(plane, points).complement()
}

/// `odd_points(odd_lines(S))`: `S` itself when `|S|` is even, its complement
/// when `|S|` is odd.
pub fn roundtrip(plane: &Plane, points: &PointSet) -> PointSet {
    odd_points(plane, &odd_lines(plane, points))
}

/// `counts[i]` is the number of points on exactly `i` lines of a line set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityProfile {
    pub counts: Vec<usize>,
}

impl MultiplicityProfile {
    pub fn count(&self, i: usize) -> usize {
        self.counts.get(i).copied().unwrap_or(0)
    }

    /// Number of points on an odd number of lines.
    pub fn odd_total(&self) -> usize {
        self.counts.iter().skip(1).step_by(2).sum()
    }

    /// Σ i·(2 − i)·t_i, which equals `r(q + 2 − r)`.
    pub fn weighted_defect(&self) -> i64 {
        self.counts.iter().enumerate().map(|(i, &t)| i as i64 * (2 - i as i64) * t as i64).sum()
    }
}

pub fn multiplicity_profile(plane: &Plane, lines: &LineSet) -> MultiplicityProfile {
    let mut counts = vec![0usize; lines.count() + 1];
    for p in 0..plane.n() {
        counts[plane.point_lines(p).intersection_count(lines)] += 1;
    }
    MultiplicityProfile { counts }
}

/// Points on at least three lines of `lines`.
pub fn triple_points(plane: &Plane, lines: &LineSet) -> PointSet {
    PointSet::from_indices(plane.n(), (0..plane.n()).filter(|&p| plane.point_lines(p).intersection_count(lines) >= 3))
}

/// GF(2) rank of the point-line incidence matrix.
pub fn incidence_rank(plane: &Plane) -> usize {
    let mut rows: Vec<Vec<u64>> = (0..plane.n()).map(|l| plane.line_points(l).words().to_vec()).collect();
    let mut rank = 0;
    for col in 0..plane.n() {
        let (w, b) = (col / 64, col % 64);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::ConicKind;

    #[test]
    fn small_cases() {
        let p = Plane::of_order(3).unwrap();
        let one = LineSet::from_indices(13, [5]);
        assert_eq!(odd_points(&p, &one), *p.line_points(5));
        assert_eq!(even_points(&p, &one).count(), 9);
        let two = LineSet::from_indices(13, [0, 5]);
        assert_eq!(odd_points(&p, &two).count(), 6);
        assert!(odd_points(&p, &LineSet::full(13)).is_empty());
        assert_eq!(even_points(&p, &p.empty_lines()).count(), 13);
        assert!(odd_lines(&p, &p.empty_points()).is_empty());
        let pt = PointSet::from_indices(13, [4]);
        assert_eq!(odd_lines(&p, &pt), *p.point_lines(4));
    }

    #[test]
    fn two_line_profile() {
        let p = Plane::of_order(3).unwrap();
        let prof = multiplicity_profile(&p, &LineSet::from_indices(13, [0, 5]));
        assert_eq!(prof.counts, vec![6, 6, 1]);
        assert_eq!(prof.odd_total(), 6);
    }

    #[test]
    fn conic_subsets_have_expected_odd_lines() {
        for q in [5u32, 7, 9] {
            let p = Plane::of_order(q).unwrap();
            let c = p.conic(ConicKind::Primary).unwrap().to_vec();
            for r in 0..=c.len() {
                let s = PointSet::from_indices(p.n(), c[..r].iter().copied());
                assert_eq!(odd_lines(&p, &s).count(), r * (q as usize + 2 - r));
            }
        }
    }

    #[test]
    fn ranks() {
        for (q, rank) in [(3, 12), (5, 30), (7, 56)] {
            assert_eq!(incidence_rank(&Plane::of_order(q).unwrap()), rank);
        }
    }

    #[test]
    fn roundtrip_parity() {
        let p = Plane::of_order(5).unwrap();
        let even = PointSet::from_indices(31, [1, 2, 9, 30]);
        assert_eq!(roundtrip(&p, &even), even);
        let odd = PointSet::from_indices(31, [1, 2, 9]);
        assert_eq!(roundtrip(&p, &odd), odd.complement());
        assert!(roundtrip(&p, &p.empty_points()).is_empty());
    }

    #[test]
    fn triple_point_extraction() {
        let p = Plane::of_order(5).unwrap();
        let through_zero: Vec<usize> = p.lines_through(0).iter().take(3).map(|&l| l as usize).collect();
        let r = LineSet::from_indices(31, through_zero);
        assert_eq!(triple_points(&p, &r).to_vec(), vec![0]);
    }
}

//! The Desarguesian plane PG(2,q) with a fixed enumeration.
//!
//! Points are normalized triples (leftmost nonzero coordinate 1) numbered
//! `[1:y:z] -> y*q + z`, then `[0:1:z] -> q² + z`, then `[0:0:1] -> q² + q`,
//! using element encodings for `y` and `z`. Lines `[a:b:c]` (the line
//! `aX + bY + cZ = 0`) are numbered by the same rule on their coefficients,
//! so point `i` lies on line `j` exactly when point `j` lies on line `i`.

mod baer;
mod conic;

pub use baer::BaerSubplane;
pub use conic::{ConicKind, PointClass};

use std::sync::{Arc, OnceLock};

use crate::bits::{LineSet, PointSet};
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldTables};

/// Homogeneous coordinates of a point, or coefficients of a line.
pub type Triple = [Elem; 3];

/// Incidence structure of PG(2,q). Immutable once built.
pub struct Plane {
    field: Arc<FieldTables>,
    q: u32,
    n: usize,
    coords: Vec<Triple>,
    line_points: Vec<PointSet>,
    point_lines: Vec<LineSet>,
    /// Row `l` holds the `q+1` points of line `l`; by duality it is also the
    /// list of lines through point `l`.
    incidence: Vec<u32>,
    tangents: OnceLock<LineSet>,
}

impl std::fmt::Debug for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG(2,{})", self.q)
    }
}

impl Plane {
    pub fn new(field: Arc<FieldTables>) -> Self {
        let q = field.order();
        let n = (q * q + q + 1) as usize;
        let coords: Vec<Triple> = (0..n).map(|i| index_coords(q, i)).collect();
        let mut incidence = Vec::with_capacity(n * (q as usize + 1));
        let mut line_points = Vec::with_capacity(n);
        for l in &coords {
            let mut mask = PointSet::empty(n);
            for (p, c) in coords.iter().enumerate() {
                let dot = field.add(field.add(field.mul(l[0], c[0]), field.mul(l[1], c[1])), field.mul(l[2], c[2]));
                if dot == 0 {
                    mask.insert(p);
                    incidence.push(p as u32);
                }
            }
            line_points.push(mask);
        }
        let point_lines = line_points.iter().map(|m| m.retag()).collect();
        Plane { field, q, n, coords, line_points, point_lines, incidence, tangents: OnceLock::new() }
    }

    /// PG(2,q) over the default GF(q).
    pub fn of_order(q: u32) -> Result<Self> {
        Ok(Self::new(Arc::new(FieldTables::of_order(q)?)))
    }

    pub fn field(&self) -> &Arc<FieldTables> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of points, which is also the number of lines.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Normalized coordinates of point `i` (or coefficients of line `i`).
    pub fn coords(&self, i: usize) -> Triple {
        self.coords[i]
    }

    pub fn origin_x(&self) -> usize {
        0
    }

    pub fn origin_y(&self) -> usize {
        (self.q * self.q) as usize
    }

    pub fn origin_z(&self) -> usize {
        (self.q * self.q + self.q) as usize
    }

    pub fn line_points(&self, line: usize) -> &PointSet {
        &self.line_points[line]
    }

    pub fn point_lines(&self, point: usize) -> &LineSet {
        &self.point_lines[point]
    }

    /// The `q+1` points of a line in increasing order.
    pub fn points_on(&self, line: usize) -> &[u32] {
        let k = self.q as usize + 1;
        &self.incidence[line * k..(line + 1) * k]
    }

    /// The `q+1` lines through a point in increasing order.
    pub fn lines_through(&self, point: usize) -> &[u32] {
        self.points_on(point)
    }

    pub fn incident(&self, point: usize, line: usize) -> bool {
        self.line_points[line].contains(point)
    }

    /// Scales a nonzero triple so its leftmost nonzero entry is 1.
    pub fn normalize(&self, t: Triple) -> Result<Triple> {
        let f = &self.field;
        let lead =
            t.iter().copied().find(|&c| c != 0).ok_or_else(|| Error::Param("the zero vector is not a point".into()))?;
        let inv = f.inv(lead)?;
        Ok(t.map(|c| f.mul(c, inv)))
    }

    /// Index of the point with the given (not necessarily normalized) coordinates.
    pub fn index_of(&self, t: Triple) -> Result<usize> {
        let [x, y, z] = self.normalize(t)?;
        let q = self.q as usize;
        Ok(if x == 1 {
            y as usize * q + z as usize
        } else if y == 1 {
            q * q + z as usize
        } else {
            q * q + q
        })
    }

    fn cross(&self, a: Triple, b: Triple) -> Triple {
        let f = &self.field;
        let m = |i: usize, j: usize| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
        [m(1, 2), m(2, 0), m(0, 1)]
    }

    /// The line through two distinct points.
    pub fn line_through(&self, p1: usize, p2: usize) -> Result<usize> {
        if p1 == p2 {
            return Err(Error::Param(format!("line_through needs distinct points, got {p1} twice")));
        }
        self.index_of(self.cross(self.coords[p1], self.coords[p2]))
    }

    /// The common point of two distinct lines.
    pub fn meet(&self, l1: usize, l2: usize) -> Result<usize> {
        if l1 == l2 {
            return Err(Error::Param(format!("meet needs distinct lines, got {l1} twice")));
        }
        self.index_of(self.cross(self.coords[l1], self.coords[l2]))
    }

    pub fn empty_points(&self) -> PointSet {
        PointSet::empty(self.n)
    }

    pub fn empty_lines(&self) -> LineSet {
        LineSet::empty(self.n)
    }

    /// Whether some line contains all the given points.
    pub fn collinear(&self, points: &[usize]) -> bool {
        match points {
            [] | [_] | [_, _] => true,
            [a, rest @ ..] => {
                let Some(&b) = rest.iter().find(|&&b| b != *a) else {
                    return true;
                };
                let l = self.line_through(*a, b).expect("distinct");
                points.iter().all(|&p| self.incident(p, l))
            }
        }
    }
}

fn index_coords(q: u32, i: usize) -> Triple {
    let q2 = (q * q) as usize;
    if i < q2 {
        [1, (i / q as usize) as Elem, (i % q as usize) as Elem]
    } else if i < q2 + q as usize {
        [0, 1, (i - q2) as Elem]
    } else {
        [0, 0, 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let p = Plane::of_order(3).unwrap();
        assert_eq!(p.n(), 13);
        assert!((0..13).all(|l| p.line_points(l).count() == 4));
        assert_eq!((0..13).map(|l| p.line_points(l).count()).sum::<usize>(), 52);
        assert_eq!(Plane::of_order(5).unwrap().n(), 31);
    }

    #[test]
    fn named_lines() {
        let p = Plane::of_order(3).unwrap();
        let y0 = p.line_through(p.origin_x(), p.origin_z()).unwrap();
        assert_eq!(p.coords(y0), [0, 1, 0]);
        let z0 = p.line_through(p.origin_x(), p.origin_y()).unwrap();
        assert_eq!(p.coords(z0), [0, 0, 1]);
        assert_eq!(p.meet(y0, z0).unwrap(), p.origin_x());
        assert!(p.meet(y0, y0).is_err());
        assert!(p.line_through(4, 4).is_err());
    }

    #[test]
    fn index_round_trip() {
        let p = Plane::of_order(9).unwrap();
        for i in 0..p.n() {
            assert_eq!(p.index_of(p.coords(i)).unwrap(), i);
            let scaled = p.coords(i).map(|c| p.field().mul(c, 5));
            assert_eq!(p.index_of(scaled).unwrap(), i);
        }
    }

    #[test]
    fn incidence_axioms_exhaustive() {
        for q in [3, 5, 7, 9, 11, 13] {
            let p = Plane::of_order(q).unwrap();
            let n = p.n();
            for i in 0..n {
                assert_eq!(p.line_points(i).count(), q as usize + 1);
                assert_eq!(p.point_lines(i).count(), q as usize + 1);
                for j in i + 1..n {
                    assert_eq!(p.line_points(i).intersection_count(p.line_points(j)), 1);
                    assert_eq!(p.point_lines(i).intersection_count(p.point_lines(j)), 1);
                }
            }
        }
    }

    #[test]
    fn line_through_and_meet_agree() {
        let p = Plane::of_order(5).unwrap();
        for a in 0..p.n() {
            for b in 0..p.n() {
                if a == b {
                    continue;
                }
                let l = p.line_through(a, b).unwrap();
                assert!(p.incident(a, l) && p.incident(b, l));
                let other = p.lines_through(a).iter().map(|&m| m as usize).find(|&m| m != l).unwrap();
                assert_eq!(p.meet(l, other).unwrap(), a);
            }
        }
    }

    #[test]
    fn point_line_duality_is_symmetric() {
        let p = Plane::of_order(7).unwrap();
        for i in 0..p.n() {
            for j in 0..p.n() {
                assert_eq!(p.incident(i, j), p.incident(j, i));
            }
        }
    }

    #[test]
    fn collinearity() {
        let p = Plane::of_order(5).unwrap();
        let pts: Vec<usize> = p.points_on(7).iter().map(|&x| x as usize).collect();
        assert!(p.collinear(&pts));
        assert!(!p.collinear(&[p.origin_x(), p.origin_y(), p.origin_z()]));
    }
}

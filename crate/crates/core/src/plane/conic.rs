use serde::Serialize;

use super::Plane;
use crate::bits::{LineSet, PointSet};
use crate::error::{Error, Result};
use crate::gf::Elem;

/// Which of the two fixed conics to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConicKind {
    /// `XZ = Y²`.
    Primary,
    /// `XZ = cY²` with `c = 4`, or in characteristic 3 (where 4 = 1) the
    /// least nonzero square other than 1. Meets the primary conic only in
    /// `O_x` and `O_z`.
    Scaled,
}

/// Position of a point relative to the primary conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PointClass {
    OnConic,
    /// On no tangent line.
    NoTangent,
    /// On exactly two tangent lines.
    TwoTangents,
}

impl Plane {
    /// The coefficient `c` of the conic `XZ = cY²`.
    pub fn conic_scale(&self, kind: ConicKind) -> Result<Elem> {
        let f = self.field();
        match kind {
            ConicKind::Primary => Ok(1),
            ConicKind::Scaled if f.characteristic() != 3 => Ok(4 % f.characteristic()),
            ConicKind::Scaled => (2..f.order())
                .find(|&c| f.is_square(c))
                .ok_or_else(|| Error::Param(format!("GF({}) has no square other than 1", f.order()))),
        }
    }

    /// Points of `XZ = cY²`, tested by direct evaluation.
    pub fn conic(&self, kind: ConicKind) -> Result<PointSet> {
        let c = self.conic_scale(kind)?;
        let f = self.field();
        Ok(PointSet::from_indices(
            self.n(),
            (0..self.n()).filter(|&i| {
                let [x, y, z] = self.coords(i);
                f.mul(x, z) == f.mul(c, f.mul(y, y))
            }),
        ))
    }

    /// The lines meeting `conic` in exactly one point.
    pub fn tangents(&self, conic: &PointSet) -> Result<LineSet> {
        let q = self.q() as usize;
        if conic.count() != q + 1 {
            return Err(Error::NotConic(format!("{} points, expected {}", conic.count(), q + 1)));
        }
        let mut out = self.empty_lines();
        for l in 0..self.n() {
            match self.line_points(l).intersection_count(conic) {
                0 | 2 => {}
                1 => out.insert(l),
                k => return Err(Error::NotConic(format!("line {l} meets it in {k} points"))),
            }
        }
        if out.count() != q + 1 {
            return Err(Error::NotConic(format!("{} tangents, expected {}", out.count(), q + 1)));
        }
        Ok(out)
    }

    /// Tangents of the primary conic, computed once.
    pub fn primary_tangents(&self) -> &LineSet {
        self.tangents.get_or_init(|| {
            let c = self.conic(ConicKind::Primary).expect("primary conic exists");
            self.tangents(&c).expect("XZ = Y² is a conic")
        })
    }

    /// Classifies a point by the number of primary tangents through it.
    pub fn point_class(&self, point: usize) -> PointClass {
        let [x, y, z] = self.coords(point);
        let f = self.field();
        if f.mul(x, z) == f.mul(y, y) {
            return PointClass::OnConic;
        }
        match self.point_lines(point).intersection_count(self.primary_tangents()) {
            0 => PointClass::NoTangent,
            2 => PointClass::TwoTangents,
            k => unreachable!("an off-conic point lies on 0 or 2 tangents, found {k}"),
        }
    }

    /// Points of a class in increasing index order.
    pub fn points_of_class(&self, class: PointClass) -> Vec<usize> {
        (0..self.n()).filter(|&p| self.point_class(p) == class).collect()
    }

    /// The line `X = dZ` for the least non-residue `d`; disjoint from `XZ = Y²`.
    pub fn exterior_line(&self) -> usize {
        let f = self.field();
        let d = f.least_nonresidue();
        self.index_of([1, 0, f.neg(d)]).expect("nonzero triple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_q3() {
        let p = Plane::of_order(3).unwrap();
        let c = p.conic(ConicKind::Primary).unwrap();
        let expected: Vec<usize> =
            [[1, 0, 0], [0, 0, 1], [1, 1, 1], [1, 2, 1]].iter().map(|&t| p.index_of(t).unwrap()).collect();
        let mut expected = expected;
        expected.sort();
        assert_eq!(c.to_vec(), expected);
        assert!(p.conic(ConicKind::Scaled).is_err());
    }

    #[test]
    fn conic_line_counts() {
        for q in [3u32, 5, 7, 9, 11, 13] {
            let p = Plane::of_order(q).unwrap();
            let c = p.conic(ConicKind::Primary).unwrap();
            assert_eq!(c.count(), q as usize + 1);
            let mut by_size = [0usize; 3];
            for l in 0..p.n() {
                let k = p.line_points(l).intersection_count(&c);
                assert!(k <= 2);
                by_size[k] += 1;
            }
            let q = q as usize;
            assert_eq!(by_size, [q * (q - 1) / 2, q + 1, (q + 1) * q / 2]);
            let t = p.tangents(&c).unwrap();
            assert!(t.iter().all(|l| p.line_points(l).intersection_count(&c) == 1));
        }
    }

    #[test]
    fn tangents_reject_non_conics() {
        let p = Plane::of_order(5).unwrap();
        let line = p.line_points(3).clone();
        assert!(p.tangents(&line).is_err());
    }

    #[test]
    fn scaled_conic_meets_primary_only_at_base_points() {
        for q in [5u32, 7, 9, 11, 13] {
            let p = Plane::of_order(q).unwrap();
            let c = p.conic(ConicKind::Primary).unwrap();
            let c2 = p.conic(ConicKind::Scaled).unwrap();
            assert_eq!(c2.count(), q as usize + 1);
            assert!(p.tangents(&c2).is_ok());
            assert_eq!(c.and(&c2).to_vec(), vec![p.origin_x(), p.origin_z()]);
        }
    }

    #[test]
    fn class_sizes() {
        for q in [5u32, 7, 9, 11] {
            let p = Plane::of_order(q).unwrap();
            let q = q as usize;
            assert_eq!(p.points_of_class(PointClass::NoTangent).len(), q * (q - 1) / 2);
            assert_eq!(p.points_of_class(PointClass::TwoTangents).len(), q * (q + 1) / 2);
            assert_eq!(p.points_of_class(PointClass::OnConic).len(), q + 1);
        }
        let p = Plane::of_order(7).unwrap();
        assert_eq!(p.points_of_class(PointClass::NoTangent).len(), 21);
        assert_eq!(p.points_of_class(PointClass::TwoTangents).len(), 28);
    }

    #[test]
    fn exterior_line_is_disjoint() {
        let p = Plane::of_order(7).unwrap();
        assert_eq!(p.coords(p.exterior_line()), [1, 0, 4]);
        for q in [3u32, 5, 7, 9, 11, 13] {
            let p = Plane::of_order(q).unwrap();
            let c = p.conic(ConicKind::Primary).unwrap();
            assert_eq!(p.line_points(p.exterior_line()).intersection_count(&c), 0);
        }
        let p5 = Plane::of_order(5).unwrap();
        assert_eq!(p5.coords(p5.exterior_line()), [1, 0, 3]);
    }
}

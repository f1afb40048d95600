use serde::Serialize;

use super::Plane;
use crate::bits::{LineSet, PointSet};
use crate::error::{Error, Result};
use crate::gf::{exact_sqrt, DEFAULT_MAX_ORDER};

/// A subplane of order `√q`, with its `(√q+1)`-secant lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaerSubplane {
    pub points: PointSet,
    pub secants: LineSet,
}

impl BaerSubplane {
    /// Checks the subplane axioms directly and collects the secants.
    pub fn verify(plane: &Plane, points: PointSet) -> Result<Self> {
        let q = plane.q();
        let s = exact_sqrt(q).ok_or_else(|| Error::NotBaer(format!("q={q} is not a square")))?;
        let size = (q + s + 1) as usize;
        if points.count() != size {
            return Err(Error::NotBaer(format!("{} points, expected {size}", points.count())));
        }
        let mut secants = plane.empty_lines();
        for l in 0..plane.n() {
            match plane.line_points(l).intersection_count(&points) {
                1 => {}
                k if k == s as usize + 1 => secants.insert(l),
                k => return Err(Error::NotBaer(format!("line {l} meets it in {k} points"))),
            }
        }
        if secants.count() != size {
            return Err(Error::NotBaer(format!("{} secants, expected {size}", secants.count())));
        }
        let sec: Vec<usize> = secants.to_vec();
        for (i, &a) in sec.iter().enumerate() {
            for &b in &sec[i + 1..] {
                if !points.contains(plane.meet(a, b)?) {
                    return Err(Error::NotBaer(format!("secants {a} and {b} meet outside")));
                }
            }
        }
        let pts = points.to_vec();
        let has_frame = pts.iter().enumerate().any(|(i, &a)| {
            pts[i + 1..].iter().enumerate().any(|(j, &b)| {
                pts[i + j + 2..].iter().any(|&c| {
                    !plane.collinear(&[a, b, c])
                        && pts.iter().any(|&d| {
                            ![a, b, c].contains(&d)
                                && !plane.collinear(&[a, b, d])
                                && !plane.collinear(&[a, c, d])
                                && !plane.collinear(&[b, c, d])
                        })
                })
            })
        });
        if !has_frame {
            return Err(Error::NotBaer("no four points in general position".into()));
        }
        Ok(BaerSubplane { points, secants })
    }
}

impl Plane {
    /// Points whose normalized coordinates lie in GF(√q).
    pub fn subfield_baer(&self) -> Result<BaerSubplane> {
        let q = self.q();
        let s = exact_sqrt(q).ok_or_else(|| Error::NotBaer(format!("q={q} is not a square")))?;
        let sub = self.field().subfield(s)?;
        let points = PointSet::from_indices(
            self.n(),
            (0..self.n()).filter(|&i| self.coords(i).iter().all(|c| sub.binary_search(c).is_ok())),
        );
        BaerSubplane::verify(self, points)
    }

    /// Partition of the points into `q - √q + 1` disjoint Baer subplanes:
    /// the orbits of the subgroup of order `q + √q + 1` of a Singer cycle.
    ///
    /// Points are identified with GF(q³)^×/GF(q)^× through coordinates in
    /// the basis `1, x, x²`. Orbits are listed by their least point.
    pub fn singer_baer_partition(&self) -> Result<Vec<BaerSubplane>> {
        let q = self.q();
        let s = exact_sqrt(q).ok_or_else(|| Error::NotBaer(format!("q={q} is not a square")))?;
        let cube = self.field().cube_extension(DEFAULT_MAX_ORDER)?;
        let step = cube.pow(cube.generator(), (q - s + 1) as u64);
        let orbit_len = (q + s + 1) as usize;
        let mut seen = self.empty_points();
        let mut parts = Vec::new();
        for start in 0..self.n() {
            if seen.contains(start) {
                continue;
            }
            let c = self.coords(start);
            let mut e = cube.from_coordinates(&c);
            let mut orbit = self.empty_points();
            for _ in 0..orbit_len {
                let digits = cube.coordinates(e);
                let idx = self.index_of([digits[0], digits[1], digits[2]])?;
                orbit.insert(idx);
                e = cube.mul(e, step);
            }
            if orbit.count() != orbit_len || !orbit.and(&seen).is_empty() {
                return Err(Error::NotBaer(format!("Singer orbit of point {start} is malformed")));
            }
            seen = seen.or(&orbit);
            parts.push(BaerSubplane::verify(self, orbit)?);
        }
        Ok(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subfield_baer_q9() {
        let p = Plane::of_order(9).unwrap();
        let b = p.subfield_baer().unwrap();
        assert_eq!(b.points.count(), 13);
        assert_eq!(b.secants.count(), 13);
        for l in 0..p.n() {
            let k = p.line_points(l).intersection_count(&b.points);
            assert!(k == 1 || k == 4);
        }
        assert!(Plane::of_order(7).unwrap().subfield_baer().is_err());
    }

    /// Through every point off the subplane there is exactly one secant.
    #[test]
    fn one_secant_through_external_points() {
        let p = Plane::of_order(9).unwrap();
        let b = p.subfield_baer().unwrap();
        for x in 0..p.n() {
            if !b.points.contains(x) {
                assert_eq!(p.point_lines(x).intersection_count(&b.secants), 1);
            }
        }
    }

    #[test]
    fn singer_partition_q9() {
        let p = Plane::of_order(9).unwrap();
        let parts = p.singer_baer_partition().unwrap();
        assert_eq!(parts.len(), 7);
        let mut all = p.empty_points();
        for b in &parts {
            assert_eq!(b.points.count(), 13);
            assert!(b.points.and(&all).is_empty());
            all = all.or(&b.points);
        }
        assert_eq!(all.count(), 91);
        for l in 0..p.n() {
            assert_eq!(parts.iter().filter(|b| b.secants.contains(l)).count(), 1);
        }
    }

    #[test]
    fn verify_rejects_lines() {
        let p = Plane::of_order(9).unwrap();
        let mut pts = p.line_points(0).clone();
        pts.insert(p.origin_z());
        pts.insert(p.origin_y());
        pts.insert(p.origin_x());
        assert!(BaerSubplane::verify(&p, pts).is_err());
    }
}

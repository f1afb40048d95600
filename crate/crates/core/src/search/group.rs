//! Collineations of PG(2,q) as point permutations.

use crate::error::{param, Error, Result};
use crate::gf::{Elem, FieldTables};
use crate::plane::{Plane, Triple};

/// A 3x3 matrix over GF(q), acting on column vectors.
pub type Matrix = [[Elem; 3]; 3];

/// A collineation as the image of every point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Collineation(pub Vec<u32>);

impl Collineation {
    pub fn identity(n: usize) -> Self {
        Collineation((0..n as u32).collect())
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Collineation) -> Collineation {
        Collineation(first.0.iter().map(|&p| self.0[p as usize]).collect())
    }

    /// Whether every line maps onto a line.
    pub fn preserves_incidence(&self, plane: &Plane) -> bool {
        (0..plane.n()).all(|l| {
            let pts = plane.points_on(l);
            let image: Vec<usize> = pts.iter().map(|&p| self.apply(p as usize)).collect();
            plane.line_through(image[0], image[1]).is_ok_and(|m| image.iter().all(|&p| plane.incident(p, m)))
        })
    }
}

fn mat_vec(f: &FieldTables, m: &Matrix, v: Triple) -> Triple {
    std::array::from_fn(|i| (0..3).fold(0, |acc, j| f.add(acc, f.mul(m[i][j], v[j]))))
}

fn det(f: &FieldTables, m: &Matrix) -> Elem {
    let minor = |a: usize, b: usize| f.sub(f.mul(m[1][a], m[2][b]), f.mul(m[1][b], m[2][a]));
    let t0 = f.mul(m[0][0], minor(1, 2));
    let t1 = f.mul(m[0][1], minor(0, 2));
    let t2 = f.mul(m[0][2], minor(0, 1));
    f.add(f.sub(t0, t1), t2)
}

/// Solves `m x = b` by Cramer's rule.
fn solve(f: &FieldTables, m: &Matrix, b: Triple) -> Result<Triple> {
    let d = det(f, m);
    if d == 0 {
        return param("singular matrix");
    }
    let mut x = [0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut mk = *m;
        (0..3).for_each(|i| mk[i][k] = b[i]);
        *xk = f.div(det(f, &mk), d)?;
    }
    Ok(x)
}

/// The point permutation of a nonsingular matrix.
pub fn projectivity(plane: &Plane, m: &Matrix) -> Result<Collineation> {
    let f = plane.field();
    if det(f, m) == 0 {
        return param("singular matrix");
    }
    (0..plane.n())
        .map(|p| plane.index_of(mat_vec(f, m, plane.coords(p))).map(|i| i as u32))
        .collect::<Result<_>>()
        .map(Collineation)
}

/// The matrix sending the standard frame `e0, e1, e2, e0+e1+e2` onto `frame`.
fn frame_matrix(plane: &Plane, frame: [usize; 4]) -> Result<Matrix> {
    let f = plane.field();
    let cols = frame.map(|p| plane.coords(p));
    let d: Matrix = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]));
    let lambda = solve(f, &d, cols[3]).map_err(|_| Error::Param(format!("{frame:?} is not a frame")))?;
    if lambda.contains(&0) {
        return param(format!("{frame:?} is not a frame"));
    }
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| f.mul(d[i][j], lambda[j]))))
}

/// The unique projectivity mapping `src[i]` to `dst[i]` for two frames
/// (four points, no three collinear).
pub fn projectivity_from_frames(plane: &Plane, src: [usize; 4], dst: [usize; 4]) -> Result<Collineation> {
    let to_src = projectivity(plane, &frame_matrix(plane, src)?)?;
    let to_dst = projectivity(plane, &frame_matrix(plane, dst)?)?;
    let mut from_src = vec![0u32; plane.n()];
    to_src.0.iter().enumerate().for_each(|(p, &img)| from_src[img as usize] = p as u32);
    Ok(to_dst.compose(&Collineation(from_src)))
}

/// The coordinatewise Frobenius map `x -> x^p`.
pub fn frobenius(plane: &Plane) -> Result<Collineation> {
    let f = plane.field();
    (0..plane.n())
        .map(|p| plane.index_of(plane.coords(p).map(|c| f.frobenius(c))).map(|i| i as u32))
        .collect::<Result<_>>()
        .map(Collineation)
}

/// Generators of PΓL(3,q): a primitive diagonal scaling, the cyclic and a
/// transposing coordinate permutation, an elementary transvection, and the
/// Frobenius map when `q` is not prime.
pub fn collineation_generators(plane: &Plane) -> Result<Vec<Collineation>> {
    let g = plane.field().generator();
    let mats: [Matrix; 4] = [
        [[g, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
    ];
    let mut gens = mats.iter().map(|m| projectivity(plane, m)).collect::<Result<Vec<_>>>()?;
    if plane.field().degree() > 1 {
        gens.push(frobenius(plane)?);
    }
    Ok(gens)
}

/// The orbit of `point` under the group generated by `gens`.
pub fn point_orbit(gens: &[Collineation], point: usize, n: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut stack = vec![point];
    seen[point] = true;
    let mut out = Vec::new();
    while let Some(p) = stack.pop() {
        out.push(p);
        for g in gens {
            let img = g.apply(p);
            if !seen[img] {
                seen[img] = true;
                stack.push(img);
            }
        }
    }
    out.sort_unstable();
    out
}

/// The standard frame `[1:0:0], [0:1:0], [0:0:1], [1:1:1]` as point indices.
pub fn standard_frame(plane: &Plane) -> Result<[usize; 4]> {
    Ok([plane.origin_x(), plane.origin_y(), plane.origin_z(), plane.index_of([1, 1, 1])?])
}

/// Every collineation fixing the standard frame setwise: the 24 frame
/// permutations, each composed with every power of Frobenius.
pub fn frame_stabilizer(plane: &Plane) -> Result<Vec<Collineation>> {
    let frame = standard_frame(plane)?;
    let frob = frobenius(plane)?;
    let mut out = Vec::new();
    for perm in permutations4() {
        let base = projectivity_from_frames(plane, frame, perm.map(|i| frame[i]))?;
        let mut g = base;
        for _ in 0..plane.field().degree() {
            out.push(g.clone());
            g = frob.compose(&g);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for code in 0..256usize {
        let p = [code & 3, code >> 2 & 3, code >> 4 & 3, code >> 6 & 3];
        if (0..4).all(|i| p.contains(&i)) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_collineations_with_full_orbit() {
        for q in [3u32, 5, 7, 9] {
            let p = Plane::of_order(q).unwrap();
            let gens = collineation_generators(&p).unwrap();
            assert!(gens.iter().all(|g| g.preserves_incidence(&p)), "q={q}");
            assert_eq!(point_orbit(&gens, 0, p.n()).len(), p.n());
            let id = Collineation::identity(p.n());
            assert!(id.preserves_incidence(&p));
            assert_eq!(gens[0].compose(&id), gens[0]);
        }
    }

    #[test]
    fn frame_maps() {
        let p = Plane::of_order(5).unwrap();
        let src = standard_frame(&p).unwrap();
        let dst = [3, 11, 22, 30];
        let g = projectivity_from_frames(&p, src, dst).unwrap();
        assert_eq!(src.map(|x| g.apply(x)), dst);
        assert!(g.preserves_incidence(&p));
        assert!(projectivity_from_frames(&p, src, [0, 1, 2, 3]).is_err());
    }

    #[test]
    fn stabilizer_orders() {
        for (q, order) in [(5u32, 24usize), (7, 24), (9, 48)] {
            let p = Plane::of_order(q).unwrap();
            let g0 = frame_stabilizer(&p).unwrap();
            assert_eq!(g0.len(), order, "q={q}");
            let frame = standard_frame(&p).unwrap();
            for g in &g0 {
                let mut img = frame.map(|x| g.apply(x));
                img.sort_unstable();
                let mut f = frame;
                f.sort_unstable();
                assert_eq!(img, f);
            }
        }
    }
}

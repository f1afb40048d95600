//! Explicit point and line sets realizing upper bounds on `f`.
//!
//! Every result carries its witness and the odd count recomputed from it;
//! the formula value is kept alongside as `claimed` and never substituted
//! for a measurement.

mod blocker;
mod realize;

pub use blocker::{
    even_line_floor, exhaustive_affine_blocker, near_blocker, random_affine_blocker, three_cover, two_cover,
    BlockerShape, NearBlocker,
};
pub use realize::{realize_decomposition, realize_f_upper, RealizeOutcome};

use serde::Serialize;

use crate::bits::{LineSet, PointSet};
use crate::error::{param, Error, Result};
use crate::gf::{Elem, NormGroup};
use crate::parity::even_lines;
use crate::plane::{BaerSubplane, ConicKind, Plane, PointClass};
use crate::witness::Witness;

/// Which construction produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    Conic,
    ConicPlusB,
    Residue0,
    Residue1,
    Vertical,
    ResidueVerticalConic,
    VerticalConic,
    VerticalTwoConics,
    BaerPlusPoint,
    BaerMinusPoint,
    TwoBaer,
    TwoPoints,
    LineSwap,
    LineMinusTwo,
    Realize,
}

impl ConstructionKind {
    /// Short name used by the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            ConstructionKind::Conic => "conic",
            ConstructionKind::ConicPlusB => "conicB",
            ConstructionKind::Residue0 => "q0",
            ConstructionKind::Residue1 => "q1",
            ConstructionKind::Vertical => "vertical",
            ConstructionKind::ResidueVerticalConic => "l32",
            ConstructionKind::VerticalConic => "le",
            ConstructionKind::VerticalTwoConics => "lo",
            ConstructionKind::BaerPlusPoint => "baer7",
            ConstructionKind::BaerMinusPoint => "baer8",
            ConstructionKind::TwoBaer => "baer9",
            ConstructionKind::TwoPoints => "two_points",
            ConstructionKind::LineSwap => "line_swap",
            ConstructionKind::LineMinusTwo => "line_minus_two",
            ConstructionKind::Realize => "realize",
        }
    }
}

/// Parameters a construction was instantiated with.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
    /// The distinguished point of a Baer construction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<usize>,
}

/// A witness with the bound it proves.
///
/// The witness proves `f(r) <= achieved`; `claimed` is the formula value,
/// and `achieved <= claimed` holds for every successfully built result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionResult {
    pub kind: ConstructionKind,
    pub params: Params,
    pub witness: Witness,
    pub r: usize,
    pub achieved: usize,
    pub claimed: usize,
}

impl ConstructionResult {
    /// Measures `witness` from scratch and checks it against `claimed`.
    pub fn measure(
        plane: &Plane,
        kind: ConstructionKind,
        params: Params,
        witness: Witness,
        claimed: usize,
    ) -> Result<Self> {
        let e = witness.evaluate(plane)?;
        if e.value > claimed {
            return Err(Error::Construction(format!(
                "{} achieved {} above its formula value {claimed}",
                kind.cli_name(),
                e.value
            )));
        }
        Ok(ConstructionResult { kind, params, witness, r: e.r, achieved: e.value, claimed })
    }
}

fn q_usize(plane: &Plane) -> usize {
    plane.q() as usize
}

/// The first `r` points of the primary conic in index order, optionally
/// skipping `O_x` and `O_z`.
fn conic_prefix(plane: &Plane, r: usize, avoid_axes: bool) -> Result<PointSet> {
    let conic = plane.conic(ConicKind::Primary)?;
    let axes = [plane.origin_x(), plane.origin_z()];
    let pts: Vec<usize> = conic.iter().filter(|p| !avoid_axes || !axes.contains(p)).take(r).collect();
    if pts.len() < r {
        return param(format!("the conic has fewer than {r} usable points"));
    }
    Ok(PointSet::from_indices(plane.n(), pts))
}

/// `r` points of the conic `XZ = Y²`; exactly `r(q + 2 - r)` odd lines.
pub fn conic_subset(plane: &Plane, r: usize) -> Result<ConstructionResult> {
    let q = q_usize(plane);
    if r > q + 1 {
        return param(format!("r={r} exceeds q+1={}", q + 1));
    }
    let s = conic_prefix(plane, r, false)?;
    ConstructionResult::measure(
        plane,
        ConstructionKind::Conic,
        Params { r: Some(r), ..Params::default() },
        Witness::Points(s),
        r * (q + 2 - r),
    )
}

/// The conic plus its least two-tangent point: `q + 2` points, `2q - 2` odd lines.
pub fn conic_plus_b_point(plane: &Plane) -> Result<ConstructionResult> {
    let q = q_usize(plane);
    if q < 5 {
        return param("the conic-plus-point construction needs q >= 5");
    }
    let mut s = plane.conic(ConicKind::Primary)?;
    let p = (0..plane.n())
        .find(|&p| plane.point_class(p) == PointClass::TwoTangents)
        .ok_or_else(|| Error::Construction("no point on two tangents".into()))?;
    s.insert(p);
    ConstructionResult::measure(
        plane,
        ConstructionKind::ConicPlusB,
        Params { point: Some(p), ..Params::default() },
        Witness::Points(s),
        2 * q - 2,
    )
}

/// Nonzero squares and non-squares of the field, in encoding order.
fn residues(plane: &Plane) -> (Vec<Elem>, Vec<Elem>) {
    let f = plane.field();
    (1..f.order()).partition(|&x| f.is_square(x))
}

/// The three-sided residue set `Q_i`: every line avoiding `O_x, O_y, O_z`
/// meets it in `i` points mod 2.
///
/// Built from `[x:0:1]` and `[1:x:0]` with `x` a square, and `[0:1:x]` with
/// `x` a square or not. Which choice gives parity `i` depends on whether
/// `-1` is a square, so the selection is made from the parity actually
/// required rather than by label.
pub fn residue_triangle(plane: &Plane, i: usize) -> Result<PointSet> {
    if i > 1 {
        return param(format!("residue triangle index {i} is not 0 or 1"));
    }
    if plane.q() < 5 {
        return param("residue triangles need q >= 5");
    }
    let f = plane.field();
    let (squares, non_squares) = residues(plane);
    // With all three sides on squares the parity is 1 iff -1 is a square.
    let minus_one_square = f.is_square(f.neg(1));
    let third_squares = (i == 1) == minus_one_square;
    let third = if third_squares { &squares } else { &non_squares };
    let mut s = plane.empty_points();
    for &x in &squares {
        s.insert(plane.index_of([x, 0, 1])?);
        s.insert(plane.index_of([1, x, 0])?);
    }
    for &x in third {
        s.insert(plane.index_of([0, 1, x])?);
    }
    Ok(s)
}

/// The `q` affine points of each of `k` lines `X = αZ`, `α` a non-square,
/// taking the `k` least non-squares.
fn vertical_points(plane: &Plane, k: usize) -> Result<PointSet> {
    let q = q_usize(plane);
    if k > (q - 1) / 2 {
        return param(format!("k={k} exceeds (q-1)/2={}", (q - 1) / 2));
    }
    let (_, non_squares) = residues(plane);
    let mut s = plane.empty_points();
    for &alpha in &non_squares[..k] {
        for y in plane.field().elements() {
            s.insert(plane.index_of([alpha, y, 1])?);
        }
    }
    Ok(s)
}

fn disjoint(parts: &[&PointSet]) -> Result<PointSet> {
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        if !acc.and(p).is_empty() {
            return Err(Error::Construction("component sets overlap".into()));
        }
        acc = acc.or(p);
    }
    Ok(acc)
}

/// `k` vertical lines without `O_y`: `kq` points whose odd lines are the
/// `k` lines themselves when `k` is even, and those plus all `q²` lines
/// missing `O_y` when `k` is odd.
pub fn vertical_bundle(plane: &Plane, k: usize) -> Result<ConstructionResult> {
    let q = q_usize(plane);
    let v = vertical_points(plane, k)?;
    let claimed = if k % 2 == 0 { k } else { q * q + k };
    ConstructionResult::measure(
        plane,
        ConstructionKind::Vertical,
        Params { k: Some(k), ..Params::default() },
        Witness::Points(v),
        claimed,
    )
}

/// Vertical lines, the residue triangle of matching parity and `j` conic
/// points: `3(q-1)/2 + kq + j` points with at most `3q + j(q+2-j)` odd lines.
pub fn residue_vertical_conic(plane: &Plane, k: usize, j: usize) -> Result<ConstructionResult> {
    let q = q_usize(plane);
    if j > q + 1 {
        return param(format!("j={j} exceeds q+1"));
    }
    let v = vertical_points(plane, k)?;
    let t = residue_triangle(plane, k % 2)?;
    let c = conic_prefix(plane, j, false)?;
    let s = disjoint(&[&v, &t, &c])?;
    ConstructionResult::measure(
        plane,
        ConstructionKind::ResidueVerticalConic,
        Params { k: Some(k), j: Some(j), ..Params::default() },
        Witness::Points(s),
        3 * q + j * (q + 2 - j),
    )
}

/// An even number `k` of vertical lines and `j` conic points: `kq + j`
/// points with exactly `k + j(q+2-j)` odd lines.
pub fn vertical_conic(plane: &Plane, k: usize, j: usize) -> Result<ConstructionResult> {
    let q = q_usize(plane);
    if k % 2 == 1 || j > q + 1 {
        return param(format!("need k even and j <= q+1, got k={k}, j={j}"));
    }
    let v = vertical_points(plane, k)?;
    let c = conic_prefix(plane, j, false)?;
    let s = disjoint(&[&v, &c])?;
    ConstructionResult::measure(
        plane,
        ConstructionKind::VerticalConic,
        Params { k: Some(k), j: Some(j), ..Params::default() },
        Witness::Points(s),
        k + j * (q + 2 - j),
    )
}

/// An even number `k` of vertical lines, `j` conic points other than
/// `O_x, O_z`, and the whole scaled conic: `q + 1 + kq + j` points with at
/// most `q + 1 + k + j(q+2-j)` odd lines.
pub fn vertical_two_conics(plane: &Plane, k: usize, j: usize) -> Result<ConstructionResult> {
    let q = q_usize(plane);
    if k % 2 == 1 || j + 1 > q {
        return param(format!("need k even and j <= q-1, got k={k}, j={j}"));
    }
    let v = vertical_points(plane, k)?;
    let c = conic_prefix(plane, j, true)?;
    let scaled = plane.conic(ConicKind::Scaled)?;
    let s = disjoint(&[&v, &c, &scaled])?;
    ConstructionResult::measure(
        plane,
        ConstructionKind::VerticalTwoConics,
        Params { k: Some(k), j: Some(j), ..Params::default() },
        Witness::Points(s),
        q + 1 + k + j * (q + 2 - j),
    )
}

fn sqrt_q(plane: &Plane) -> Result<usize> {
    crate::gf::exact_sqrt(plane.q())
        .map(|s| s as usize)
        .ok_or_else(|| Error::NotBaer(format!("q={} is not a square", plane.q())))
}

/// `R_B` plus the pencil of `point`, with their common lines removed.
fn secants_plus_pencil(plane: &Plane, b: &BaerSubplane, point: usize) -> LineSet {
    b.secants.xor(plane.point_lines(point))
}

/// `R_B` and the pencil of the least point off the subfield subplane `B`:
/// `2q + √q` lines whose odd points are `B ∪ {p}`.
pub fn baer_plus_point(plane: &Plane) -> Result<ConstructionResult> {
    let (q, s) = (q_usize(plane), sqrt_q(plane)?);
    let b = plane.subfield_baer()?;
    let p = b.points.complement().first().expect("B is not the whole plane");
    ConstructionResult::measure(
        plane,
        ConstructionKind::BaerPlusPoint,
        Params { point: Some(p), ..Params::default() },
        Witness::Lines(secants_plus_pencil(plane, &b, p)),
        q + s + 2,
    )
}

/// `R_B` and the pencil of the least point of the subfield subplane `B`:
/// `2q - √q` lines whose odd points are `B \ {p}`.
pub fn baer_minus_point(plane: &Plane) -> Result<ConstructionResult> {
    let (q, s) = (q_usize(plane), sqrt_q(plane)?);
    let b = plane.subfield_baer()?;
    let p = b.points.first().expect("B is nonempty");
    ConstructionResult::measure(
        plane,
        ConstructionKind::BaerMinusPoint,
        Params { point: Some(p), ..Params::default() },
        Witness::Lines(secants_plus_pencil(plane, &b, p)),
        q + s,
    )
}

/// `R_{B1} Δ R_{B2}` for the first two subplanes of the Singer partition;
/// the odd points are `B1 ∪ B2`.
pub fn two_baer(plane: &Plane) -> Result<ConstructionResult> {
    let (q, s) = (q_usize(plane), sqrt_q(plane)?);
    let parts = plane.singer_baer_partition()?;
    let [b1, b2] = [&parts[0], &parts[1]];
    ConstructionResult::measure(
        plane,
        ConstructionKind::TwoBaer,
        Params::default(),
        Witness::Lines(b1.secants.xor(&b2.secants)),
        2 * q + 2 * s + 2,
    )
}

/// Two points: their `2q` odd lines have exactly the two points as odd set.
pub fn two_points(plane: &Plane) -> Result<ConstructionResult> {
    let s = PointSet::from_indices(plane.n(), [0, 1]);
    ConstructionResult::measure(plane, ConstructionKind::TwoPoints, Params::default(), Witness::OddSet(s), 2)
}

/// A line with one point replaced by a point off it: the `2q - 1` even
/// lines of this `(q+1)`-set have it as odd set.
pub fn line_swap(plane: &Plane) -> Result<ConstructionResult> {
    let line = plane.line_points(0);
    let mut s = line.clone();
    s.remove(line.first().expect("lines are nonempty"));
    s.insert(line.complement().first().expect("points off a line exist"));
    ConstructionResult::measure(
        plane,
        ConstructionKind::LineSwap,
        Params::default(),
        Witness::Lines(even_lines(plane, &s)),
        q_usize(plane) + 1,
    )
}

/// A line with two points removed: `2q + 1` even lines, `q - 1` odd points.
pub fn line_minus_two(plane: &Plane) -> Result<ConstructionResult> {
    let mut s = plane.line_points(0).clone();
    let pts = s.to_vec();
    s.remove(pts[0]);
    s.remove(pts[1]);
    ConstructionResult::measure(
        plane,
        ConstructionKind::LineMinusTwo,
        Params::default(),
        Witness::Lines(even_lines(plane, &s)),
        q_usize(plane) - 1,
    )
}

/// `(s, t)` with `point = [s²:st:t²]` on `XZ = Y²`.
fn conic_parameters(plane: &Plane, point: usize) -> Result<(Elem, Elem)> {
    let f = plane.field();
    let [x, y, z] = plane.coords(point);
    if f.mul(x, z) != f.mul(y, y) {
        return Err(Error::NotConic(format!("point {point} is not on XZ = Y²")));
    }
    // Normalized conic points are [1:t:t²] or [0:0:1].
    Ok(if x == 0 { (0, 1) } else { (1, y) })
}

/// Where the secant through two conic points meets the exterior line,
/// from the closed coordinate formula `[d(st'+s't) : dtt'+ss' : st'+s't]`.
pub fn secant_image(plane: &Plane, p1: usize, p2: usize) -> Result<usize> {
    if p1 == p2 {
        return param("secant_image needs two distinct points");
    }
    let f = plane.field();
    let d = f.least_nonresidue();
    let (s1, t1) = conic_parameters(plane, p1)?;
    let (s2, t2) = conic_parameters(plane, p2)?;
    let cross = f.add(f.mul(s1, t2), f.mul(s2, t1));
    let middle = f.add(f.mul(d, f.mul(t1, t2)), f.mul(s1, s2));
    plane.index_of([f.mul(d, cross), middle, cross])
}

/// The same point through the norm group: `ψ(φ(p1)·φ(p2))`.
pub fn secant_image_by_group(plane: &Plane, group: &NormGroup, p1: usize, p2: usize) -> Result<usize> {
    let c = group.mul(group.from_conic_point(plane.coords(p1))?, group.from_conic_point(plane.coords(p2))?);
    plane.index_of(group.line_point(c))
}

/// Dispatches a construction by its command-line name.
pub fn by_name(plane: &Plane, name: &str, k: usize, j: usize, r: usize) -> Result<ConstructionResult> {
    match name {
        "conic" => conic_subset(plane, r),
        "conicB" | "conicb" => conic_plus_b_point(plane),
        "q0" | "q1" => {
            let i = usize::from(name == "q1");
            let s = residue_triangle(plane, i)?;
            let kind = if i == 0 { ConstructionKind::Residue0 } else { ConstructionKind::Residue1 };
            // Only the 3q lines through a triangle vertex can be odd.
            let claimed = 3 * q_usize(plane);
            ConstructionResult::measure(plane, kind, Params::default(), Witness::Points(s), claimed)
        }
        "vertical" => vertical_bundle(plane, k),
        "l32" | "lemma32" => residue_vertical_conic(plane, k, j),
        "le" | "lemmaE" => vertical_conic(plane, k, j),
        "lo" | "lemmaO" => vertical_two_conics(plane, k, j),
        "baer7" | "baer_eq7" => baer_plus_point(plane),
        "baer8" | "baer_eq8" => baer_minus_point(plane),
        "baer9" | "baer_eq9" => two_baer(plane),
        "two_points" => two_points(plane),
        "line_swap" => line_swap(plane),
        "line_minus_two" => line_minus_two(plane),
        other => param(format!("unknown construction {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::{odd_lines, odd_points};

    fn plane(q: u32) -> Plane {
        Plane::of_order(q).unwrap()
    }

    #[test]
    fn conic_values() {
        assert_eq!(conic_subset(&plane(5), 3).unwrap().achieved, 12);
        let p13 = plane(13);
        assert_eq!(conic_subset(&p13, 7).unwrap().achieved, 56);
        assert_eq!(conic_subset(&p13, 14).unwrap().achieved, 14);
        assert!(conic_subset(&p13, 15).is_err());
    }

    #[test]
    fn conic_plus_b() {
        for (q, v) in [(5, 8), (7, 12), (9, 16)] {
            let c = conic_plus_b_point(&plane(q)).unwrap();
            assert_eq!((c.r, c.achieved), (q as usize + 2, v));
        }
    }

    #[test]
    fn residue_q5_literal() {
        let p = plane(5);
        let expected: Vec<usize> = [[1, 0, 1], [4, 0, 1], [1, 1, 0], [1, 4, 0], [0, 1, 2], [0, 1, 3]]
            .iter()
            .map(|&t| p.index_of(t).unwrap())
            .collect();
        let q0 = residue_triangle(&p, 0).unwrap();
        assert_eq!(q0, PointSet::from_indices(31, expected));
    }

    #[test]
    fn residue_parity() {
        for q in [5u32, 7, 9, 11, 13] {
            let p = plane(q);
            let vertices = [p.origin_x(), p.origin_y(), p.origin_z()];
            for i in 0..2 {
                let t = residue_triangle(&p, i).unwrap();
                assert_eq!(t.count(), 3 * (q as usize - 1) / 2);
                for l in 0..p.n() {
                    if vertices.iter().all(|&v| !p.incident(v, l)) {
                        assert_eq!(p.line_points(l).intersection_count(&t) % 2, i, "q={q} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn vertical_sets() {
        let v = vertical_bundle(&plane(9), 2).unwrap();
        assert_eq!((v.r, v.achieved), (18, 2));
        let v = vertical_bundle(&plane(7), 2).unwrap();
        assert_eq!((v.r, v.achieved), (14, 2));
        assert_eq!(vertical_bundle(&plane(7), 0).unwrap().achieved, 0);
        let odd = vertical_bundle(&plane(7), 1).unwrap();
        assert_eq!(odd.achieved, 50);
        assert!(vertical_bundle(&plane(7), 4).is_err());
    }

    #[test]
    fn vertical_conic_is_exact() {
        for q in [5u32, 7, 9, 11] {
            let p = plane(q);
            let q = q as usize;
            for k in (0..=(q - 1) / 2).step_by(2) {
                for j in 0..=q + 1 {
                    let c = vertical_conic(&p, k, j).unwrap();
                    assert_eq!(c.r, k * q + j);
                    assert_eq!(c.achieved, c.claimed);
                }
            }
        }
    }

    #[test]
    fn residue_and_scaled_families() {
        let p = plane(9);
        let a = residue_vertical_conic(&p, 0, 0).unwrap();
        assert_eq!(a.r, 12);
        assert!(a.achieved <= 27);
        let b = vertical_two_conics(&p, 0, 0).unwrap();
        assert_eq!((b.r, b.achieved), (10, 10));
        for q in [5u32, 7, 11] {
            let p = plane(q);
            let q = q as usize;
            for k in 0..=(q - 1) / 2 {
                for j in [0, 1, q / 2, q + 1] {
                    let c = residue_vertical_conic(&p, k, j).unwrap();
                    assert_eq!(c.r, 3 * (q - 1) / 2 + k * q + j);
                }
            }
            for k in (0..=(q - 1) / 2).step_by(2) {
                for j in 0..q {
                    let c = vertical_two_conics(&p, k, j).unwrap();
                    assert_eq!(c.r, q + 1 + k * q + j);
                }
            }
        }
    }

    #[test]
    fn baer_constructions_q9() {
        let p = plane(9);
        let b = p.subfield_baer().unwrap();
        let seven = baer_plus_point(&p).unwrap();
        assert_eq!((seven.r, seven.achieved), (21, 14));
        let mut expected = b.points.clone();
        expected.insert(seven.params.point.unwrap());
        assert_eq!(odd_points(&p, &seven.witness.to_lines(&p)), expected);

        let eight = baer_minus_point(&p).unwrap();
        assert_eq!((eight.r, eight.achieved), (15, 12));
        let mut expected = b.points.clone();
        expected.remove(eight.params.point.unwrap());
        assert_eq!(odd_points(&p, &eight.witness.to_lines(&p)), expected);

        let nine = two_baer(&p).unwrap();
        assert_eq!((nine.r, nine.achieved, nine.claimed), (26, 26, 26));
        assert!(baer_plus_point(&plane(7)).is_err());
    }

    #[test]
    fn secant_formula_matches_meet() {
        for q in [5u32, 7, 9] {
            let p = plane(q);
            let group = NormGroup::new(p.field().clone());
            let ext = p.exterior_line();
            let c = p.conic(ConicKind::Primary).unwrap().to_vec();
            for (i, &a) in c.iter().enumerate() {
                for &b in &c[i + 1..] {
                    let m = p.meet(p.line_through(a, b).unwrap(), ext).unwrap();
                    assert_eq!(secant_image(&p, a, b).unwrap(), m);
                    assert_eq!(secant_image_by_group(&p, &group, a, b).unwrap(), m);
                }
            }
            assert!(secant_image(&p, c[0], c[0]).is_err());
        }
    }

    #[test]
    fn near_2q_witnesses() {
        for q in [3u32, 5, 7, 9] {
            let p = plane(q);
            let q = q as usize;
            let a = two_points(&p).unwrap();
            assert_eq!((a.r, a.achieved), (2 * q, 2));
            let b = line_swap(&p).unwrap();
            assert_eq!((b.r, b.achieved), (2 * q - 1, q + 1));
            let c = line_minus_two(&p).unwrap();
            assert_eq!((c.r, c.achieved), (2 * q + 1, q - 1));
        }
    }

    #[test]
    fn measured_not_formula() {
        let p = plane(7);
        let r = conic_subset(&p, 4).unwrap();
        let Witness::Points(s) = &r.witness else { panic!() };
        assert_eq!(odd_lines(&p, s).count(), r.achieved);
    }
}

//! Point sets on a conic and an exterior line whose line traces form a
//! prescribed simple decomposition.

use serde::Serialize;

use super::{secant_image, ConstructionKind, ConstructionResult, Params};
use crate::bits::PointSet;
use crate::decomp::{build_with_clique, feasible_clique_orders, CliqueDecomposition, SimpleDecomposition};
use crate::error::{param, Error, Result};
use crate::gf::NormGroup;
use crate::parity::odd_lines;
use crate::plane::Plane;
use crate::witness::Witness;

/// Largest number of times `realize_f_upper` moves to the next admissible `r`.
pub const REALIZE_RETRIES: usize = 10;

/// Whether the clique order `r1` admits every triangle count for `r` points.
fn clique_order_admissible(q: usize, r: usize, r1: usize) -> bool {
    let need = (2 * r).saturating_sub(3);
    r <= q + 1 && 3 * r1 >= need && r1 + q + 1 >= need
}

/// `s` conic points with `φ(p_i) = α^i`, `i = 1..=s`.
fn progression(plane: &Plane, group: &NormGroup, s: usize) -> Result<Vec<usize>> {
    (1..=s).map(|i| plane.index_of(group.conic_point(group.power(i as u64)))).collect()
}

/// `t` distinct indices into `weights` whose weights sum to `k`, preferring
/// earlier indices.
fn choose_exact(weights: &[usize], t: usize, k: usize) -> Option<Vec<usize>> {
    let n = weights.len();
    // reach[i][c][x]: some c of weights[i..] sum to x.
    let mut reach = vec![vec![vec![false; k + 1]; t + 1]; n + 1];
    reach[n][0][0] = true;
    for i in (0..n).rev() {
        for c in 0..=t {
            for x in 0..=k {
                let skip = reach[i + 1][c][x];
                let take = c > 0 && x >= weights[i] && reach[i + 1][c - 1][x - weights[i]];
                reach[i][c][x] = skip || take;
            }
        }
    }
    if !reach[0][t][k] {
        return None;
    }
    let (mut c, mut x, mut out) = (t, k, Vec::with_capacity(t));
    for i in 0..n {
        if c > 0 && x >= weights[i] && reach[i + 1][c - 1][x - weights[i]] {
            out.push(i);
            c -= 1;
            x -= weights[i];
        }
    }
    Some(out)
}

/// A point set whose induced decomposition has the same clique sizes as `d`.
///
/// The `r - r1` small vertices go to conic points in geometric progression
/// under the norm group and the clique to `r1` points of the exterior line,
/// chosen so that exactly as many secants are hit as `d` has triangles.
pub fn realize_decomposition(plane: &Plane, d: &SimpleDecomposition) -> Result<PointSet> {
    d.verify()?;
    let q = plane.q() as usize;
    let (r, r1) = (d.r, d.big.len());
    if !d.triangles.is_empty() && r1 == 0 {
        return param("triangles without a distinguished clique cannot be placed on the exterior line");
    }
    let mut in_big = vec![false; r];
    d.big.iter().for_each(|&v| in_big[v] = true);
    if d.triangles.iter().any(|t| t.iter().filter(|&&v| in_big[v]).count() != 1) {
        return param("every triangle must have exactly one vertex in the distinguished clique");
    }
    if !clique_order_admissible(q, r, r1) {
        return param(format!("r={r}, r1={r1} violate r <= q+1, 3r1 >= 2r-3, r1 >= 2r-3-(q+1)"));
    }
    let (s, k) = (r - r1, d.triangles.len());
    let group = NormGroup::new(plane.field().clone());
    let conic_pts = progression(plane, &group, s)?;
    let line = plane.points_on(plane.exterior_line());
    let mut weight = vec![0usize; line.len()];
    for (i, &a) in conic_pts.iter().enumerate() {
        for &b in &conic_pts[i + 1..] {
            let x = secant_image(plane, a, b)?;
            let slot = line.iter().position(|&p| p as usize == x).expect("image lies on the line");
            weight[slot] += 1;
        }
    }
    let picks = choose_exact(&weight, r1, k)
        .ok_or_else(|| Error::Construction(format!("no {r1} points of the exterior line meet exactly {k} secants")))?;
    let mut out = PointSet::from_indices(plane.n(), conic_pts);
    picks.iter().for_each(|&i| out.insert(line[i] as usize));
    let induced = CliqueDecomposition::induced(plane, &out);
    if out.count() != r || induced.size_profile() != d.to_cliques().size_profile() {
        return Err(Error::Construction("realized set induces a different decomposition".into()));
    }
    Ok(out)
}

/// How a target was reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizeOutcome {
    pub result: ConstructionResult,
    /// The distinguished clique order used.
    pub clique_order: usize,
    /// Sizes tried before the one that succeeded.
    pub rejected: Vec<usize>,
}

/// Least `r > w/q + 2w^{3/2}/q^{5/2}` with `r ≡ qw (mod 4)`.
fn starting_size(q: usize, w: usize) -> usize {
    let (qf, wf) = (q as f64, w as f64);
    let bound = wf / qf + 2.0 * wf.powf(1.5) / qf.powf(2.5);
    let mut r = bound.floor() as usize + 1;
    while r % 4 != (q * w) % 4 {
        r += 1;
    }
    r
}

/// An even point set `S` with exactly `w` odd lines and `|S|` close to `w/q`.
///
/// So `f(w) <= |S|`: the odd lines of `S` have odd points exactly `S`.
pub fn realize_f_upper(plane: &Plane, w: usize) -> Result<RealizeOutcome> {
    let q = plane.q() as usize;
    if w % 2 == 1 || w == 0 {
        return param(format!("w={w} must be positive and even"));
    }
    let mut r = starting_size(q, w);
    let mut rejected = Vec::new();
    for _ in 0..=REALIZE_RETRIES {
        if let Some((s, r1)) = realize_at(plane, w, r) {
            let witness = Witness::OddSet(s);
            let params = Params { r: Some(r), w: Some(w), ..Params::default() };
            let result = ConstructionResult::measure(plane, ConstructionKind::Realize, params, witness, r)?;
            if result.r != w {
                return Err(Error::Construction(format!("realized {} odd lines, wanted {w}", result.r)));
            }
            return Ok(RealizeOutcome { result, clique_order: r1, rejected });
        }
        rejected.push(r);
        r += 4;
    }
    Err(Error::Construction(format!("w={w}: no realizable size among {rejected:?}")))
}

fn realize_at(plane: &Plane, w: usize, r: usize) -> Option<(PointSet, usize)> {
    let q = plane.q() as usize;
    let four_t = (r * q).checked_sub(w)?;
    let m = r / 2 + 2 * (four_t / 4);
    for r1 in feasible_clique_orders(r, m) {
        if !clique_order_admissible(q, r, r1) {
            continue;
        }
        let Ok(d) = build_with_clique(r, r1, m) else { continue };
        if let Ok(s) = realize_decomposition(plane, &d) {
            if odd_lines(plane, &s).count() == w {
                return Some((s, r1));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::build_simple;

    #[test]
    fn choose_exact_prefers_early() {
        assert_eq!(choose_exact(&[1, 2, 0, 3], 2, 3), Some(vec![0, 1]));
        assert_eq!(choose_exact(&[1, 1], 2, 3), None);
        assert_eq!(choose_exact(&[5, 0, 0], 2, 0), Some(vec![1, 2]));
    }

    #[test]
    fn progression_secants_hit_2s_minus_3_points() {
        let p = Plane::of_order(13).unwrap();
        let g = NormGroup::new(p.field().clone());
        for s in 2..=8 {
            let pts = progression(&p, &g, s).unwrap();
            let mut images = std::collections::BTreeMap::new();
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    *images.entry(secant_image(&p, a, b).unwrap()).or_insert(0usize) += 1;
                }
            }
            assert_eq!(images.len(), 2 * s - 3);
            let singles = images.values().filter(|&&m| m == 1).count();
            assert_eq!(
                singles,
                if s == 2 {
                    1
                } else if s == 3 {
                    3
                } else {
                    4
                }
            );
        }
    }

    #[test]
    fn realizes_q13_r8() {
        let p = Plane::of_order(13).unwrap();
        for r1 in 5..=8 {
            let (lo, hi) = crate::decomp::clique_window(8, r1);
            for m in (lo..=hi).step_by(2) {
                let d = build_with_clique(8, r1, m).unwrap();
                let s = realize_decomposition(&p, &d).unwrap();
                assert_eq!(CliqueDecomposition::induced(&p, &s).m_value(), m);
            }
        }
    }

    #[test]
    fn realize_rejects_bad_input() {
        let p = Plane::of_order(5).unwrap();
        let d = build_simple(8, 14).unwrap();
        assert!(realize_decomposition(&p, &d).is_err());
        assert!(realize_f_upper(&p, 7).is_err());
        // Too few lines for a large clique on so few points.
        assert!(realize_f_upper(&Plane::of_order(13).unwrap(), 40).is_err());
    }

    #[test]
    fn realize_pipeline_small() {
        let p = Plane::of_order(13).unwrap();
        for w in [84usize, 96, 100] {
            let out = realize_f_upper(&p, w).unwrap();
            assert_eq!(out.result.r, w);
            assert_eq!(out.result.achieved % 2, 0);
        }
    }
}

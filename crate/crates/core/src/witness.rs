//! Certificates for upper bounds `f(r) <= value`.

use serde::Serialize;

use crate::bits::{LineSet, PointSet};
use crate::error::{Error, Result};
use crate::parity::{odd_lines, odd_points};
use crate::plane::Plane;

/// A set whose parity structure proves an upper bound on `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "set", rename_all = "snake_case")]
pub enum Witness {
    /// `r` lines with `value` odd points.
    Lines(LineSet),
    /// `r` points with `value` odd lines (the dual reading).
    Points(PointSet),
    /// An even point set `S`: its odd lines `R` have exactly `S` as odd
    /// points, so `f(|R|) <= |S|`.
    OddSet(PointSet),
}

/// What a witness proves: `f(r) <= value`, and hence `f(N - r) <= value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub r: usize,
    pub value: usize,
}

impl Witness {
    /// Recomputes the bound from the raw set.
    pub fn evaluate(&self, plane: &Plane) -> Result<Evaluation> {
        match self {
            Witness::Lines(r) => Ok(Evaluation { r: r.count(), value: odd_points(plane, r).count() }),
            Witness::Points(s) => Ok(Evaluation { r: s.count(), value: odd_lines(plane, s).count() }),
            Witness::OddSet(s) => {
                if s.count() % 2 == 1 {
                    return Err(Error::Witness(format!("odd set of odd size {}", s.count())));
                }
                Ok(Evaluation { r: odd_lines(plane, s).count(), value: s.count() })
            }
        }
    }

    /// A line set `R` with `|R| = r` and `|P^o(R)| = value` for the
    /// evaluation of this witness.
    pub fn to_lines(&self, plane: &Plane) -> LineSet {
        match self {
            Witness::Lines(r) => r.clone(),
            Witness::Points(s) => s.retag(),
            Witness::OddSet(s) => odd_lines(plane, s),
        }
    }

    /// Checks the witness proves exactly `f(r) <= value` or `f(N-r) <= value`.
    pub fn verify(&self, plane: &Plane, r: usize, value: usize) -> Result<()> {
        let e = self.evaluate(plane)?;
        let n = plane.n();
        if e.value != value || (e.r != r && e.r + r != n) {
            return Err(Error::Witness(format!("witness gives f({}) <= {}, claimed f({r}) <= {value}", e.r, e.value)));
        }
        Ok(())
    }

    pub fn hex(&self) -> String {
        match self {
            Witness::Lines(s) => s.to_hex(),
            Witness::Points(s) | Witness::OddSet(s) => s.to_hex(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Witness::Lines(_) => "lines",
            Witness::Points(_) => "points",
            Witness::OddSet(_) => "odd_set",
        }
    }

    /// Parses the `kind` / hex pair produced by [`kind_name`](Self::kind_name) and [`hex`](Self::hex).
    pub fn parse(plane: &Plane, kind: &str, hex: &str) -> Result<Self> {
        let n = plane.n();
        match kind {
            "lines" => Ok(Witness::Lines(LineSet::from_hex(n, hex)?)),
            "points" => Ok(Witness::Points(PointSet::from_hex(n, hex)?)),
            "odd_set" | "oddset" => Ok(Witness::OddSet(PointSet::from_hex(n, hex)?)),
            other => Err(Error::Parse(format!("unknown witness kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::ConicKind;

    #[test]
    fn three_forms_agree() {
        let p = Plane::of_order(5).unwrap();
        let c = p.conic(ConicKind::Primary).unwrap().to_vec();
        let s = PointSet::from_indices(p.n(), c[..3].iter().copied());
        let w = Witness::Points(s.clone());
        assert_eq!(w.evaluate(&p).unwrap(), Evaluation { r: 3, value: 12 });
        let lines = w.to_lines(&p);
        assert_eq!(Witness::Lines(lines.clone()).evaluate(&p).unwrap(), Evaluation { r: 3, value: 12 });
        let odd = Witness::OddSet(odd_points(&p, &lines));
        assert_eq!(odd.evaluate(&p).unwrap(), Evaluation { r: 28, value: 12 });
        assert!(odd.verify(&p, 3, 12).is_ok());
        assert!(odd.verify(&p, 4, 12).is_err());
        assert!(Witness::OddSet(s).evaluate(&p).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let p = Plane::of_order(3).unwrap();
        let w = Witness::Lines(LineSet::from_indices(13, [0, 3]));
        assert_eq!(Witness::parse(&p, w.kind_name(), &w.hex()).unwrap(), w);
    }
}

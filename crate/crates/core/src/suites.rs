//! Randomized and exhaustive property suites, one per identity or bound.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{LineSet, PointSet};
use crate::bounds;
use crate::constructions as cons;
use crate::decomp;
use crate::error::{Error, Result};
use crate::gf::exact_sqrt;
use crate::parity::{incidence_rank, odd_lines, odd_points};
use crate::plane::{ConicKind, Plane};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma1,
    Lemma3,
    Theorem3,
    Theorem4,
    Lemma6,
    Lemma9,
    QParity,
    Baer,
    Decomp,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Lemma1,
        Suite::Lemma3,
        Suite::Theorem3,
        Suite::Theorem4,
        Suite::Lemma6,
        Suite::Lemma9,
        Suite::QParity,
        Suite::Baer,
        Suite::Decomp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma3 => "lemma3",
            Suite::Theorem3 => "theorem3",
            Suite::Theorem4 => "theorem4",
            Suite::Lemma6 => "lemma6",
            Suite::Lemma9 => "lemma9",
            Suite::QParity => "q-parity",
            Suite::Baer => "baer",
            Suite::Decomp => "decomp",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random cases per randomized property.
    pub cases: u64,
    /// Largest `r` for the decomposition window sweep.
    pub decomp_max_r: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, cases: 10_000, decomp_max_r: 60 }
    }
}

/// Outcome of one property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub suite: &'static str,
    pub property: &'static str,
    pub q: u32,
    pub cases: u64,
    pub failures: u64,
    /// First failing input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// Why the property does not apply to this `q`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Recorder {
    suite: &'static str,
    q: u32,
    reports: Vec<PropertyReport>,
}

impl Recorder {
    fn skip(&mut self, property: &'static str, why: impl Into<String>) {
        self.reports.push(PropertyReport {
            suite: self.suite,
            property,
            q: self.q,
            cases: 0,
            failures: 0,
            counterexample: None,
            skipped: Some(why.into()),
        });
    }

    /// Runs `check` on `cases` inputs; it returns a description of the input on failure.
    fn property(
        &mut self,
        property: &'static str,
        cases: u64,
        mut check: impl FnMut(u64) -> Result<Option<String>>,
    ) -> Result<()> {
        let mut failures = 0;
        let mut counterexample = None;
        for i in 0..cases {
            if let Some(bad) = check(i)? {
                failures += 1;
                counterexample.get_or_insert(bad);
            }
        }
        self.reports.push(PropertyReport {
            suite: self.suite,
            property,
            q: self.q,
            cases,
            failures,
            counterexample,
            skipped: None,
        });
        Ok(())
    }
}

fn random_lines(plane: &Plane, rng: &mut ChaCha8Rng) -> LineSet {
    let n = plane.n();
    let r = rng.gen_range(0..=n);
    LineSet::from_indices(n, sample(rng, n, r))
}

fn random_points(plane: &Plane, rng: &mut ChaCha8Rng, even: bool) -> PointSet {
    let n = plane.n();
    let mut s = rng.gen_range(0..=n);
    if even && s % 2 == 1 {
        s -= 1;
    }
    PointSet::from_indices(n, sample(rng, n, s))
}

fn fail_if(bad: bool, what: impl FnOnce() -> String) -> Option<String> {
    bad.then(what)
}

/// Runs `suite` on `plane`; `All` runs every suite.
pub fn run_suite(suite: Suite, plane: &Plane, cfg: &SuiteConfig) -> Result<Vec<PropertyReport>> {
    if suite == Suite::All {
        let mut out = Vec::new();
        for s in Suite::EACH {
            out.extend(run_suite(s, plane, cfg)?);
        }
        return Ok(out);
    }
    let mut rec = Recorder { suite: suite.name(), q: plane.q(), reports: Vec::new() };
    let mut rng = stream(cfg.seed, suite.name());
    let q = plane.q() as usize;
    let n = plane.n();
    match suite {
        Suite::Lemma1 => {
            rec.property("even-set-roundtrip", cfg.cases, |_| {
                let s = random_points(plane, &mut rng, true);
                Ok(fail_if(odd_points(plane, &odd_lines(plane, &s)) != s, || s.to_hex()))
            })?;
            rec.property("line-set-roundtrip", cfg.cases, |_| {
                let r = random_lines(plane, &mut rng);
                let back = odd_lines(plane, &odd_points(plane, &r));
                Ok(fail_if(back != r && back != r.complement(), || r.to_hex()))
            })?;
            rec.property("odd-sets-even", cfg.cases, |_| {
                let r = random_lines(plane, &mut rng);
                let s = random_points(plane, &mut rng, false);
                let bad = odd_points(plane, &r).count() % 2 == 1 || odd_lines(plane, &s).count() % 2 == 1;
                Ok(fail_if(bad, || format!("lines {} points {}", r.to_hex(), s.to_hex())))
            })?;
            rec.property("incidence-rank", 1, |_| {
                let rank = incidence_rank(plane);
                Ok(fail_if(rank != n - 1, || format!("rank {rank}")))
            })?;
        }
        Suite::Lemma3 => {
            rec.property("lower-bound-and-residue", cfg.cases, |_| {
                let r = random_lines(plane, &mut rng);
                let (size, odd) = (r.count(), odd_points(plane, &r).count());
                let bad =
                    odd < bounds::cong_floor(plane.q(), size) || odd % 4 != bounds::residue_class(plane.q(), size);
                Ok(fail_if(bad, || r.to_hex()))
            })?;
        }
        Suite::Theorem3 => {
            rec.property("conic-subsets", q as u64 + 2, |r| {
                let r = r as usize;
                let c = cons::conic_subset(plane, r)?;
                let want = bounds::exact_small(plane.q(), r)?;
                Ok(fail_if(c.achieved != want || c.r != r, || format!("r={r}: {} odd points", c.achieved)))
            })?;
            let table = bounds::assemble(plane)?;
            rec.property("table-exact", q as u64 + 2, |r| {
                let rec = &table[r as usize];
                let want = bounds::exact_small(plane.q(), r as usize)?;
                Ok(fail_if(!rec.exact || rec.hi != want, || format!("r={r}: [{}, {}]", rec.lo, rec.hi)))
            })?;
        }
        Suite::Theorem4 => {
            let table = bounds::assemble(plane)?;
            rec.property("table-lipschitz", n.saturating_sub(3) as u64, |i| {
                let r = i as usize + 1;
                let (a, b) = (&table[r], &table[r + 1]);
                let bad = a.lo > b.hi + (q - 1) || b.lo > a.hi + (q - 1);
                Ok(fail_if(bad, || format!("r={r}: [{}, {}] vs [{}, {}]", a.lo, a.hi, b.lo, b.hi)))
            })?;
            rec.property("best-toggle-step", cfg.cases, |_| {
                let r = random_lines(plane, &mut rng);
                let odd = odd_points(plane, &r);
                let outside = r.complement();
                let reach = odd.iter().any(|p| plane.point_lines(p).intersection_count(&outside) > 0);
                if !reach {
                    return Ok(None);
                }
                let best = outside.iter().map(|l| odd.xor(plane.line_points(l)).count()).min().expect("a line outside");
                Ok(fail_if(best > odd.count() + q - 1, || r.to_hex()))
            })?;
        }
        Suite::Lemma6 => {
            rec.property("clique-sum-identity", cfg.cases, |_| {
                let s = random_points(plane, &mut rng, true);
                let check = decomp::cv_identity(plane, &s)?;
                Ok(fail_if(!check.holds, || s.to_hex()))
            })?;
        }
        Suite::Lemma9 => {
            let conic = plane.conic(ConicKind::Primary)?.to_vec();
            rec.property("secant-image-formula", (conic.len() * (conic.len() - 1) / 2) as u64, |i| {
                let (a, b) = unrank_pair(i as usize);
                let (p1, p2) = (conic[a], conic[b]);
                let formula = cons::secant_image(plane, p1, p2)?;
                let geometric = plane.meet(plane.line_through(p1, p2)?, plane.exterior_line())?;
                Ok(fail_if(formula != geometric, || format!("points {p1}, {p2}")))
            })?;
            let shapes: Vec<(usize, usize)> = (4..=q + 1)
                .flat_map(|r| (r.div_ceil(2)..=r).map(move |r1| (r, r1)))
                .filter(|&(r, r1)| 3 * r1 + 3 >= 2 * r && r1 + q + 4 >= 2 * r)
                .collect();
            if shapes.is_empty() {
                rec.skip("realize-decomposition", format!("no admissible sizes for q={q}"));
            } else {
                rec.property("realize-decomposition", cfg.cases.min(1_000), |_| {
                    let (r, r1) = shapes[rng.gen_range(0..shapes.len())];
                    let (lo, hi) = decomp::clique_window(r, r1);
                    let m = lo + 2 * rng.gen_range(0..=(hi - lo) / 2);
                    let d = decomp::build_with_clique(r, r1, m)?;
                    let s = cons::realize_decomposition(plane, &d)?;
                    let induced = decomp::CliqueDecomposition::induced(plane, &s);
                    Ok(fail_if(induced.m_value() != m, || format!("r={r} r1={r1} m={m}")))
                })?;
            }
        }
        Suite::QParity => {
            if q < 5 {
                rec.skip("residue-triangle-parity", "needs q >= 5");
            } else {
                let vertices = [plane.origin_x(), plane.origin_y(), plane.origin_z()];
                for i in 0..2 {
                    let set = cons::residue_triangle(plane, i)?;
                    rec.property(if i == 0 { "q0-parity" } else { "q1-parity" }, n as u64, |l| {
                        let l = l as usize;
                        if vertices.iter().any(|&v| plane.incident(v, l)) {
                            return Ok(None);
                        }
                        let k = plane.line_points(l).intersection_count(&set);
                        Ok(fail_if(k % 2 != i, || format!("line {l} meets it in {k}")))
                    })?;
                }
            }
        }
        Suite::Baer => match exact_sqrt(plane.q()).filter(|&s| s > 1) {
            None => rec.skip("baer", format!("q={q} is not a square")),
            Some(s) => {
                let s = s as usize;
                rec.property("subfield-subplane", 1, |_| Ok(plane.subfield_baer().err().map(|e| e.to_string())))?;
                let parts = plane.singer_baer_partition()?;
                rec.property("singer-partition", 1, |_| {
                    let union = parts.iter().fold(plane.empty_points(), |acc, b| acc.or(&b.points));
                    let bad = parts.len() != q - s + 1 || union.count() != n;
                    Ok(fail_if(bad, || format!("{} parts covering {}", parts.len(), union.count())))
                })?;
                let checks: [(&'static str, cons::ConstructionResult, usize, usize); 3] = [
                    ("baer-plus-point", cons::baer_plus_point(plane)?, 2 * q + s, q + s + 2),
                    ("baer-minus-point", cons::baer_minus_point(plane)?, 2 * q - s, q + s),
                    ("two-baer", cons::two_baer(plane)?, 2 * q + 2 * s + 2, 2 * q + 2 * s + 2),
                ];
                for (name, c, r, value) in checks {
                    rec.property(name, 1, |_| {
                        let bad = (c.r != r && c.r + r != n) || c.achieved != value;
                        Ok(fail_if(bad, || format!("f({}) <= {}", c.r, c.achieved)))
                    })?;
                }
            }
        },
        Suite::Decomp => {
            let max_r = cfg.decomp_max_r.max(4);
            rec.property("window-built", (max_r - 3) as u64, |i| {
                let r = i as usize + 4;
                let total = r * (r - 1) / 2;
                let start = decomp::guaranteed_window_start(r);
                for s in (start..=total).filter(|s| s % 2 == total % 2) {
                    match decomp::build_simple(r, s) {
                        Ok(d) if d.verify().is_ok() && d.m_value() == s => {}
                        _ => return Ok(Some(format!("r={r} s={s}"))),
                    }
                }
                Ok(None)
            })?;
            rec.property("oracle-agreement", decomp::BRUTE_MAX_R as u64 - 1, |i| {
                let r = i as usize + 2;
                let oracle = decomp::brute_min_m(r)?;
                let bad =
                    (0..=r * (r - 1) / 2).find(|&s| decomp::build_simple(r, s).is_ok() != oracle.simple.contains(&s));
                Ok(bad.map(|s| format!("r={r} s={s}")))
            })?;
            rec.property("fano-threshold", 1, |_| match decomp::simplify(&decomp::CliqueDecomposition::fano()) {
                Err(Error::Threshold { threshold, .. })
                    if threshold.parse::<f64>().is_ok_and(|t| (t - 7.0).abs() < 1e-9) =>
                {
                    Ok(None)
                }
                other => Ok(Some(format!("{other:?}"))),
            })?;
        }
        Suite::All => unreachable!("handled above"),
    }
    Ok(rec.reports)
}

/// The `i`-th pair `(a, b)`, `a < b`, in colexicographic order.
fn unrank_pair(i: usize) -> (usize, usize) {
    let mut b = 1;
    while b * (b + 1) / 2 <= i {
        b += 1;
    }
    (i - b * (b - 1) / 2, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_unrank() {
        let pairs: Vec<_> = (0..6).map(unrank_pair).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]);
    }

    #[test]
    fn all_suites_pass_small() {
        let cfg = SuiteConfig { cases: 200, decomp_max_r: 20, ..SuiteConfig::default() };
        for q in [3u32, 5, 9] {
            let p = Plane::of_order(q).unwrap();
            let reports = run_suite(Suite::All, &p, &cfg).unwrap();
            for r in &reports {
                assert!(r.passed(), "{r:?}");
            }
        }
        assert_eq!("q-parity".parse::<Suite>().unwrap(), Suite::QParity);
        assert!("lemma2".parse::<Suite>().is_err());
    }
}

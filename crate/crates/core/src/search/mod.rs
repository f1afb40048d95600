//! Exact and heuristic computation of `f(r)`.

pub mod gray;
pub mod group;
pub mod local;
pub mod sweep;

use std::time::{Duration, Instant};

use serde::Serialize;

pub use gray::{exhaustive_f, Exhaustive};
pub use group::{collineation_generators, projectivity_from_frames, Collineation};
pub use local::{random_witness, LocalConfig, LocalOutcome};
pub use sweep::{dual_sweep, SweepResult};

use crate::bits::{LineSet, PointSet};
use crate::bounds::{self, BoundRecord, Extra};
use crate::error::{Error, Result};
use crate::plane::Plane;
use crate::witness::Witness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Bounds and constructions only.
    Theory,
    Exhaustive,
    DualSweep,
    Random,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Theory => "theory",
            Method::Exhaustive => "exhaustive",
            Method::DualSweep => "dual-sweep",
            Method::Random => "random",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theory" => Ok(Method::Theory),
            "exhaustive" => Ok(Method::Exhaustive),
            "dual-sweep" | "sweep" => Ok(Method::DualSweep),
            "random" => Ok(Method::Random),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub q: u32,
    pub method: Method,
    /// Inclusive range of `r`; `None` for all.
    pub r_range: Option<(usize, usize)>,
    /// Largest point set the sweep enumerates.
    pub max_set_size: usize,
    pub seed: u64,
    /// Wall-clock budget for the whole run.
    pub budget: Option<Duration>,
    /// Local search moves per `r`.
    pub steps_per_r: u64,
    pub workers: usize,
}

impl SearchConfig {
    pub fn new(q: u32, method: Method) -> Self {
        SearchConfig {
            q,
            method,
            r_range: None,
            max_set_size: 12,
            seed: 0,
            budget: None,
            steps_per_r: LocalConfig::default().steps,
            workers: 1,
        }
    }
}

/// One row of a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FEntry {
    pub r: usize,
    pub lo: usize,
    pub hi: usize,
    pub exact: bool,
    /// The line set attaining `hi`.
    pub witness: Option<LineSet>,
    /// Sources of `lo` and `hi`.
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FTable {
    pub q: u32,
    pub entries: Vec<FEntry>,
    /// Sweep completeness when a sweep ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_done: Option<usize>,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub const CSV_HEADER: [&str; 6] = ["r", "lo", "hi", "exact", "witness-hex", "method"];

impl FTable {
    pub fn from_records(plane: &Plane, records: &[BoundRecord]) -> Self {
        let entries = records
            .iter()
            .map(|rec| {
                let method = if rec.provenance.len() > 1 && rec.provenance[0] != rec.provenance[1] {
                    rec.provenance.join("+")
                } else {
                    rec.provenance[0].clone()
                };
                FEntry {
                    r: rec.r,
                    lo: rec.lo,
                    hi: rec.hi,
                    exact: rec.exact,
                    witness: rec.witness.as_ref().map(|w| w.to_lines(plane)),
                    method,
                }
            })
            .collect();
        FTable { q: plane.q(), entries, sweep_done: None, elapsed: Duration::ZERO }
    }

    /// Rows in [`CSV_HEADER`] order.
    pub fn csv_rows(&self) -> Vec<[String; 6]> {
        self.entries
            .iter()
            .map(|e| {
                [
                    e.r.to_string(),
                    e.lo.to_string(),
                    e.hi.to_string(),
                    e.exact.to_string(),
                    e.witness.as_ref().map(LineSet::to_hex).unwrap_or_default(),
                    e.method.clone(),
                ]
            })
            .collect()
    }

    /// Rechecks every witness against its row.
    pub fn verify(&self, plane: &Plane) -> Result<()> {
        for e in &self.entries {
            if let Some(w) = &e.witness {
                verify_witness(plane, &Witness::Lines(w.clone()), e.r, e.hi)?;
            }
        }
        Ok(())
    }
}

/// Recomputes the odd set of `witness` and checks it proves `f(r) <= value`.
pub fn verify_witness(plane: &Plane, witness: &Witness, r: usize, value: usize) -> Result<()> {
    witness.verify(plane, r, value)
}

/// Lower bounds and witnesses from a sweep, for merging into the bounds.
pub fn sweep_extra(sweep: &SweepResult) -> Extra {
    let n = sweep.first.len() - 1;
    let mut extra = Extra::default();
    for r in 1..n {
        extra.lower.push((r, sweep.lower(r), "Search".into()));
    }
    for (s, set) in sweep.first.iter().flatten() {
        if *s > 0 {
            extra.witnesses.push((Witness::OddSet(set.clone()), "Search".into()));
        }
    }
    extra
}

/// Exact values and witnesses from the exhaustive search.
pub fn exhaustive_extra(ex: &Exhaustive) -> Extra {
    let mut extra = Extra::default();
    for (r, (&v, w)) in ex.values.iter().zip(&ex.witnesses).enumerate() {
        extra.lower.push((r, v, "Search".into()));
        extra.witnesses.push((Witness::Lines(w.clone()), "Search".into()));
    }
    extra
}

/// Seeds for the local search at `r`: the odd point sets of every table
/// witness whose value is `target`.
fn seeds_for(plane: &Plane, records: &[BoundRecord], target: usize) -> Vec<PointSet> {
    let mut seeds: Vec<PointSet> = records
        .iter()
        .filter(|rec| rec.hi == target)
        .filter_map(|rec| rec.witness.as_ref())
        .map(|w| crate::parity::odd_points(plane, &w.to_lines(plane)))
        .collect();
    seeds.sort_by_key(|s| s.to_hex());
    seeds.dedup();
    seeds
}

/// Lowers `hi` for each open `r` in range by local search, four at a time
/// (the residue class mod 4 is fixed), until the target fails or meets `lo`.
pub fn improve_uppers(
    plane: &Plane,
    records: &[BoundRecord],
    config: &SearchConfig,
    deadline: Option<Instant>,
) -> Result<Extra> {
    let n = plane.n();
    let (from, to) = config.r_range.unwrap_or((1, n / 2));
    let mut extra = Extra::default();
    for r in from.max(1)..=to.min(n - 1) {
        let rec = &records[r];
        let mut hi = rec.hi;
        let mut rng = crate::rng::stream(config.seed, &format!("random-witness/{r}"));
        while hi >= rec.lo + 4 {
            let wall = deadline.map(|d| d.saturating_duration_since(Instant::now()));
            if wall == Some(Duration::ZERO) {
                return Ok(extra);
            }
            let target = hi - 4;
            let cfg = LocalConfig { steps: config.steps_per_r, wall, ..LocalConfig::default() };
            let seeds = seeds_for(plane, records, target);
            let out = random_witness(plane, r, target, &seeds, cfg, &mut rng)?;
            if out.value >= hi {
                break;
            }
            hi = out.value;
            extra.witnesses.push((out.witness, "Search".into()));
        }
    }
    Ok(extra)
}

fn merge(a: Extra, b: Extra) -> Extra {
    let mut out = a;
    out.witnesses.extend(b.witnesses);
    out.lower.extend(b.lower);
    out
}

/// Runs `config.method` and merges its results with the closed-form bounds.
pub fn run(plane: &Plane, config: &SearchConfig) -> Result<FTable> {
    let started = Instant::now();
    let deadline = config.budget.map(|b| started + b);
    let mut sweep_done = None;
    let extra = match config.method {
        Method::Theory => Extra::default(),
        Method::Exhaustive => exhaustive_extra(&exhaustive_f(plane, config.workers)?),
        Method::DualSweep => {
            let sweep = dual_sweep(plane, config.max_set_size, config.budget, config.workers)?;
            sweep_done = Some(sweep.s_done);
            sweep_extra(&sweep)
        }
        Method::Random => {
            let base = bounds::assemble(plane)?;
            improve_uppers(plane, &base, config, deadline)?
        }
    };
    let extra = if config.method == Method::DualSweep {
        let base = bounds::assemble_with(plane, &extra)?;
        let more = improve_uppers(
            plane,
            &base,
            &SearchConfig { steps_per_r: config.steps_per_r.min(20_000), ..config.clone() },
            deadline,
        )?;
        merge(extra, more)
    } else {
        extra
    };
    let records = bounds::assemble_with(plane, &extra)?;
    let mut table = FTable::from_records(plane, &records);
    table.verify(plane)?;
    table.sweep_done = sweep_done;
    table.elapsed = started.elapsed();
    Ok(table)
}

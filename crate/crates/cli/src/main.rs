//! `symdiff`: bounds, constructions and searches for `f(r)` in PG(2,q).

mod manifest;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use symdiff::search::{self, FTable, Method, SearchConfig, CSV_HEADER};
use symdiff::suites::{self, Suite, SuiteConfig};
use symdiff::{bounds, constructions, decomp, FieldSpec, Plane};

use manifest::{Envelope, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "symdiff", version, about = "Minimal symmetric differences of lines in PG(2,q)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Order of the plane; an odd prime power.
    #[arg(long, global = true)]
    q: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Wall-clock limit, e.g. `90s` or `2h`.
    #[arg(long, global = true, value_parser = humantime::parse_duration)]
    budget: Option<Duration>,
    #[arg(long, global = true, alias = "emit", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of standard output; the manifest goes
    /// next to it with a `.manifest.json` suffix.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assemble the table of `f(r)` for one `q`.
    Table(TableArgs),
    /// Closed-form bounds, per `r` or for the whole range.
    Bounds {
        #[arg(long)]
        r: Option<usize>,
    },
    /// Build and measure one construction.
    Construct {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// Target number of odd lines, for `realize`.
        #[arg(long)]
        w: Option<usize>,
    },
    /// Simple clique decomposition of `K_r` with the given M.
    Decomp {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
    },
    /// Run one search method and emit its table.
    Search(TableArgs),
    /// Run a property suite; exits nonzero on any failure.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 10_000)]
        cases: u64,
        #[arg(long, default_value_t = 60)]
        decomp_max_r: usize,
    },
    /// Plane inspection.
    Plane {
        #[command(subcommand)]
        what: PlaneCommand,
    },
}

#[derive(Subcommand, Debug)]
enum PlaneCommand {
    /// Coordinates of every point and the points of every line.
    Dump,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value = "theory")]
    method: String,
    /// Largest point set a sweep enumerates.
    #[arg(long, default_value_t = 12)]
    s_max: usize,
    #[arg(long)]
    r_from: Option<usize>,
    #[arg(long)]
    r_to: Option<usize>,
    /// Local search moves per `r`.
    #[arg(long, default_value_t = 200_000)]
    steps: u64,
}

struct Session {
    global: Global,
    manifest: RunManifest,
}

impl Session {
    fn plane(&mut self) -> Result<Plane> {
        let q = self.global.q.context("--q is required for this command")?;
        self.manifest.field = Some(FieldSpec::from_order(q)?);
        Ok(Plane::of_order(q)?)
    }

    fn emit_json<T: Serialize>(&mut self, started: Instant, result: T) -> Result<()> {
        self.manifest.elapsed_ms = started.elapsed().as_millis();
        match &self.global.out {
            Some(path) => {
                self.manifest.outputs.push(path.display().to_string());
                fs::write(path, serde_json::to_string_pretty(&result)? + "\n")?;
                fs::write(manifest_path(path), serde_json::to_string_pretty(&self.manifest)? + "\n")?;
            }
            None => {
                let env = Envelope { manifest: self.manifest.clone(), result };
                let mut stdout = std::io::stdout().lock();
                serde_json::to_writer_pretty(&mut stdout, &env)?;
                writeln!(stdout)?;
            }
        }
        Ok(())
    }

    fn emit_table(&mut self, started: Instant, table: &FTable) -> Result<()> {
        if self.global.format == Format::Json {
            return self.emit_json(started, table);
        }
        let mut buf = Vec::new();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(CSV_HEADER)?;
            for row in table.csv_rows() {
                w.write_record(&row)?;
            }
            w.flush()?;
        }
        self.manifest.elapsed_ms = started.elapsed().as_millis();
        match &self.global.out {
            Some(path) => {
                self.manifest.outputs.push(path.display().to_string());
                fs::write(path, &buf)?;
                fs::write(manifest_path(path), serde_json::to_string_pretty(&self.manifest)? + "\n")?;
            }
            None => {
                std::io::stdout().write_all(&buf)?;
                eprintln!("{}", serde_json::to_string(&self.manifest)?);
            }
        }
        Ok(())
    }
}

fn manifest_path(path: &std::path::Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn search_config(ctx: &Session, plane: &Plane, args: &TableArgs) -> Result<SearchConfig> {
    let method: Method = args.method.parse()?;
    let mut cfg = SearchConfig::new(plane.q(), method);
    cfg.seed = ctx.global.seed;
    cfg.workers = ctx.global.workers.max(1);
    cfg.budget = ctx.global.budget;
    cfg.max_set_size = args.s_max;
    cfg.steps_per_r = args.steps;
    if args.r_from.is_some() || args.r_to.is_some() {
        cfg.r_range = Some((args.r_from.unwrap_or(1), args.r_to.unwrap_or(plane.n() / 2)));
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct BoundsRow {
    r: usize,
    cong_floor: usize,
    dual_floor: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_small: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_near_2q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<(usize, &'static str)>,
}

#[derive(Serialize)]
struct BoundsReport {
    rows: Vec<BoundsRow>,
    fq2_interval: (usize, usize),
    max_of_f: bounds::MaxOfF,
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum DecompReport {
    Built { decomposition: decomp::SimpleDecomposition, m: usize },
    Infeasible { reason: String, window_start: Option<usize>, simplify_threshold: f64, existence: decomp::Existence },
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    properties: Vec<suites::PropertyReport>,
}

/// Runs the command; `Ok(false)` means a verification failed.
fn run(cli: Cli) -> Result<bool> {
    let started = Instant::now();
    let g = cli.global.clone();
    let mut ctx = Session { manifest: RunManifest::new(None, g.seed, g.workers, g.budget), global: g };
    match cli.command {
        Command::Table(args) | Command::Search(args) => {
            let plane = ctx.plane()?;
            let cfg = search_config(&ctx, &plane, &args)?;
            let table = search::run(&plane, &cfg)?;
            ctx.emit_table(started, &table)?;
        }
        Command::Bounds { r } => {
            let plane = ctx.plane()?;
            let q = plane.q();
            let range: Vec<usize> = match r {
                Some(r) if r <= plane.n() => vec![r],
                Some(r) => bail!("r={r} exceeds N={}", plane.n()),
                None => (0..=plane.n()).collect(),
            };
            let rows = range
                .into_iter()
                .map(|r| BoundsRow {
                    r,
                    cong_floor: bounds::cong_floor(q, r),
                    dual_floor: bounds::dual_floor(q, r),
                    exact_small: bounds::exact_small(q, r).ok(),
                    exact_near_2q: bounds::exact_near_2q(q, r).ok(),
                    upper: bounds::upper_constructive(q, r),
                })
                .collect();
            let report =
                BoundsReport { rows, fq2_interval: bounds::fq2_interval(q), max_of_f: bounds::max_of_f(q, None) };
            ctx.emit_json(started, report)?;
        }
        Command::Construct { name, k, j, r, w } => {
            let plane = ctx.plane()?;
            if name == "realize" {
                let w = w.context("realize needs --w")?;
                let out = constructions::realize_f_upper(&plane, w)?;
                ctx.emit_json(started, out)?;
            } else {
                let result = constructions::by_name(&plane, &name, k, j, r)?;
                ctx.emit_json(started, result)?;
            }
        }
        Command::Decomp { r, m } => {
            let report = match decomp::build_simple(r, m) {
                Ok(d) => DecompReport::Built { m: d.m_value(), decomposition: d },
                Err(e) => DecompReport::Infeasible {
                    reason: e.to_string(),
                    window_start: (r >= 4).then(|| decomp::guaranteed_window_start(r)),
                    simplify_threshold: decomp::simplify_threshold(r),
                    existence: decomp::simple_exists(r, m),
                },
            };
            let built = matches!(report, DecompReport::Built { .. });
            ctx.emit_json(started, report)?;
            return Ok(built);
        }
        Command::Verify { suite, cases, decomp_max_r } => {
            let plane = ctx.plane()?;
            let suite: Suite = suite.parse()?;
            let cfg = SuiteConfig { seed: ctx.global.seed, cases, decomp_max_r };
            let properties = suites::run_suite(suite, &plane, &cfg)?;
            let passed = properties.iter().all(|p| p.passed());
            for p in &properties {
                let status = match (&p.skipped, p.passed()) {
                    (Some(_), _) => "skip",
                    (None, true) => "pass",
                    (None, false) => "FAIL",
                };
                eprintln!("{status} {}/{} q={} cases={}", p.suite, p.property, p.q, p.cases);
                if let Some(c) = &p.counterexample {
                    eprintln!("  counterexample: {c}");
                }
            }
            ctx.emit_json(started, VerifyReport { passed, properties })?;
            return Ok(passed);
        }
        Command::Plane { what: PlaneCommand::Dump } => {
            let plane = ctx.plane()?;
            #[derive(Serialize)]
            struct Dump {
                q: u32,
                n: usize,
                points: Vec<[u32; 3]>,
                lines: Vec<Vec<u32>>,
            }
            let dump = Dump {
                q: plane.q(),
                n: plane.n(),
                points: (0..plane.n()).map(|p| plane.coords(p)).collect(),
                lines: (0..plane.n()).map(|l| plane.points_on(l).to_vec()).collect(),
            };
            ctx.emit_json(started, dump)?;
        }
    }
    Ok(true)
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    let kind = e
        .downcast_ref::<std::io::Error>()
        .map(std::io::Error::kind)
        .or_else(|| e.downcast_ref::<serde_json::Error>().and_then(serde_json::Error::io_error_kind));
    kind == Some(std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // A closed downstream pipe is not a failure of the command.
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

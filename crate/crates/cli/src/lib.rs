//! Batch front end: one subcommand per library capability, JSON reports
//! carrying the command name and a SHA-256 of the input.

pub mod io;
pub mod trials;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordplanes::census::{plane_census_with, validate_with, CensusOptions};
use ordplanes::circles::{ordinary_circles_direct_with, ordinary_circles_via_lift};
use ordplanes::dual::{build_gamma_with, classify_edges, extract_double_diamond, find_segments};
use ordplanes::generators::{boroczky_planar, random_planar, random_set, ExtremalKind, ExtremalSpec};
use ordplanes::quadrics::{
    interpolation_space_of, pencil_degenerate_members, LineConfiguration, Pencil, QForm,
};
use ordplanes::scalar::{parse_rational, set_max_order, DEFAULT_MAX_ORDER};
use ordplanes::structure::{classify_extremal, recover_pencil, weak_structure_cover, RecoverOptions};
use ordplanes::{Error, ProjPoint, Scalar};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::io::{hash_bytes, load_planar, load_point_set, Input, PlanarFile};

#[derive(Parser, Debug)]
#[command(name = "ordplanes", version, about = "Exact ordinary-plane experiments in real projective 3-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for parallel passes; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Largest n accepted by `dual` and `recover --cover`.
    #[arg(long, global = true, default_value_t = 24, value_parser = positive)]
    pub max_n_dual: usize,
    /// Largest cyclotomic field order accepted in inputs and arithmetic.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_field_order: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    /// Only `census` supports it: one `i,tau_i` row per multiplicity.
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a point set file.
    Generate(GenerateArgs),
    /// Ordinary planes and the full plane multiplicity histogram.
    Census {
        input: PathBuf,
        /// Count even if three points are collinear or all are coplanar.
        #[arg(long)]
        bypass_validation: bool,
    },
    /// Build the dual arrangement, check the counting identities and look
    /// for a double diamond.
    Dual { input: PathBuf },
    /// Quadrics through the set and the singular members of their pencil.
    Quadrics { input: PathBuf },
    /// Recover the pencil of quadrics containing the set.
    Recover {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        outlier_budget: usize,
        #[arg(long, default_value_t = 13)]
        min_segment: usize,
        /// Cover the set by pencil varieties along one dual line instead.
        #[arg(long)]
        cover: bool,
    },
    /// Decide whether the set is projectively a prism or anti-prism,
    /// possibly minus a point.
    Classify { input: PathBuf },
    /// Count ordinary circles of a planar set directly and via the sphere.
    Lift { input: PathBuf },
    /// Randomized checks of the eight associated points and of Chasles.
    VerifyAppendix {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        chasles: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Prism,
    #[value(name = "antiprism")]
    AntiPrism,
    /// Regular polygon plus its bisecant directions, all in one plane.
    Boroczky,
    /// Integer points in space.
    Random,
    /// Rational points in the plane, for `lift`.
    Planar,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub m: Option<usize>,
    /// Apex parameters `a,b`, each a rational like `1/2`.
    #[arg(long, default_value = "0,0")]
    pub apex: String,
    /// Index to drop from the 2m points, polygon points first.
    #[arg(long)]
    pub remove: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Coordinate bound for random sets.
    #[arg(long, default_value_t = 8)]
    pub bound: i64,
}

/// Exit status plus what to print: the report (or generated file) and an
/// optional message for standard error.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub output: Option<String>,
    pub message: Option<String>,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            code: 2,
            output: None,
            message: Some(msg.into()),
        }
    }
}

enum Fail {
    Usage(String),
    Analysis(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidInput(_) | Error::OrderOverflow { .. } | Error::CapExceeded { .. } => {
                Fail::Usage(e.to_string())
            }
            e => Fail::Analysis(e),
        }
    }
}

type Handled = Result<(i32, Value), Fail>;

fn render(command: &str, input_hash: &str, payload: Value) -> String {
    let mut map = serde_json::Map::new();
    map.insert("command".into(), json!(command));
    map.insert("input_hash".into(), json!(input_hash));
    if let Value::Object(p) = payload {
        map.extend(p);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("report serializes");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Generate(_) => "generate",
        Command::Census { .. } => "census",
        Command::Dual { .. } => "dual",
        Command::Quadrics { .. } => "quadrics",
        Command::Recover { .. } => "recover",
        Command::Classify { .. } => "classify",
        Command::Lift { .. } => "lift",
        Command::VerifyAppendix { .. } => "verify-appendix",
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if let Err(e) = set_max_order(cli.max_field_order) {
        return Outcome::usage(e.to_string());
    }
    let name = command_name(&cli.command);
    if cli.format == Format::Csv && !matches!(cli.command, Command::Census { .. }) {
        return Outcome::usage(format!("{name} has no csv output"));
    }
    if let Command::Generate(g) = &cli.command {
        return match generate(g) {
            Ok(text) => Outcome {
                code: 0,
                output: Some(text),
                message: None,
            },
            Err(Fail::Usage(m)) => Outcome::usage(m),
            Err(Fail::Analysis(e)) => Outcome {
                code: 1,
                output: None,
                message: Some(e.to_string()),
            },
        };
    }
    let input = match load_input(cli) {
        Ok(i) => i,
        Err(m) => return Outcome::usage(m),
    };
    if let (Format::Csv, Command::Census { bypass_validation, .. }) = (cli.format, &cli.command) {
        return census_csv(cli, &input, *bypass_validation);
    }
    let res = match &cli.command {
        Command::Census {
            bypass_validation, ..
        } => census(cli, &input, *bypass_validation),
        Command::Dual { .. } => dual(cli, &input),
        Command::Quadrics { .. } => quadrics(&input),
        Command::Recover {
            outlier_budget,
            min_segment,
            cover,
            ..
        } => recover(cli, &input, *outlier_budget, *min_segment, *cover),
        Command::Classify { .. } => classify(&input),
        Command::Lift { .. } => lift(cli, &input),
        Command::VerifyAppendix { trials, seed, chasles } => verify_appendix(cli.jobs, *trials, *seed, *chasles),
        Command::Generate(_) => unreachable!(),
    };
    match res {
        Ok((code, payload)) => Outcome {
            code,
            output: Some(render(name, &input.hash, payload)),
            message: None,
        },
        Err(Fail::Usage(m)) => Outcome::usage(m),
        Err(Fail::Analysis(e)) => {
            let mut payload = json!({ "error": e.to_string() });
            if let Error::ValidationFailure(v) = &e {
                payload["validation"] = json!(v);
            }
            Outcome {
                code: 1,
                output: Some(render(name, &input.hash, payload)),
                message: Some(e.to_string()),
            }
        }
    }
}

fn load_input(cli: &Cli) -> Result<Input, String> {
    match &cli.command {
        Command::Census { input, .. }
        | Command::Dual { input }
        | Command::Quadrics { input }
        | Command::Recover { input, .. }
        | Command::Classify { input } => load_point_set(input, cli.max_field_order),
        Command::Lift { input } => load_planar(input),
        Command::VerifyAppendix { trials, seed, chasles } => {
            let canonical = format!("verify-appendix trials={trials} seed={seed} chasles={chasles}");
            Ok(Input {
                hash: hash_bytes(canonical.as_bytes()),
                points: None,
                planar: None,
            })
        }
        Command::Generate(_) => unreachable!(),
    }
}

fn parse_apex(s: &str) -> Result<(Scalar, Scalar), Fail> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(Fail::Usage(format!("--apex expects a,b, got {s:?}")));
    };
    Ok((
        Scalar::from_rational(parse_rational(a)?),
        Scalar::from_rational(parse_rational(b)?),
    ))
}

fn generate(g: &GenerateArgs) -> Result<String, Fail> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Fail::Usage(format!("--kind needs {flag}")));
    let seed = || g.seed.ok_or_else(|| Fail::Usage("random kinds need --seed".into()));
    let set = match g.kind {
        Kind::Prism | Kind::AntiPrism => {
            let kind = if g.kind == Kind::Prism {
                ExtremalKind::Prism
            } else {
                ExtremalKind::AntiPrism
            };
            let (a, b) = parse_apex(&g.apex)?;
            let mut spec = ExtremalSpec::new(kind, need(g.m, "--m")?).with_apex(a, b);
            if let Some(i) = g.remove {
                spec = spec.removing(i);
            }
            spec.build()?
        }
        Kind::Boroczky => boroczky_planar(need(g.m, "--m")?)?,
        Kind::Random => random_set(need(g.n, "--n")?, seed()?, g.bound)?,
        Kind::Planar => {
            let points = random_planar(need(g.n, "--n")?, seed()?, g.bound)?;
            return Ok(io::to_text(&PlanarFile { points }));
        }
    };
    Ok(io::to_text(&set))
}

fn census_options(cli: &Cli, bypass: bool) -> CensusOptions {
    CensusOptions {
        jobs: cli.jobs,
        bypass_validation: bypass,
    }
}

fn census(cli: &Cli, input: &Input, bypass: bool) -> Handled {
    let s = input.point_set();
    let validation = validate_with(s, cli.jobs);
    let report = plane_census_with(s, census_options(cli, bypass))?;
    Ok((
        0,
        json!({
            "ordinary": report.ordinary_count(),
            "census": report,
            "validation": validation,
        }),
    ))
}

fn census_csv(cli: &Cli, input: &Input, bypass: bool) -> Outcome {
    match plane_census_with(input.point_set(), census_options(cli, bypass)) {
        Ok(r) => {
            let mut out = String::from("i,tau\n");
            for (i, c) in &r.tau {
                out.push_str(&format!("{i},{c}\n"));
            }
            Outcome {
                code: 0,
                output: Some(out),
                message: None,
            }
        }
        Err(e @ Error::ValidationFailure(_)) => Outcome {
            code: 1,
            output: None,
            message: Some(e.to_string()),
        },
        Err(e) => Outcome::usage(e.to_string()),
    }
}

fn dual(cli: &Cli, input: &Input) -> Handled {
    let s = input.point_set();
    if s.len() > cli.max_n_dual {
        return Err(Fail::Usage(format!(
            "n = {} exceeds --max-n-dual {}",
            s.len(),
            cli.max_n_dual
        )));
    }
    let g = classify_edges(build_gamma_with(s, cli.jobs)?);
    let summary = g.summary();
    let mut segments: Vec<_> = g
        .carriers
        .iter()
        .flat_map(|c| find_segments(&g, c.pair.0, c.pair.1))
        .collect();
    segments.sort_by(|a, b| b.len().cmp(&a.len()).then(a.carrier.cmp(&b.carrier)));
    let longest = segments.first().map(|seg| json!({ "carrier": seg.carrier, "length": seg.len() }));
    let diamond = (0..g.edges.len())
        .filter(|&e| g.edges[e].class.is_some_and(|c| c.rather_good))
        .find_map(|e| extract_double_diamond(&g, s, e).ok())
        .map(|dd| {
            let idx = dd.points();
            let pts: Vec<&ProjPoint> = idx.iter().map(|&i| &s.points[i]).collect();
            json!({
                "edge": dd.edge,
                "points": idx,
                "labels": idx.iter().map(|&i| s.label(i)).collect::<Vec<_>>(),
                "quadric_dim": interpolation_space_of(&pts, 2).dim,
            })
        });
    let code = if summary.residuals == [0; 4] { 0 } else { 1 };
    Ok((
        code,
        json!({
            "residuals": summary.residuals,
            "summary": summary,
            "segments": { "count": segments.len(), "longest": longest },
            "double_diamond": diamond,
        }),
    ))
}

fn quadrics(input: &Input) -> Handled {
    let s = input.point_set();
    let space = interpolation_space_of(&s.points.iter().collect::<Vec<_>>(), 2);
    let mut payload = json!({ "n": s.len(), "dim": space.dim, "basis": space.basis });
    if space.dim >= 2 {
        let pencil = Pencil::new(QForm::from_hpoly(&space.basis[0])?, QForm::from_hpoly(&space.basis[1])?)?;
        payload["degenerate_members"] = json!(pencil_degenerate_members(&pencil)?);
        payload["pencil"] = json!(pencil);
    }
    Ok((0, payload))
}

fn recover(cli: &Cli, input: &Input, budget: usize, min_segment: usize, cover: bool) -> Handled {
    let s = input.point_set();
    if cover {
        let c = weak_structure_cover(s, cli.max_n_dual, cli.jobs)?;
        return Ok((0, json!({ "cover": c })));
    }
    let opts = RecoverOptions {
        outlier_budget: budget,
        min_segment,
        jobs: cli.jobs,
    };
    Ok((0, json!({ "recovery": recover_pencil(s, opts)? })))
}

fn classify(input: &Input) -> Handled {
    let verdict = classify_extremal(input.point_set())?;
    Ok((0, json!({ "verdict": verdict })))
}

fn lift(cli: &Cli, input: &Input) -> Handled {
    let s = input.planar.as_ref().expect("planar input");
    let direct = ordinary_circles_direct_with(s, cli.jobs)?;
    let lifted = ordinary_circles_via_lift(s, cli.jobs)?;
    let agree = direct.count == lifted.circles && lifted.lines == lifted.lines_direct;
    Ok((
        if agree { 0 } else { 1 },
        json!({
            "ordinary_circles": direct.count,
            "agree": agree,
            "direct": direct,
            "lift": lifted,
        }),
    ))
}

/// Streams at or above this offset feed the Chasles trials.
const CHASLES_STREAM: u64 = 1 << 32;

pub fn parity_vector() -> Vec<Scalar> {
    [-1, 1, 1, 1, -1, -1, -1, 1].iter().map(|&v| Scalar::from_int(v)).collect()
}

fn verify_appendix(jobs: usize, trials: usize, seed: u64, chasles: usize) -> Handled {
    let parity = parity_vector();
    let records: Vec<Value> = ordplanes::parallel::run(jobs, || {
        (0..trials as u64)
            .into_par_iter()
            .map(|i| {
                let mut r = trials::trial_rng(seed, i);
                let (_, e) = if i % 2 == 0 {
                    trials::skew_pairs(&mut r)
                } else {
                    trials::coplanar_pairs(&mut r)
                };
                let kernel_ok = e.configuration != LineConfiguration::Coplanar || e.kernel_vector == parity;
                json!({
                    "trial": i,
                    "configuration": e.configuration,
                    "verified": e.verified,
                    "kernel_ok": kernel_ok,
                    "passed": e.verified && kernel_ok,
                })
            })
            .collect()
    });
    let chasles_ok: Vec<bool> = ordplanes::parallel::run(jobs, || {
        (0..chasles as u64)
            .into_par_iter()
            .map(|i| {
                let pts = trials::chasles_grid(&mut trials::trial_rng(seed, CHASLES_STREAM + i));
                ordplanes::quadrics::chasles_nine(&pts).unwrap_or(false)
            })
            .collect()
    });
    let passed = records.iter().filter(|r| r["passed"] == true).count();
    let count = |c: &str| records.iter().filter(|r| r["configuration"] == c).count();
    let failures: Vec<&Value> = records.iter().filter(|r| r["passed"] != true).collect();
    let chasles_passed = chasles_ok.iter().filter(|&&b| b).count();
    let all = passed == trials && chasles_passed == chasles;
    Ok((
        if all { 0 } else { 1 },
        json!({
            "summary": format!("{passed}/{trials}"),
            "eight_points": {
                "trials": trials,
                "passed": passed,
                "skew": count("skew"),
                "coplanar": count("coplanar"),
                "failures": failures,
            },
            "chasles": { "trials": chasles, "passed": chasles_passed },
        }),
    ))
}

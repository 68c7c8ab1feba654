use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use localmatch::certificates::{certify, diametral_family, enlargement_factor, CertificateKind};
use localmatch::crossing::{crossing_report, find_pairwise_crossing};
use localmatch::generators::{gen_circle_alternating, gen_convex, gen_random};
use localmatch::matching::{optimal_matching, optimal_matching_capped, ratio_report, DEFAULT_ORACLE_CAP};
use localmatch::miner::{mine_with_progress, MinerConfig};
use localmatch::{Error, InstanceFile, Matching, Objective, PointSet, Tolerance};
use serde::Serialize;

mod suite;
mod svg;

/// Local versus global maximum matchings in the plane.
#[derive(Parser)]
#[command(name = "localmatch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact optimum perfect matching of an instance.
    Solve(SolveArgs),
    /// Locality and ratio report for the instance's matching.
    Verify(VerifyArgs),
    /// Center certificate for the instance's matching.
    Certify(CertifyArgs),
    /// Pairwise-crossing analysis.
    Crossing(CrossingArgs),
    /// Search for instances with a low local/global ratio.
    Mine(MineArgs),
    /// Write a generated instance.
    Gen(GenArgs),
    /// Run the invariant suites and print a JSON summary.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct Io {
    /// Instance file (JSON, or CSV with a .csv extension).
    #[arg(long)]
    input: PathBuf,
    /// Also write the JSON result to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Local2,
    Local3Sqrt2,
    Local3Fingerhut,
}

impl From<KindArg> for CertificateKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Local2 => CertificateKind::Local2,
            KindArg::Local3Sqrt2 => CertificateKind::Local3Sqrt2,
            KindArg::Local3Fingerhut => CertificateKind::Local3Fingerhut,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long, value_enum, default_value = "max")]
    objective: ObjectiveArg,
    /// Largest instance the exact solver accepts.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    cap: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long, value_enum, default_value = "local2")]
    kind: KindArg,
    /// Write an SVG figure of the certificate.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Fill opacity of the disks in the figure.
    #[arg(long, default_value_t = 0.12)]
    opacity: f64,
}

#[derive(Args)]
struct CrossingArgs {
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct MineArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Number of points.
    #[arg(long, default_value_t = 6)]
    points: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Perturbation steps per restart.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    /// Step standard deviation relative to the box size.
    #[arg(long, default_value_t = 0.2)]
    step: f64,
    /// Stop once a chunk of restarts reaches this ratio.
    #[arg(long)]
    stop_below: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Random,
    Convex,
    /// Points on a circle with alternating chords 1 and eps.
    Circle,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    generator: Generator,
    /// Number of points (pairs for the circle construction).
    #[arg(long, default_value_t = 8)]
    points: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Box side for random points.
    #[arg(long, default_value_t = 1.0)]
    bbox: f64,
    /// Short chord length for the circle construction.
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, value_enum, default_value = "smoke")]
    scale: suite::Scale,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure classes and their exit codes.
enum Failure {
    Input(String),
    Cap(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Cap(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Cap(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            Error::NotLocal { .. } | Error::WitnessSlack { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("result serializes")
}

/// Prints `text` and writes it to `output` when given.
fn emit(text: &str, output: Option<&Path>) -> CmdResult {
    println!("{text}");
    if let Some(path) = output {
        fs::write(path, format!("{text}\n")).map_err(|e| io_error(path, e))?;
    }
    Ok(())
}

fn load(path: &Path) -> Result<(InstanceFile, PointSet, Option<Matching>), Failure> {
    let inst = InstanceFile::read(path)?;
    let (ps, m) = inst.validate()?;
    Ok((inst, ps, m))
}

fn require_matching(m: Option<Matching>) -> Result<Matching, Failure> {
    m.ok_or_else(|| Failure::Input("instance has no matching".into()))
}

#[derive(Serialize)]
struct SolveOutput {
    objective: Objective,
    weight: f64,
    matching: Matching,
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    let (_, ps, _) = load(&args.io.input)?;
    let objective = match args.objective {
        ObjectiveArg::Max => Objective::Maximize,
        ObjectiveArg::Min => Objective::Minimize,
    };
    let m = optimal_matching_capped(&ps, objective, args.cap)?;
    let out = SolveOutput {
        objective,
        weight: m.weight(&ps)?,
        matching: m,
    };
    emit(&to_json(&out), args.io.output.as_deref())
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let (_, ps, m) = load(&args.io.input)?;
    let m = require_matching(m)?;
    let report = ratio_report(&ps, &m, args.k, &Tolerance::default())?;
    emit(&to_json(&report), args.io.output.as_deref())?;
    if report.is_local {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "matching is not {}-local: edges {:?} can be improved",
            args.k,
            report.violating_subset.unwrap_or_default()
        )))
    }
}

fn cmd_certify(args: &CertifyArgs) -> CmdResult {
    let (_, ps, m) = load(&args.io.input)?;
    let m = require_matching(m)?;
    let kind = CertificateKind::from(args.kind);
    let cert = certify(&ps, &m, kind, &Tolerance::default())?;
    emit(&to_json(&cert), args.io.output.as_deref())?;

    if let Some(path) = &args.svg {
        let oracle = if ps.len() <= DEFAULT_ORACLE_CAP {
            Some(optimal_matching(&ps, Objective::Maximize)?)
        } else {
            None
        };
        let mut disk_layers = vec![svg::DiskLayer {
            disks: diametral_family(&m, &ps, 1.0)?.scaled_disks().collect(),
            color: "gray",
        }];
        if kind == CertificateKind::Local2 {
            disk_layers.push(svg::DiskLayer {
                disks: diametral_family(&m, &ps, enlargement_factor())?
                    .scaled_disks()
                    .collect(),
                color: "orange",
            });
        }
        let figure = svg::Figure {
            points: &ps,
            matching: Some(&m),
            oracle: oracle.as_ref(),
            witness: Some(cert.witness.point),
            disk_layers,
            opacity: args.opacity,
            title: format!("{kind:?} certificate"),
        };
        fs::write(path, figure.render()).map_err(|e| io_error(path, e))?;
    }
    if cert.valid {
        Ok(())
    } else {
        Err(Failure::Verification("certificate chain does not hold".into()))
    }
}

fn cmd_crossing(args: &CrossingArgs) -> CmdResult {
    let (_, ps, m) = load(&args.io.input)?;
    let m = match m {
        Some(m) => m,
        None => find_pairwise_crossing(&ps)?
            .0
            .ok_or_else(|| Failure::Verification("no pairwise-crossing perfect matching exists".into()))?,
    };
    let report = crossing_report(&ps, &m, &Tolerance::default())?;
    emit(&to_json(&report), args.io.output.as_deref())
}

fn cmd_mine(args: &MineArgs) -> CmdResult {
    let cfg = MinerConfig {
        k: args.k,
        num_points: args.points,
        budget_iterations: args.budget,
        restarts: args.restarts,
        step_scale: args.step,
        seed: args.seed,
        stop_below: args.stop_below,
        ..MinerConfig::default()
    };
    let mined = mine_with_progress(&cfg, |p| {
        eprintln!("restart {} iteration {} ratio {}", p.restart, p.iteration, p.ratio);
    })?;
    eprintln!("best ratio {} (restart {})", mined.ratio, mined.restart);
    let inst = InstanceFile::from_mined(&mined, cfg.budget_iterations);
    emit(&inst.to_json(), args.output.as_deref())
}

fn cmd_gen(args: &GenArgs) -> CmdResult {
    let inst = match args.generator {
        Generator::Random => InstanceFile::new(&gen_random(args.points, args.seed, args.bbox)?, None),
        Generator::Convex => InstanceFile::new(&gen_convex(args.points, args.seed)?, None),
        Generator::Circle => {
            let (ps, m) = gen_circle_alternating(args.points, args.eps)?;
            InstanceFile::new(&ps, Some(&m))
        }
    };
    let mut inst = inst;
    if !matches!(args.generator, Generator::Circle) {
        inst.metadata.seed = Some(args.seed);
    }
    inst.metadata.provenance = Some(format!(
        "gen {}",
        args.generator.to_possible_value().expect("named").get_name()
    ));
    emit(&inst.to_json(), args.output.as_deref())
}

fn cmd_suite(args: &SuiteArgs) -> CmdResult {
    let summary = suite::run(args.scale);
    for s in &summary.suites {
        eprintln!(
            "{:<28} {:>5}/{:<5} {}",
            s.name,
            s.passed,
            s.total,
            if s.ok() { "PASS" } else { "FAIL" }
        );
    }
    emit(&to_json(&summary), args.output.as_deref())?;
    if summary.all_passed {
        Ok(())
    } else {
        Err(Failure::Verification("some suites failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Crossing(a) => cmd_crossing(a),
        Command::Mine(a) => cmd_mine(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Suite(a) => cmd_suite(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

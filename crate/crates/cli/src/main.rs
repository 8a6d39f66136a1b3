use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use darboux::contour::{analyze, enumerate_guesses, strip_absolute, ClusterRow, ContourError};
use darboux::forward::{apparent_contour, instance_from, make_cyclide, random_instance, CaseTag, CyclideSpec, ForwardError};
use darboux::reconstruct::{roundtrip, run_all_guesses, RoundtripError, RunOptions};
use darboux::{Poly, QPoly, Rational, Vars};
use serde::Serialize;
use serde_json::json;

const EXIT_INPUT: u8 = 2;
const EXIT_NO_SOLUTION: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(name = "darboux", version, about = "Reconstruct Darboux cyclides from their apparent contour")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Progress on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Write JSON here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the special points of a contour.
    Analyze(ContourArgs),
    /// Try every guess and report which ones yield a cyclide.
    Reconstruct(ContourArgs),
    /// Generate a cyclide and its apparent contour.
    Forward(ForwardArgs),
    /// Generate, reconstruct and compare for a batch of seeds.
    Roundtrip(RoundtripArgs),
}

#[derive(Args)]
struct ContourArgs {
    /// Contour file in the polynomial grammar, `-` for stdin; `#` lines are comments.
    #[arg(long, short, conflicts_with = "poly", required_unless_present = "poly")]
    input: Option<PathBuf>,
    /// Contour given inline.
    #[arg(long)]
    poly: Option<String>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    guess_limit: u64,
    #[arg(long, default_value_t = 4)]
    isolated_bound: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions { seed: self.seed, guess_limit: self.guess_limit as usize, isolated_bound: self.isolated_bound, jobs: self.jobs as usize }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    Nodal,
    Cuspidal,
}

impl From<Case> for CaseTag {
    fn from(c: Case) -> Self {
        match c {
            Case::Nodal => CaseTag::Nodal,
            Case::Cuspidal => CaseTag::Cuspidal,
        }
    }
}

#[derive(Args)]
struct ForwardArgs {
    /// Spec file with lines `L = ...`, `Q = ...`, `camera = a, b, c`.
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Case::Nodal)]
    case: Case,
}

#[derive(Args)]
struct RoundtripArgs {
    #[arg(long, value_enum, default_value_t = Case::Nodal)]
    case: Case,
    /// Number of consecutive seeds starting at `--seed`.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[command(flatten)]
    run: RunArgs,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<ContourError> for Failure {
    fn from(e: ContourError) -> Self {
        let code = match e {
            ContourError::TooManyGuesses { .. } => EXIT_RESOURCE,
            ContourError::GenericityExhausted { .. } => EXIT_NO_SOLUTION,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ForwardError> for Failure {
    fn from(e: ForwardError) -> Self {
        let code = if matches!(e, ForwardError::Exhausted(_)) { EXIT_RESOURCE } else { EXIT_INPUT };
        Failure { code, message: e.to_string() }
    }
}

impl From<RoundtripError> for Failure {
    fn from(e: RoundtripError) -> Self {
        match e {
            RoundtripError::Forward(e) => e.into(),
            RoundtripError::Contour(e) => e.into(),
        }
    }
}

fn read_source(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(Failure::input)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }
}

fn strip_comments(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n")
}

fn parse(text: &str, vars: &Vars) -> Result<QPoly, Failure> {
    Poly::parse(text.trim(), vars).map_err(Failure::input)
}

fn contour_of(args: &ContourArgs) -> Result<QPoly, Failure> {
    let text = match (&args.input, &args.poly) {
        (Some(p), _) => read_source(p)?,
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(Failure::input("no contour given")),
    };
    parse(&strip_comments(&text), &Vars::xyz())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnalyzeReport {
    degree_u1: u32,
    k: u32,
    case: CaseTag,
    rotation: darboux::contour::Rotation,
    clusters: Vec<ClusterRow>,
    guesses: Option<usize>,
}

fn cmd_analyze(args: &ContourArgs, verbose: bool) -> Result<(serde_json::Value, u8), Failure> {
    let u = contour_of(args)?;
    let input = strip_absolute(&u)?;
    if verbose {
        eprintln!("U1 of degree {}, absolute conic with multiplicity {}", input.u1.total_degree().unwrap_or(0), input.k);
    }
    let analysis = analyze(&input, args.run.seed)?;
    let opts = args.run.options();
    let guesses = enumerate_guesses(&analysis.clusters, opts.guess_limit, opts.isolated_bound).ok().map(|g| g.len());
    let report = AnalyzeReport {
        degree_u1: input.u1.total_degree().unwrap_or(0),
        k: input.k,
        case: input.case,
        rotation: analysis.rotation.clone(),
        clusters: analysis.clusters.iter().map(ClusterRow::from).collect(),
        guesses,
    };
    Ok((serde_json::to_value(report).expect("serializable"), 0))
}

fn cmd_reconstruct(args: &ContourArgs, verbose: bool) -> Result<(serde_json::Value, u8), Failure> {
    let u = contour_of(args)?;
    let report = run_all_guesses(&u, &args.run.options())?;
    if verbose {
        for r in &report.reports {
            eprintln!("{} {:?} {}", r.guess, r.outcome, r.diagnostics.message.as_deref().unwrap_or(""));
        }
    }
    let code = if report.successes().next().is_some() { 0 } else { EXIT_NO_SOLUTION };
    Ok((serde_json::to_value(&report).expect("serializable"), code))
}

fn parse_spec(text: &str) -> Result<(CyclideSpec, [Rational; 3]), Failure> {
    let xyzw = Vars::xyzw();
    let (mut l, mut q, mut camera) = (None, None, None);
    for line in strip_comments(text).lines().filter(|l| !l.trim().is_empty()) {
        let (key, value) = line.split_once('=').ok_or_else(|| Failure::input(format!("expected `key = value`: {line}")))?;
        match key.trim() {
            "L" => l = Some(parse(value, &xyzw)?),
            "Q" => q = Some(parse(value, &xyzw)?),
            "camera" => {
                let parts: Vec<Rational> = value
                    .split(',')
                    .map(|s| s.trim().parse::<Rational>().map_err(|_| Failure::input(format!("bad coordinate `{}`", s.trim()))))
                    .collect::<Result<_, _>>()?;
                camera = Some(<[Rational; 3]>::try_from(parts).map_err(|_| Failure::input("camera needs three coordinates"))?);
            }
            other => return Err(Failure::input(format!("unknown key `{other}`"))),
        }
    }
    let l = l.ok_or_else(|| Failure::input("missing L"))?;
    let q = q.ok_or_else(|| Failure::input("missing Q"))?;
    let camera = camera.unwrap_or_else(|| std::array::from_fn(|_| Rational::from(0)));
    let case = if darboux::forward::is_cuspidal_spec(&l, &q) { CaseTag::Cuspidal } else { CaseTag::Nodal };
    Ok((CyclideSpec { l, q, case }, camera))
}

fn cmd_forward(args: &ForwardArgs) -> Result<(serde_json::Value, u8), Failure> {
    let inst = match &args.input {
        Some(p) => {
            let (spec, camera) = parse_spec(&read_source(p)?)?;
            match instance_from(spec.clone(), camera.clone()) {
                Ok(i) => i,
                Err(ForwardError::NonGenericCamera(msg)) => {
                    // Still report the contour so that degenerate views can be inspected.
                    let f = make_cyclide(&spec)?;
                    let surface = darboux::forward::translate_camera(&f, &camera)?;
                    let u = apparent_contour(&surface)?;
                    return Ok((
                        json!({ "F": surface.to_string(), "U": u.to_string(), "caseTag": spec.case, "camera": camera, "warning": msg }),
                        EXIT_INPUT,
                    ));
                }
                Err(e) => return Err(e.into()),
            }
        }
        None => random_instance(args.seed, args.case.into())?,
    };
    let u1 = strip_absolute(&inst.contour)?;
    Ok((
        json!({
            "F": inst.surface.to_string(),
            "U": inst.contour.to_string(),
            "caseTag": inst.spec.case,
            "camera": inst.camera,
            "degrees": { "U": 12, "U1": u1.u1.total_degree(), "k": u1.k },
        }),
        0,
    ))
}

fn cmd_roundtrip(args: &RoundtripArgs, verbose: bool) -> Result<(serde_json::Value, u8), Failure> {
    let opts = args.run.options();
    let mut verdicts = Vec::new();
    for seed in args.run.seed..args.run.seed + args.count {
        let v = roundtrip(seed, args.case.into(), &RunOptions { seed: 0, ..opts.clone() })?;
        if verbose {
            eprintln!("seed {seed}: verdict {} ({} of {} guesses succeeded)", v.verdict, v.successes, v.guesses);
        }
        verdicts.push(v);
    }
    let code = if verdicts.iter().all(|v| v.verdict) { 0 } else { EXIT_NO_SOLUTION };
    Ok((json!({ "verdicts": verdicts }), code))
}

fn emit(value: &serde_json::Value, output: Option<&PathBuf>) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    match output {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, cli.verbose),
        Command::Reconstruct(a) => cmd_reconstruct(a, cli.verbose),
        Command::Forward(a) => cmd_forward(a),
        Command::Roundtrip(a) => cmd_roundtrip(a, cli.verbose),
    };
    match result {
        Ok((value, code)) => {
            if let Err(e) = emit(&value, cli.output.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

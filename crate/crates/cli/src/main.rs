//! `mfchern`: Chern characters, boundary-bulk images and truncated
//! cohomology of matrix factorizations described by JSON problem files.
//!
//! Exit codes: 0 success, 1 invalid input or failed check, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mfchern_core::cech::check_closed;
use mfchern_core::chern::{boundary_bulk, cech_chern, local_chern};
use mfchern_core::homsolver::{cohomology, exact_witness, TruncationSpec};
use mfchern_core::problem::{cochain_from_json, cochain_to_json, Problem, ProblemError};
use mfchern_core::{corpus, selftest, Parity};

const THREADS_VAR: &str = "MFCHERN_THREADS";

#[derive(Parser)]
#[command(name = "mfchern", version, about = "Exact Chern character computations for matrix factorizations")]
struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a problem file.
    Validate { problem: String },
    /// Chern character, either on one chart or as a Čech cocycle.
    Chern {
        problem: String,
        #[arg(long, conflicts_with = "cech", requires = "chart")]
        local: bool,
        #[arg(long)]
        chart: Option<String>,
        #[arg(long)]
        cech: bool,
    },
    /// Boundary-bulk image of an endomorphism cochain listed in the problem file.
    Tau {
        problem: String,
        #[arg(long)]
        endo: String,
        /// Reject endomorphisms that are not closed instead of warning.
        #[arg(long)]
        strict: bool,
    },
    /// Check that a cochain is closed under the total differential. Without
    /// `--input`, checks the Čech Chern character of the problem.
    CheckClosed {
        problem: String,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Dimension of truncated two-periodic cohomology.
    HhDim {
        problem: String,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long)]
        maxdeg: u32,
        #[arg(long, default_value_t = 0)]
        maxinv: u32,
        /// Restrict the cochains to Čech degree P and form degree Q, as `P,Q`.
        #[arg(long, value_parser = parse_slot)]
        slot: Option<(usize, usize)>,
    },
    /// Search the truncation for `x` with `D(x)` equal to the input cochain.
    ExactWitness {
        problem: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        maxdeg: u32,
        #[arg(long, default_value_t = 0)]
        maxinv: u32,
    },
    /// Run the invariant checks on the built-in corpus.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

fn parse_slot(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or("expected P,Q")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(p)?, parse(q)?))
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<ProblemError> for Failure {
    fn from(e: ProblemError) -> Self {
        if e.is_invalid_input() {
            Failure::Invalid(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

/// Result JSON, and whether the command's check passed.
type Report = (Value, bool);

/// `corpus:<name>` selects a built-in problem; anything else is a path.
fn load(problem: &str) -> Result<Problem, Failure> {
    if let Some(name) = problem.strip_prefix("corpus:") {
        let names: Vec<&str> = corpus::CORPUS.iter().map(|e| e.name).collect();
        return corpus::load(name)
            .ok_or_else(|| Failure::Usage(format!("no corpus problem `{name}`; available: {}", names.join(", "))))?
            .map_err(Failure::from);
    }
    Ok(Problem::load(Path::new(problem))?)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&src).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Validate { problem } => {
            let p = load(&problem)?;
            let (r0, r1) = p.mf.ranks();
            Ok((
                json!({
                    "valid": true,
                    "charts": p.model.num_charts(),
                    "tuples": p.model.simplices().count(),
                    "ranks": [r0, r1],
                }),
                true,
            ))
        }
        Command::Chern { problem, local, chart, cech } => {
            let p = load(&problem)?;
            match (local, cech) {
                (true, _) => {
                    let name = chart.expect("clap requires --chart with --local");
                    let i = p.model.chart_index(&name).map_err(invalid)?;
                    let form = local_chern(p.mf.chart(i), p.connections.get(i)).map_err(invalid)?;
                    Ok((json!({ "chart": name, "form": form.to_string() }), true))
                }
                (false, true) => {
                    let ch = cech_chern(&p.model, &p.mf, &p.connections).map_err(invalid)?;
                    Ok((cochain_to_json(&p.model, &ch), true))
                }
                (false, false) => Err(Failure::Usage("choose one of --local --chart <name> or --cech".into())),
            }
        }
        Command::Tau { problem, endo, strict } => {
            let p = load(&problem)?;
            let f = p.endos.get(&endo).ok_or_else(|| {
                let keys: Vec<&str> = p.endos.keys().map(String::as_str).collect();
                Failure::Usage(format!("no endomorphism `{endo}` in the problem; available: {}", keys.join(", ")))
            })?;
            let tau = boundary_bulk(&p.model, &p.mf, &p.connections, f, strict).map_err(invalid)?;
            let mut out = cochain_to_json(&p.model, &tau.cochain);
            if !tau.warnings.is_empty() {
                out["warnings"] = json!(tau.warnings);
            }
            Ok((out, true))
        }
        Command::CheckClosed { problem, input } => {
            let p = load(&problem)?;
            let c = match input {
                Some(path) => cochain_from_json(&p.model, &read_json(&path)?)?,
                None => cech_chern(&p.model, &p.mf, &p.connections).map_err(invalid)?,
            };
            Ok(match check_closed(&p.model, &c).map_err(invalid)? {
                Ok(()) => (json!({ "closed": true }), true),
                Err(nc) => (
                    json!({
                        "closed": false,
                        "failure": { "tuple": nc.tuple, "degree": nc.degree, "value": nc.value },
                    }),
                    false,
                ),
            })
        }
        Command::HhDim {
            problem,
            parity,
            maxdeg,
            maxinv,
            slot,
        } => {
            let p = load(&problem)?;
            let parity = match parity {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            };
            if let Some((sp, sq)) = slot {
                if (sp + sq) % 2 != parity.bit() {
                    return Err(Failure::Usage(format!("slot {sp},{sq} does not have the requested parity")));
                }
            }
            let trunc = TruncationSpec { maxdeg, maxinv };
            let select = |sp: usize, sq: usize| slot.is_none_or(|s| s == (sp, sq));
            let report = cohomology(&p.model, trunc, parity, &select).map_err(invalid)?;
            Ok((
                json!({
                    "dim": report.dim,
                    "parity": if parity == Parity::Even { "even" } else { "odd" },
                    "truncation": trunc,
                    "slot": slot.map(|(a, b)| [a, b]),
                    "dimensions": {
                        "cochains": report.cochains,
                        "cocycles": report.cocycles,
                        "boundaries": report.boundaries,
                    },
                    "primitives": report.primitives,
                }),
                true,
            ))
        }
        Command::ExactWitness {
            problem,
            input,
            maxdeg,
            maxinv,
        } => {
            let p = load(&problem)?;
            let c = cochain_from_json(&p.model, &read_json(&input)?)?;
            let trunc = TruncationSpec { maxdeg, maxinv };
            let report = exact_witness(&p.model, &c, trunc).map_err(invalid)?;
            Ok((
                json!({
                    "outcome": report.outcome,
                    "witness": report.witness.as_ref().map(|x| cochain_to_json(&p.model, x)),
                    "truncation": trunc,
                    "primitives": report.primitives,
                    "dimensions": { "unknowns": report.unknowns, "rank": report.rank },
                }),
                true,
            ))
        }
        Command::Selftest => {
            let report = selftest::run();
            let passed = report.passed;
            Ok((serde_json::to_value(report).expect("report serializes"), passed))
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be an integer >= 1, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(value: &Value, output: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads()
        .and_then(|()| run(cli.command))
        .and_then(|(value, passed)| emit(&value, cli.output.as_deref()).map(|()| passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

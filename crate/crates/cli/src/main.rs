use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kirillov::lie::law::{compare_with_reference, derive_group_law, PolynomialMap};
use kirillov::lie::validate_algebra;
use kirillov::scalar::{parse_rational, to_f64, Rational};
use kirillov::{Algebra, Error, StructureConstants};
use serde_json::{json, Value};

mod commands;
mod output;

use output::Sink;

/// Orbit-method computations for the nilpotent group N7.
#[derive(Parser, Debug)]
#[command(name = "kirillov", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a structure-constant table (antisymmetry, Jacobi, nilpotency).
    CheckAlgebra(CheckAlgebra),
    /// Derive the group law from the BCH series.
    DeriveLaw(DeriveLaw),
    /// Layer, invariants, stabilizer and polarization of a functional, plus an orbit sample.
    Orbit(OrbitArgs),
    /// Limit set of a sequence of orbits and witness checks for candidates.
    Limits(LimitsArgs),
    /// Norm of an induced representation on a test function.
    RepNorm(RepNormArgs),
    /// Convergence table of the layer-passing approximants.
    NcdlVerify(NcdlArgs),
}

#[derive(Args, Debug, Clone)]
struct Outputs {
    /// Write the JSON report here (`-` for standard output).
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckAlgebra {
    /// Structure-constant table; defaults to the bundled N7 table.
    table: Option<PathBuf>,
    #[command(flatten)]
    out: Outputs,
}

#[derive(Args, Debug)]
struct DeriveLaw {
    table: Option<PathBuf>,
    /// Reference law to diff against, one `z<m> = ...` line per coordinate.
    #[arg(long, value_name = "PATH")]
    compare: Option<PathBuf>,
    #[command(flatten)]
    out: Outputs,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    /// Functional as seven comma-separated rationals, e.g. `0,0,1,2,0,0,3`.
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub f: String,
    /// Points per sweeping axis; the sample spans `[-range, range]` on each.
    #[arg(long, default_value_t = 21)]
    pub sample_n: usize,
    #[arg(long, default_value = "2")]
    pub range: String,
    /// Write the orbit sample as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    out: Outputs,
}

#[derive(Args, Debug)]
pub struct LimitsArgs {
    #[arg(long, value_enum, default_value_t = SeqLayer::Gamma2)]
    pub layer: SeqLayer,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub rule_f3: String,
    #[arg(long, default_value = "k", allow_hyphen_values = true)]
    pub rule_f4: String,
    #[arg(long, default_value = "1/k", allow_hyphen_values = true)]
    pub rule_f7: String,
    #[arg(long, default_value = "1/k", allow_hyphen_values = true)]
    pub rule_f5: String,
    #[arg(long, default_value = "1/k", allow_hyphen_values = true)]
    pub rule_f6: String,
    /// Horizon: witnesses are checked for `K <= k <= 2K`.
    #[arg(long = "K", default_value_t = 1000)]
    pub horizon: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Candidate functional (seven comma-separated numbers); repeatable.
    /// Without candidates a few points of the limit set are checked.
    #[arg(long = "candidate", value_name = "F", allow_hyphen_values = true)]
    pub candidates: Vec<String>,
    /// Enforce the c2 constraint on Gamma1 limit points.
    #[arg(long)]
    pub constrained: bool,
    #[command(flatten)]
    out: Outputs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeqLayer {
    Gamma2,
    Gamma1,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AtomKind {
    Gauss,
}

#[derive(Args, Debug)]
pub struct RepNormArgs {
    #[arg(long, value_enum, default_value_t = AtomKind::Gauss)]
    pub atom: AtomKind,
    /// Width in the `(x1, x2)` directions.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Width in the `x3..x7` directions.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_name = "F", allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, default_value_t = 48)]
    pub grid_n: usize,
    #[arg(long, default_value_t = 6.0)]
    pub window: f64,
    /// Export the discretized operator to `<stem>.bin` and `<stem>.json`.
    #[arg(long, value_name = "STEM")]
    pub export: Option<PathBuf>,
    #[command(flatten)]
    out: Outputs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Generic,
    Degenerate,
    Gamma0,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Gauss,
}

#[derive(Args, Debug)]
pub struct NcdlArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    /// Limit of `I2` for the generic case.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c1: f64,
    #[arg(long, value_delimiter = ',', default_values_t = vec![4usize, 8, 16, 32])]
    pub k_list: Vec<usize>,
    #[arg(long, default_value_t = 48)]
    pub grid_n: usize,
    #[arg(long, default_value_t = 6.0)]
    pub window: f64,
    /// Frame profile for the Gamma1 -> Gamma0 case.
    #[arg(long, value_enum, default_value_t = Profile::Gauss)]
    pub profile: Profile,
    /// Override the sequence rules (Gamma2: f3, f4, f7; Gamma1: f5, f6).
    #[arg(long, allow_hyphen_values = true)]
    pub rule_f3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rule_f4: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rule_f7: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rule_f5: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rule_f6: Option<String>,
    /// Test-function widths.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Write the convergence table as CSV (`-` for standard output).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    out: Outputs,
}

/// Result of a subcommand: the JSON report and whether verification passed.
pub struct Report {
    pub json: Value,
    pub pass: bool,
}

pub enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

pub type CmdResult = std::result::Result<Report, Failure>;

fn load_table(path: &Option<PathBuf>) -> std::result::Result<(String, StructureConstants), Failure> {
    match path {
        None => Ok(("bundled:n7".into(), StructureConstants::parse(kirillov::lie::N7_TABLE)?)),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), StructureConstants::parse(&text)?))
        }
    }
}

/// Parses seven comma-separated rationals (`1/2`, `-3`, `0.25`).
pub fn parse_functional(s: &str) -> std::result::Result<Vec<Rational>, Failure> {
    let v: Option<Vec<Rational>> = s.split(',').map(|t| parse_rational(t.trim())).collect();
    match v {
        Some(v) if v.len() == 7 => Ok(v),
        Some(v) => Err(Failure::Usage(format!("expected 7 components, got {}", v.len()))),
        None => Err(Failure::Usage(format!("cannot parse functional {s:?}"))),
    }
}

pub fn parse_functional_f64(s: &str) -> std::result::Result<Vec<f64>, Failure> {
    Ok(parse_functional(s)?.iter().map(to_f64).collect())
}

fn check_algebra(a: &CheckAlgebra, sink: &mut Sink) -> CmdResult {
    let (source, sc) = load_table(&a.table)?;
    let rep = validate_algebra(&sc);
    sink.say(&rep.to_string());
    let pass = rep.ok();
    sink.say(&format!(
        "jacobi {}, step {}",
        if rep.jacobi { "ok" } else { "FAILED" },
        rep.nilpotency_step.map_or("none".into(), |s| s.to_string())
    ));
    Ok(Report { json: json!({ "config": { "table": source }, "report": rep, "pass": pass }), pass })
}

fn derive_law(a: &DeriveLaw, sink: &mut Sink) -> CmdResult {
    let (source, sc) = load_table(&a.table)?;
    let alg = Algebra::new(sc)?;
    let law = derive_group_law(&alg);
    sink.say(&law.to_string());
    let mut out = json!({
        "config": { "table": source, "compare": a.compare.as_ref().map(|p| p.display().to_string()) },
        "law": law.polys().iter().enumerate().map(|(m, p)| (format!("z{}", m + 1), p.render(&|i| law.var_name(i)))).collect::<std::collections::BTreeMap<_, _>>(),
    });
    if let Some(path) = &a.compare {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let reference = PolynomialMap::parse(&text, alg.dim(), ('x', 'y'))?;
        let cmp = compare_with_reference(&alg, &reference);
        sink.say(&format!("diff against {} ({} monomials):", path.display(), cmp.derived_vs_reference.count()));
        sink.say(&cmp.derived_vs_reference.to_string());
        sink.say(&format!("closest chart {} ({} monomials):", cmp.best_chart, cmp.best_chart_diff.count()));
        sink.say(&cmp.best_chart_diff.to_string());
        out["comparison"] = serde_json::to_value(&cmp).expect("comparison serializes");
    }
    Ok(Report { json: out, pass: true })
}

fn run(cli: &Cli) -> (Option<Outputs>, CmdResult, Sink) {
    let json_to_stdout = |o: &Outputs| o.json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    match &cli.command {
        Command::CheckAlgebra(a) => {
            let mut sink = Sink::new(json_to_stdout(&a.out));
            let r = check_algebra(a, &mut sink);
            (Some(a.out.clone()), r, sink)
        }
        Command::DeriveLaw(a) => {
            let mut sink = Sink::new(json_to_stdout(&a.out));
            let r = derive_law(a, &mut sink);
            (Some(a.out.clone()), r, sink)
        }
        Command::Orbit(a) => {
            let mut sink = Sink::new(json_to_stdout(&a.out));
            let r = commands::orbit(a, &mut sink);
            (Some(a.out.clone()), r, sink)
        }
        Command::Limits(a) => {
            let mut sink = Sink::new(json_to_stdout(&a.out));
            let r = commands::limits(a, &mut sink);
            (Some(a.out.clone()), r, sink)
        }
        Command::RepNorm(a) => {
            let mut sink = Sink::new(json_to_stdout(&a.out));
            let r = commands::rep_norm(a, &mut sink);
            (Some(a.out.clone()), r, sink)
        }
        Command::NcdlVerify(a) => {
            let quiet = json_to_stdout(&a.out) || a.csv.as_deref().is_some_and(|p| p.as_os_str() == "-");
            let mut sink = Sink::new(quiet);
            let r = commands::ncdl_verify(a, &mut sink);
            (Some(a.out.clone()), r, sink)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (out, result, _sink) = run(&cli);
    match result {
        Ok(rep) => {
            if let Some(path) = out.and_then(|o| o.json) {
                if let Err(e) = output::write_json(&path, &rep.json) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if rep.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification FAILED");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NotInLimitSet(_) => 1,
                _ => 2,
            })
        }
    }
}

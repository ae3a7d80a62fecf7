//! Command-line front end. Every command renders to a string first, so output is
//! identical whether it goes to stdout or to `--out`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::LatticeError;
use crate::fgl::{self, FglData};
use crate::genus::{self, GenusTable};
use crate::lazard::{self, QuotientReport};
use crate::report::Report;

pub const MAX_ORDER: u32 = 24;
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Reference output of `psi --order 4`.
pub const PSI_GOLDEN: &str = include_str!("../golden/psi_order4.txt");
/// Reference output of `kappa --order 4`.
pub const KAPPA_GOLDEN: &str = include_str!("../golden/kappa_order4.txt");

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Parser)]
#[command(name = "krichever", version, about = "Exact genera, formal group laws and Lazard ring quotients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print psi(CP_i) in the p-variables
    Psi(GenusArgs),
    /// Print kappa(CP_i) in the CP-variables
    Kappa(GenusArgs),
    /// Print kappa^{-1}(CP_i)
    KappaInv(GenusArgs),
    /// Print the Krichever-Hoehn genus on CP_i in the q-variables
    PhiKh(GenusArgs),
    /// Run one identity check, or all of them
    Verify(VerifyArgs),
    /// Graded quotients of the Lazard ring by the ideal of the A_ij, i, j >= 3
    Quotient(QuotientArgs),
    /// Run every table comparison, identity and quotient check
    ReproducePaper(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenusArgs {
    #[arg(long, default_value_t = genus::DEFAULT_ORDER as u32, value_parser = clap::value_parser!(u32).range(1..=MAX_ORDER as i64))]
    pub order: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    KricheverOde,
    Lemma1,
    Lemma2Theorem1,
    PropositionI,
    PropositionIi,
    KricheverForm,
    Associativity,
    All,
}

impl Suite {
    const EACH: [Suite; 7] = [
        Suite::KricheverOde,
        Suite::Lemma1,
        Suite::Lemma2Theorem1,
        Suite::PropositionI,
        Suite::PropositionIi,
        Suite::KricheverForm,
        Suite::Associativity,
    ];

    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Series order, or b-model weight for the formal group law suites
    #[arg(long, default_value_t = genus::DEFAULT_ORDER as u32, value_parser = clap::value_parser!(u32).range(3..=MAX_ORDER as i64))]
    pub order: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[arg(long, default_value_t = lazard::DEFAULT_MAX_WEIGHT as u32, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_weight: u32,
    /// Largest weight accepted by --max-weight
    #[arg(long, default_value_t = lazard::DEFAULT_CEILING as u32)]
    pub ceiling: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = genus::DEFAULT_ORDER as u32, value_parser = clap::value_parser!(u32).range(4..=MAX_ORDER as i64))]
    pub order: u32,
    #[arg(long, default_value_t = lazard::DEFAULT_MAX_WEIGHT as u32, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_weight: u32,
    #[arg(long, default_value_t = lazard::DEFAULT_CEILING as u32)]
    pub ceiling: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Rendered command output and whether every check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

/// Parses `argv` (program name first), runs the command and writes its output.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let out = output_args(&cli.command).out.clone();
    match execute(&cli) {
        Ok(outcome) => match emit(&outcome.text, out) {
            Ok(()) => {
                if outcome.pass {
                    EXIT_PASS
                } else {
                    EXIT_FAIL
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(text: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io { path, source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Psi(a) | Command::Kappa(a) | Command::KappaInv(a) | Command::PhiKh(a) => &a.output,
        Command::Verify(a) => &a.output,
        Command::Quotient(a) => &a.output,
        Command::ReproducePaper(a) => &a.output,
    }
}

/// Runs a parsed command without touching stdout or the filesystem.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Psi(a) => Ok(genus_command("psi", genus::psi_table(a.order as usize), a)),
        Command::Kappa(a) => Ok(genus_command("kappa", genus::kappa_table(a.order as usize), a)),
        Command::KappaInv(a) => Ok(genus_command("kappa-inv", genus::kappa_inverse_table(a.order as usize), a)),
        Command::PhiKh(a) => Ok(genus_command("phi-kh", genus::phi_kh_table(a.order as usize), a)),
        Command::Verify(a) => Ok(verify_command(a)),
        Command::Quotient(a) => quotient_command(a),
        Command::ReproducePaper(a) => reproduce_command(a),
    }
}

fn genus_command(name: &str, table: GenusTable, a: &GenusArgs) -> Outcome {
    let text = match a.output.format {
        Format::Text => table.to_text(),
        Format::Json => json_text(&json!({
            "command": name,
            "config": { "order": a.order },
            "table": table.to_json(),
        })),
    };
    Outcome { text, pass: true }
}

/// Runs one suite at `order`; the formal group law suites read it as the b-model weight.
pub fn run_suite(suite: Suite, order: usize, fgl: Option<&FglData>) -> Vec<Report> {
    let with_fgl = |check: fn(&FglData, usize) -> Report| match fgl {
        Some(f) if f.weight() == order => check(f, order),
        _ => check(&fgl::build_with_a(order), order),
    };
    match suite {
        Suite::KricheverOde => vec![genus::verify_krichever_ode(order)],
        Suite::Lemma1 => vec![genus::verify_lemma1(order)],
        Suite::Lemma2Theorem1 => vec![genus::verify_lemma2_theorem1(order)],
        Suite::PropositionI => vec![with_fgl(|f, _| fgl::verify_proposition_i(f))],
        Suite::PropositionIi => vec![with_fgl(|f, _| fgl::verify_proposition_ii(f))],
        Suite::KricheverForm => vec![with_fgl(|f, _| fgl::verify_krichever_form(f))],
        Suite::Associativity => vec![with_fgl(|f, w| fgl::verify_associativity(f, w.min(6)))],
        Suite::All => {
            let shared = fgl::build_with_a(order);
            Suite::EACH.iter().flat_map(|&s| run_suite(s, order, Some(&shared))).collect()
        }
    }
}

fn verify_command(a: &VerifyArgs) -> Outcome {
    let reports = run_suite(a.suite, a.order as usize, None);
    let pass = reports.iter().all(|r| r.pass);
    let text = match a.output.format {
        Format::Text => reports.iter().map(|r| r.to_text() + "\n").collect(),
        Format::Json => json_text(&json!({
            "command": "verify",
            "config": { "suite": a.suite.name(), "order": a.order },
            "pass": pass,
            "reports": reports,
        })),
    };
    Outcome { text, pass }
}

fn check_ceiling(max_weight: u32, ceiling: u32) -> Result<(), CliError> {
    if max_weight > ceiling {
        return Err(LatticeError::CeilingExceeded { n: max_weight as usize, ceiling: ceiling as usize }.into());
    }
    Ok(())
}

fn quotient_command(a: &QuotientArgs) -> Result<Outcome, CliError> {
    check_ceiling(a.max_weight, a.ceiling)?;
    let reports = lazard::quotient_reports(a.max_weight as usize, a.ceiling as usize)?;
    let pass = reports.iter().all(QuotientReport::meets_expectation);
    let text = match a.output.format {
        Format::Text => reports.iter().map(|r| r.to_text() + "\n").collect(),
        Format::Json => json_text(&json!({
            "command": "quotient",
            "config": { "max_weight": a.max_weight, "ceiling": a.ceiling },
            "pass": pass,
            "weights": reports,
        })),
    };
    Ok(Outcome { text, pass })
}

/// One line of the reproduction summary.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn golden_check(name: &str, actual: String, golden: &str) -> Check {
    let pass = actual == golden;
    let detail = if pass { "matches golden file".to_string() } else { format!("got:\n{actual}") };
    Check { name: name.to_string(), pass, detail }
}

/// Table comparisons, every identity suite at `order`, and quotients up to `max_weight`.
pub fn reproduce_checks(order: usize, max_weight: usize) -> Vec<Check> {
    let mut checks = vec![
        golden_check("psi table (order 4)", genus::psi_table(4).to_text(), PSI_GOLDEN),
        golden_check("kappa table (order 4)", genus::kappa_table(4).to_text(), KAPPA_GOLDEN),
    ];
    for r in run_suite(Suite::All, order, None) {
        let detail = match &r.first_failure {
            None => format!("order {}", r.order),
            Some(f) => format!("order {}, first failure at {}: lhs = {}, rhs = {}", r.order, f.monomial, f.lhs, f.rhs),
        };
        checks.push(Check { name: r.suite.clone(), pass: r.pass, detail });
    }
    for r in lazard::LazardPieces::new(max_weight).quotient_reports() {
        checks.push(Check { name: "quotient".into(), pass: r.meets_expectation(), detail: r.to_text() });
    }
    checks
}

fn reproduce_command(a: &ReproduceArgs) -> Result<Outcome, CliError> {
    check_ceiling(a.max_weight, a.ceiling)?;
    let checks = reproduce_checks(a.order as usize, a.max_weight as usize);
    let pass = checks.iter().all(|c| c.pass);
    let text = match a.output.format {
        Format::Text => {
            let mut s: String = checks
                .iter()
                .map(|c| format!("[{}] {}: {}\n", if c.pass { "pass" } else { "FAIL" }, c.name, first_line(&c.detail)))
                .collect();
            s.push_str(if pass { "all checks passed\n" } else { "some checks FAILED\n" });
            s
        }
        Format::Json => json_text(&json!({
            "command": "reproduce-paper",
            "config": { "order": a.order, "max_weight": a.max_weight, "ceiling": a.ceiling },
            "pass": pass,
            "checks": checks,
        })),
    };
    Ok(Outcome { text, pass })
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("")
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(std::iter::once("krichever").chain(args.iter().copied())).unwrap();
        execute(&cli).unwrap()
    }

    #[test]
    fn psi_text_matches_golden() {
        assert_eq!(exec(&["psi", "--order", "4"]).text, PSI_GOLDEN);
        assert_eq!(exec(&["kappa", "--order", "4"]).text, KAPPA_GOLDEN);
    }

    #[test]
    fn genus_json_round_trips_through_parser() {
        let out = exec(&["phi-kh", "--order", "5", "--format", "json"]);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["config"]["order"], 5);
        let table = GenusTable::from_json(&v["table"]).unwrap();
        assert_eq!(table.to_text(), genus::phi_kh_table(5).to_text());
    }

    #[test]
    fn usage_errors() {
        for args in [
            vec!["krichever", "psi", "--order", "0"],
            vec!["krichever", "psi", "--order", "99"],
            vec!["krichever", "psi", "--bogus"],
            vec!["krichever", "verify", "--suite", "nope"],
            vec!["krichever", "frobnicate"],
            vec!["krichever", "quotient", "--max-weight", "14"],
        ] {
            assert_eq!(run(args.clone()), EXIT_USAGE, "{args:?}");
        }
    }

    #[test]
    fn quotient_low_weights() {
        let out = exec(&["quotient", "--max-weight", "3", "--format", "json"]);
        assert!(out.pass);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        for w in v["weights"].as_array().unwrap() {
            assert_eq!(w["Indec"]["free"], 1);
            assert_eq!(w["Indec"]["torsion"], json!([]));
        }
    }

    #[test]
    fn verify_report_schema() {
        let out = exec(&["verify", "--suite", "proposition-i", "--order", "5", "--format", "json"]);
        assert!(out.pass);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        let r = &v["reports"][0];
        assert_eq!(r["suite"], "proposition-i");
        assert_eq!(r["first_failure"], Value::Null);
    }
}

//! qlevel: command-line front end for the exact q-series engine.
//!
//! Subcommands:
//!
//! - `expand <model.json> <spec.json>`: expand a charge model's I-function
//!   under a specialization and print the series.
//! - `verify <name|all>`: verify cataloged identities by dual expansion.
//! - `catalog`: list the identity registry.
//! - `mock <oracle-id>`: print a cataloged right-hand-side series.
//! - `selfcheck`: run the seeded randomized property suites.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 mathematical failure
//! (pole, non-convergence, identity mismatch, failed property suite).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qlevel_core::catalog::{self, VerifyReport};
use qlevel_core::iseries::{i_function, ModelFile};
use qlevel_core::selfcheck::{self, Scale, SuiteReport};
use qlevel_core::symfactor::Specialization;
use qlevel_core::Error as CoreError;

const EXIT_USAGE: u8 = 2;
const EXIT_MATH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qlevel",
    version,
    about = "Exact q-series engine: level-l toric I-functions, determinantal \
             modifications, q-hypergeometric series, and mock theta identity \
             verification over cyclotomic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Truncation order: results are exact through q^TRUNC
    #[arg(long, global = true, default_value_t = 30)]
    trunc: i64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0x5EED)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a model's I-function under a specialization
    Expand {
        /// Charge model JSON file (includes the prefix convention)
        model: PathBuf,
        /// Specialization JSON file
        spec: PathBuf,
    },
    /// Verify one cataloged identity, or `all` for the whole registry plus
    /// the randomized q-hypergeometric family
    Verify { name: String },
    /// List the identity catalog
    Catalog,
    /// Print the catalog's right-hand-side series for an oracle id
    Mock { oracle_id: String },
    /// Run the randomized property suites
    Selfcheck {
        /// Use the full contract sizes instead of the quick profile
        #[arg(long)]
        full: bool,
    },
}

/// A command failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn from_core(err: CoreError) -> Self {
        let code = match err {
            CoreError::Pole { .. } | CoreError::NonConvergence { .. } => EXIT_MATH,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

/// Write one line to stdout, exiting quietly when the consumer closed the
/// pipe (e.g. `qlevel catalog | head`).
fn emit_line(line: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

macro_rules! emit {
    ($($arg:tt)*) => { emit_line(format_args!($($arg)*)) };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if cli.trunc < 0 {
        return Err(Failure::usage("--trunc must be >= 0"));
    }
    match &cli.command {
        Command::Expand { model, spec } => cmd_expand(cli, model, spec),
        Command::Verify { name } => cmd_verify(cli, name),
        Command::Catalog => cmd_catalog(cli),
        Command::Mock { oracle_id } => cmd_mock(cli, oracle_id),
        Command::Selfcheck { full } => cmd_selfcheck(cli, *full),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf, what: &str) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{what} {}: {e}", path.display())))
}

fn cmd_expand(cli: &Cli, model_path: &PathBuf, spec_path: &PathBuf) -> Result<u8, Failure> {
    let model_file: ModelFile = read_json(model_path, "model file")?;
    model_file.model.validate().map_err(Failure::from_core)?;
    let spec: Specialization = read_json(spec_path, "specialization file")?;
    let series = i_function(&model_file.model, model_file.convention, &spec, cli.trunc)
        .map_err(Failure::from_core)?;
    match cli.format {
        Format::Text => emit!("{series}"),
        Format::Json => emit!("{}", serde_json::to_string(&series).unwrap()),
    }
    Ok(0)
}

fn print_report_line(report: &VerifyReport, description: &str) {
    if report.passed() {
        emit!(
            "pass  {:<22} {} ({} ms)",
            report.name,
            description,
            report.elapsed_ms
        );
    } else {
        let mm = report.first_mismatch.as_ref().unwrap();
        emit!(
            "FAIL  {:<22} first mismatch at q^{}: lhs = {}, rhs = {}",
            report.name,
            mm.exp,
            mm.lhs,
            mm.rhs
        );
    }
}

fn cmd_verify(cli: &Cli, name: &str) -> Result<u8, Failure> {
    if name == "all" {
        let registry = catalog::registry();
        let mut reports = Vec::new();
        for id in &registry {
            let report = catalog::verify_identity(id, cli.trunc).map_err(Failure::from_core)?;
            if cli.format == Format::Text {
                print_report_line(&report, &id.description);
            }
            reports.push(report);
        }
        let trials = catalog::verify_prop4_family(cli.seed, cli.trunc.min(20), 5)
            .map_err(Failure::from_core)?;
        if cli.format == Format::Text {
            for t in &trials {
                let status = if t.first_mismatch.is_none() {
                    "pass"
                } else {
                    "FAIL"
                };
                emit!(
                    "{status}  prop4.family r={} s={} trial={} alphas={:?} betas={:?} z={}",
                    t.r,
                    t.s,
                    t.trial,
                    t.alphas,
                    t.betas,
                    t.z
                );
            }
        }
        let ids_pass = reports.iter().filter(|r| r.passed()).count();
        let fam_pass = trials.iter().filter(|t| t.first_mismatch.is_none()).count();
        let all_pass = ids_pass == reports.len() && fam_pass == trials.len();
        match cli.format {
            Format::Text => emit!(
                "{ids_pass}/{} identities pass; prop4 family {fam_pass}/{} trials pass",
                reports.len(),
                trials.len()
            ),
            Format::Json => emit!(
                "{}",
                serde_json::to_string(&serde_json::json!({
                    "identities": reports,
                    "prop4_family": trials,
                    "all_pass": all_pass,
                }))
                .unwrap()
            ),
        }
        Ok(if all_pass { 0 } else { EXIT_MATH })
    } else {
        let id = catalog::lookup(name)
            .ok_or_else(|| Failure::usage(format!("unknown identity: {name}")))?;
        let report = catalog::verify_identity(&id, cli.trunc).map_err(Failure::from_core)?;
        match cli.format {
            Format::Text => print_report_line(&report, &id.description),
            Format::Json => emit!("{}", serde_json::to_string(&report).unwrap()),
        }
        Ok(if report.passed() { 0 } else { EXIT_MATH })
    }
}

fn cmd_catalog(cli: &Cli) -> Result<u8, Failure> {
    let infos = catalog::list_identities();
    match cli.format {
        Format::Text => {
            for info in &infos {
                emit!("{:<22} {:<6} {}", info.name, info.family, info.description);
            }
        }
        Format::Json => emit!("{}", serde_json::to_string(&infos).unwrap()),
    }
    Ok(0)
}

fn cmd_mock(cli: &Cli, oracle_id: &str) -> Result<u8, Failure> {
    let series = catalog::mock_theta(oracle_id, cli.trunc).map_err(Failure::from_core)?;
    match cli.format {
        Format::Text => emit!("{series}"),
        Format::Json => emit!("{}", serde_json::to_string(&series).unwrap()),
    }
    Ok(0)
}

fn print_suite_line(report: &SuiteReport) {
    if report.clean() {
        emit!("pass  {:<26} {} cases", report.name, report.cases);
    } else {
        emit!(
            "FAIL  {:<26} {}/{} cases failed; first: {}",
            report.name,
            report.failures,
            report.cases,
            report.first_failure.as_deref().unwrap_or("-")
        );
    }
}

fn cmd_selfcheck(cli: &Cli, full: bool) -> Result<u8, Failure> {
    let scale = if full { Scale::Full } else { Scale::Quick };
    let reports = selfcheck::run_all(cli.seed, scale);
    let clean = reports.iter().all(SuiteReport::clean);
    match cli.format {
        Format::Text => {
            for r in &reports {
                print_suite_line(r);
            }
            let passed = reports.iter().filter(|r| r.clean()).count();
            emit!(
                "{passed}/{} suites clean (seed {})",
                reports.len(),
                cli.seed
            );
        }
        Format::Json => emit!("{}", serde_json::to_string(&reports).unwrap()),
    }
    Ok(if clean { 0 } else { EXIT_MATH })
}

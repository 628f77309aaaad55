mod commands;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, CliResult, Outcome, QuiverOp, Settings};
use report::{ErrorBody, ErrorReport, Report};

#[derive(Parser)]
#[command(name = "hodgeext", version, about = "Exact computations with mixed Hodge structures, quivers and spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON input document (`-` reads standard input).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Total degree bound for relation searches.
    #[arg(long, global = true, default_value_t = 2)]
    degree_bound: usize,
    /// Largest root-of-unity order tried when factoring characteristic polynomials.
    #[arg(long, global = true, default_value_t = hodgeext::exact::DEFAULT_CYCLOTOMIC_BOUND)]
    cyclotomic_bound: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum and bigrading of the Brieskorn–Pham germ with the given exponents.
    Spectrum { exponents: Vec<u32> },
    /// Residue pairings, good basis and Riemann–Hodge checks for a Brieskorn–Pham germ.
    Residue { exponents: Vec<u32> },
    /// Filtrations, Hodge numbers and polarization checks of a split mixed Hodge structure.
    MhsOf { file: Option<PathBuf> },
    /// Quiver operations on the disk.
    Quiver {
        #[arg(value_enum)]
        op: QuiverOp,
        files: Vec<PathBuf>,
    },
    /// Toy V-filtration table and nearby-cycle isomorphisms.
    Vfilt { file: Option<PathBuf> },
    /// Extension across a normal-crossing stratum.
    Extend { file: Option<PathBuf> },
    /// Nilpotent-orbit presentation, closure equations and fiber table.
    Neron { file: Option<PathBuf> },
    /// Seeded invariant suites.
    Verify {
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
}

fn required<'a>(file: &'a Option<PathBuf>, input: &'a Option<PathBuf>) -> CliResult<&'a Path> {
    file.as_deref()
        .or(input.as_deref())
        .ok_or_else(|| CliError::Schema("an input file is required (positional or --input)".into()))
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let settings = Settings {
        seed: cli.seed,
        degree_bound: cli.degree_bound,
        cyclotomic_bound: cli.cyclotomic_bound,
    };
    match &cli.command {
        Command::Spectrum { exponents } => commands::spectrum(exponents, cli.input.as_deref()),
        Command::Residue { exponents } => commands::residue(exponents, cli.input.as_deref()),
        Command::MhsOf { file } => commands::mhs_of(required(file, &cli.input)?),
        Command::Quiver { op, files } => {
            let mut files = files.clone();
            if files.is_empty() {
                files.extend(cli.input.clone());
            }
            commands::quiver(*op, &files)
        }
        Command::Vfilt { file } => commands::vfilt(required(file, &cli.input)?),
        Command::Extend { file } => commands::extend(required(file, &cli.input)?),
        Command::Neron { file } => commands::neron(file.as_deref().or(cli.input.as_deref()), &settings),
        Command::Verify { suites } => commands::run_verify(suites, &settings),
    }
}

fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(p) => std::fs::write(p, format!("{text}\n")),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Json = cli.format;
    let args: Vec<String> = std::env::args().skip(1).collect();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(&cli)))
        .unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(CliError::Internal(msg))
        });
    let (text, code) = match outcome {
        Ok(o) => {
            let report = Report {
                inputs_digest: report::digest(&args, &o.inputs),
                command: args,
                results: o.results,
                verdicts: o.verdicts,
            };
            let code = if report.passed() { 0 } else { 1 };
            (serde_json::to_string_pretty(&report).expect("report serializes"), code)
        }
        Err(e) => {
            let report = ErrorReport {
                command: args,
                error: ErrorBody {
                    kind: e.kind(),
                    message: e.to_string(),
                },
            };
            (serde_json::to_string_pretty(&report).expect("report serializes"), e.exit_code())
        }
    };
    if let Err(e) = emit(&text, cli.output.as_deref()) {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}

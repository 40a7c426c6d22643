//! Command-line interface.
//!
//! Exit codes: 0 all assertions pass, 1 an assertion fails (or, under
//! `--strict`, an axiom was used), 2 usage or parse errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use surfcalc::dsl;
use surfcalc::exec::run_script;
use surfcalc::report::Report;
use surfcalc::scenarios;

#[derive(Parser)]
#[command(
    name = "surfcalc",
    about = "Exact intersection theory on blow-ups of an elliptic ruled surface",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Md,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run built-in golden suites (all of them when no name is given).
    Verify {
        /// Suite name, e.g. `section4_X`.
        suite: Option<String>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        /// List the available suites and exit.
        #[arg(long)]
        list: bool,
        /// Treat every recorded axiom use as an error.
        #[arg(long)]
        strict: bool,
    },
    /// Parse and execute a `.surf` script.
    Run {
        path: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        /// Treat every recorded axiom use as an error.
        #[arg(long)]
        strict: bool,
    },
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Md => print!("{}", report.to_markdown()),
        Format::Json => println!("{}", report.to_json()),
    }
}

/// 0 on success, 1 on assertion failures or strict-mode axiom use.
fn grade(report: &Report, strict: bool) -> u8 {
    if !report.passed() {
        return 1;
    }
    if strict && !report.axioms_used.is_empty() {
        eprintln!("strict mode: axioms were used:");
        for a in &report.axioms_used {
            eprintln!("  - {a}");
        }
        return 1;
    }
    0
}

fn cmd_verify(suite: Option<String>, format: Format, list: bool, strict: bool) -> u8 {
    if list {
        for name in scenarios::SUITE_NAMES {
            println!("{name}");
        }
        return 0;
    }
    let suites = match suite {
        Some(name) => match scenarios::builtin(&name) {
            Ok(s) => vec![s],
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        None => scenarios::all_builtins(),
    };
    let mut worst = 0u8;
    for s in suites {
        match s.run() {
            Ok(report) => {
                emit(&report, format);
                worst = worst.max(grade(&report, strict));
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    worst
}

fn cmd_run(path: &std::path::Path, format: Format, strict: bool) -> u8 {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return 2;
        }
    };
    let script = match dsl::parse_bytes(&bytes) {
        Ok(s) => s,
        Err(d) => {
            eprintln!("error: {d}");
            return 2;
        }
    };
    let scenario = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("script");
    match run_script(&script, scenario) {
        Ok(report) => {
            emit(&report, format);
            grade(&report, strict)
        }
        Err(d) => {
            eprintln!("error: {d}");
            2
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify {
            suite,
            format,
            list,
            strict,
        } => cmd_verify(suite, format, list, strict),
        Command::Run {
            path,
            format,
            strict,
        } => cmd_run(&path, format, strict),
    };
    ExitCode::from(code)
}

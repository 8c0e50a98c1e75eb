use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qsplit::commands::{self, GenKind, Overrides};
use qsplit::report::Outcome;
use qsplit::CliError;

/// Check, split and verify Q-systems over graded complex matrices.
#[derive(Parser)]
#[command(name = "qsplit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Absolute residual bound (overrides the file).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Eigenvalue clustering gap (overrides the file).
    #[arg(long, global = true)]
    gap_tol: Option<f64>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Output path: the report, the split, or the generated file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the axioms of a Q-system or of a scenario's Q-system in End(F).
    CheckQsystem { file: PathBuf },
    /// Split a Q-system as X ⊠ X̄; --out receives the split.
    SplitQsystem {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Build the splitting of a scenario's Q-system in End(F) and verify it.
    VerifyFun {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate a random input file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Qsystem,
    Scenario,
    Constant,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn finish(outcome: &Outcome, json: bool, out: Option<&Path>) -> Result<u8, CliError> {
    emit(out, &outcome.render(json))?;
    Ok(if outcome.passed() { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let o = |seed| Overrides { tol: cli.tol, gap_tol: cli.gap_tol, seed };
    let out = cli.out.as_deref();
    match cli.cmd {
        Cmd::CheckQsystem { ref file } => finish(&commands::check_qsystem_file(&read(file)?, o(None))?, cli.json, out),
        Cmd::VerifyFun { ref file, seed } => finish(&commands::verify_fun_file(&read(file)?, o(seed))?, cli.json, out),
        Cmd::SplitQsystem { ref file, seed } => {
            let (outcome, split) = commands::split_qsystem_file(&read(file)?, o(seed))?;
            if let (Some(p), Some(s)) = (out, &split) {
                std::fs::write(p, s.to_json())?;
            }
            finish(&outcome, cli.json, None)
        }
        Cmd::Gen { kind, size, seed } => {
            let kind = match kind {
                Kind::Qsystem => GenKind::Qsystem,
                Kind::Scenario => GenKind::Scenario,
                Kind::Constant => GenKind::Constant,
            };
            let file = commands::generate(kind, size, seed)?;
            match out {
                Some(p) => {
                    std::fs::write(p, file.to_json())?;
                    let summary = commands::describe(&file);
                    if cli.json {
                        println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
                    } else {
                        println!("wrote {}: {summary}", p.display());
                    }
                }
                None => print!("{}", file.to_json()),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qsplit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

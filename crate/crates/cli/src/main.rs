//! `hecke`: run case files through the exact verifiers.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hecke_cli::{explain, parse_cases, parse_line, run_cases, ParseOptions, RunOptions, EXIT_INTERNAL, EXIT_PARSE};
use hecke_core::exact_algebra::Flavor;

#[derive(Parser)]
#[command(name = "hecke", version, about = "Exact verification of Hecke transport identities for sl2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report or transcript here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Leave timing fields out of the report so runs compare byte for byte.
    #[arg(long, global = true)]
    stable: bool,
    /// Flavor for factorize and hecke-class cases that do not name one.
    #[arg(long, global = true, value_enum, default_value_t = FlavorArg::Pgl2)]
    flavor: FlavorArg,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every case of a case file.
    Verify { file: PathBuf },
    /// Print the derivation transcript of one case.
    Explain { case_id: String, file: PathBuf },
    /// Run a single case given on the command line, e.g. `sweep factorize a=1,-1 mu=0..3`.
    Sweep { kind: String, ranges: Vec<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Sl2,
    Pgl2,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = ParseOptions {
        flavor: match cli.flavor {
            FlavorArg::Sl2 => Flavor::Sl2,
            FlavorArg::Pgl2 => Flavor::Pgl2,
        },
    };
    let code = match &cli.command {
        Command::Verify { file } => verify(&cli, file, options),
        Command::Explain { case_id, file } => explain_case(&cli, case_id, file, options),
        Command::Sweep { kind, ranges } => {
            let line = format!("{kind} {}", ranges.join(" "));
            match parse_line(&line, 1, options) {
                Ok(case) => report(&cli, &[case]),
                Err(e) => {
                    eprintln!("error: sweep arguments:{}:{}: {}", e.line, e.column, e.message);
                    EXIT_PARSE
                }
            }
        }
    };
    ExitCode::from(code as u8)
}

fn read(file: &Path) -> Result<String, i32> {
    std::fs::read_to_string(file).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", file.display());
        EXIT_INTERNAL
    })
}

fn load(file: &Path, options: ParseOptions) -> Result<Vec<hecke_cli::CaseSpec>, i32> {
    let text = read(file)?;
    parse_cases(&text, options).map_err(|e| {
        eprintln!("error: {}:{}:{}: {}", file.display(), e.line, e.column, e.message);
        EXIT_PARSE
    })
}

fn write_output(cli: &Cli, text: &str) -> Result<(), i32> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_INTERNAL
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(cli: &Cli, file: &Path, options: ParseOptions) -> i32 {
    let cases = match load(file, options) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if cases.is_empty() {
        eprintln!("warning: {} contains no cases", file.display());
    }
    report(cli, &cases)
}

fn report(cli: &Cli, cases: &[hecke_cli::CaseSpec]) -> i32 {
    let report = run_cases(cases, RunOptions { jobs: cli.jobs, stable: cli.stable });
    for c in &report.cases {
        match c.status {
            "failed" => {
                eprintln!("FAILED {} (line {}, expect {})", c.id, c.line, c.expect);
                for i in c.identities.iter().filter(|i| i.status == "failed") {
                    eprintln!("  {}: residual {}", i.identity, i.residual);
                }
            }
            "error" => eprintln!("ERROR {} (line {}): {}", c.id, c.line, c.error.as_deref().unwrap_or("")),
            _ => {}
        }
    }
    if let Err(code) = write_output(cli, &report.to_json()) {
        return code;
    }
    let s = &report.summary;
    eprintln!("{} cases: {} verified, {} failed, {} errors", s.cases, s.verified, s.failed, s.errors);
    report.exit_code()
}

fn explain_case(cli: &Cli, id: &str, file: &Path, options: ParseOptions) -> i32 {
    let cases = match load(file, options) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let Some(case) = cases.iter().find(|c| c.id == id) else {
        let ids: Vec<&str> = cases.iter().map(|c| c.id.as_str()).collect();
        eprintln!("error: no case `{id}` in {} (cases: {})", file.display(), ids.join(", "));
        return EXIT_PARSE;
    };
    match explain(case) {
        Ok(text) => match write_output(cli, &text) {
            Ok(()) => 0,
            Err(code) => code,
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INTERNAL
        }
    }
}

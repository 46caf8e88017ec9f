use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

mod analyze;
mod gen;
mod graph_file;
mod report;

use analyze::{AnalyzeArgs, Task};
use gen::GenKind;

/// Sparseness, Cheeger and spectral form-bound constants of finite graphs.
#[derive(Debug, Parser)]
#[command(name = "sgs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated graph file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output path; stdout when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        /// Constant potential on every vertex.
        #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
        q: f64,
    },
    /// Analyze a graph file and write a report.
    Analyze {
        #[arg(value_enum)]
        task: Task,
        file: PathBuf,
        #[command(flatten)]
        args: AnalyzeArgs,
    },
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SGS_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("SGS_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            anyhow::bail!("SGS_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

/// Exit status 0 on success, 1 when a verification margin fails.
fn run(cli: Cli) -> Result<u8> {
    configure_threads()?;
    match cli.command {
        Command::Gen { kind, out, q } => {
            let file = gen::generate(&kind, q)?;
            write_output(out.as_deref(), &file.to_json())?;
            Ok(0)
        }
        Command::Analyze { task, file, args } => {
            let command: Vec<String> = std::env::args().skip(1).collect();
            let report = analyze::run(task, &file, &args, command)?;
            write_output(args.out.as_deref(), &report.to_json())?;
            let failures = report.failures(args.tol);
            for f in &failures {
                eprintln!("margin {} = {} below -{}", f.id, f.margin, args.tol);
            }
            Ok(if failures.is_empty() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

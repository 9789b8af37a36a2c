use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stablequartic_cli::{emit_report, run_pipeline, Format, JobSpec, Mode};

#[derive(Parser)]
#[command(name = "stablequartic", version, about = "Stable reduction of plane quartics with potentially good hyperelliptic reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a job file through the pipeline.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Overrides the job's mode.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Overrides the job's working precision N.
        #[arg(long)]
        precision: Option<i64>,
        /// Overrides the job's guard.
        #[arg(long)]
        guard: Option<i64>,
        /// Report destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the text rendering instead of JSON.
        #[arg(long)]
        text: bool,
    },
}

fn main() -> ExitCode {
    let Command::Analyze { input, mode, precision, guard, out, text } = Cli::parse().command;
    let raw = match std::fs::read_to_string(&input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read {}: {e}", input.display());
            return ExitCode::from(1);
        }
    };
    let mut job = match JobSpec::from_json(&raw) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("{}: {e}", input.display());
            return ExitCode::from(1);
        }
    };
    if let Some(m) = mode {
        job.mode = m;
    }
    if let Some(n) = precision {
        job.precision = n;
    }
    if let Some(g) = guard {
        job.guard = g;
    }
    let report = run_pipeline(&job);
    let bytes = emit_report(&report, if text { Format::Text } else { Format::Json });
    let written = match &out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::Write::write_all(&mut std::io::stdout(), &bytes),
    };
    if let Err(e) = written {
        eprintln!("cannot write the report: {e}");
        return ExitCode::from(1);
    }
    if let Some(f) = &report.failure {
        eprintln!("{}: {} ({})", f.stage.name(), f.message, f.hint);
    }
    ExitCode::from(report.verdict.exit_code() as u8)
}

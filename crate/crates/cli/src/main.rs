use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spherical_synth_cli::{cmd_synthesize, cmd_thetadiff, cmd_trace, cmd_verify, CliError, Overrides, Status};

/// Path synthesis of spherical four-bar linkages by differential evolution.
#[derive(Parser)]
#[command(name = "sph4r", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize a linkage for the points in a problem file.
    Synthesize(SynthesizeArgs),
    /// Evaluate a stored design against a problem file.
    Verify {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        problem: PathBuf,
    },
    /// Sample the generated curve and joint positions over one input turn.
    Trace {
        #[arg(long)]
        design: PathBuf,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print successive input-angle differences of a free-timing design.
    Thetadiff {
        #[arg(long)]
        design: PathBuf,
    },
}

#[derive(Args)]
struct SynthesizeArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Run this many consecutive seeds and keep the best.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    cr: Option<f64>,
    #[arg(long)]
    f_lo: Option<f64>,
    #[arg(long)]
    f_hi: Option<f64>,
    /// Result file; the convergence CSV goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(command: Command) -> Result<Status, CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Synthesize(a) => {
            let overrides = Overrides {
                seed: a.seed,
                seeds: a.seeds,
                population: a.pop,
                generations: a.gens,
                cr: a.cr,
                f_lo: a.f_lo,
                f_hi: a.f_hi,
                out: a.out,
            };
            cmd_synthesize(&a.problem, &overrides, &mut out)?;
            Ok(Status::Success)
        }
        Command::Verify { design, problem } => Ok(cmd_verify(&design, &problem, &mut out)?.status),
        Command::Trace { design, samples, out: dest } => {
            cmd_trace(&design, samples, dest.as_deref(), &mut out)?;
            Ok(Status::Success)
        }
        Command::Thetadiff { design } => {
            cmd_thetadiff(&design, &mut out)?;
            Ok(Status::Success)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(status) => {
            let _ = io::stdout().flush();
            ExitCode::from(status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

//! `sperner-lab`: build partition complexes, solve colorings, check the
//! topological maps and sweep for disconnected solutions.

mod args;
mod config;
mod run;

use std::fs;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::{Params, RunConfig};
use run::Targets;

/// Why a run exits nonzero.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Property(String),
    NoSolution(String),
    Io(std::io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Io(_) => 1,
            Self::Property(_) => 2,
            Self::NoSolution(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage: {m}"),
            Self::Property(m) => write!(f, "property failure: {m}"),
            Self::NoSolution(m) => write!(f, "no solution: {m}"),
            Self::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

fn fresh(config: RunConfig) -> Result<Option<Failure>, Failure> {
    let header = [run::timestamp_line(), run::header_line(&config)];
    let trace = match &config.params {
        Params::VerifyMaps { trace, .. } => trace.clone(),
        _ => None,
    };
    let targets = Targets { out: config.out.clone(), trace };
    run::execute(&config, &header, &targets).map(|(_, failure)| failure)
}

fn replay(
    input: &std::path::Path,
    out: Option<std::path::PathBuf>,
    trace: Option<std::path::PathBuf>,
    jobs: Option<usize>,
    check: bool,
) -> Result<Option<Failure>, Failure> {
    let original = fs::read_to_string(input).map_err(Failure::Io)?;
    let mut lines = original.lines();
    let (_, recorded) = (lines.next(), lines.next());
    let recorded = recorded.ok_or_else(|| Failure::Usage(format!("{} has no header", input.display())))?;
    let mut config = run::parse_header(recorded)
        .ok_or_else(|| Failure::Usage(format!("{} has no run config header", input.display())))?;
    if out.as_deref() == Some(input) {
        return Err(Failure::Usage("replay --out must differ from the input".into()));
    }
    if let Some(jobs) = jobs {
        config.jobs = jobs.max(1);
    }
    let header = [run::timestamp_line(), recorded.to_string()];
    let targets = Targets { out, trace };
    let (text, failure) = run::execute(&config, &header, &targets)?;
    if check {
        let strip = |t: &str| t.lines().skip(1).map(str::to_string).collect::<Vec<_>>();
        if strip(&text) != strip(&original) {
            return Err(Failure::Property("replayed report differs from the input".into()));
        }
        log::info!("replay matches {}", input.display());
    }
    Ok(failure)
}

fn dispatch(cli: Cli) -> Result<Option<Failure>, Failure> {
    match cli.command {
        Command::Build(shared) => fresh(RunConfig::new(config::build(&shared)?, &shared)),
        Command::Solve { shared, exhaustive } => {
            fresh(RunConfig::new(config::solve(&shared, exhaustive)?, &shared))
        }
        Command::VerifyMaps { shared, trace } => {
            fresh(RunConfig::new(config::verify_maps(&shared, trace)?, &shared))
        }
        Command::Sweep { shared, count, family } => {
            fresh(RunConfig::new(config::sweep(&shared, &count, &family)?, &shared))
        }
        Command::Replay { input, out, trace, jobs, check } => replay(&input, out, trace, jobs, check),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SPERNER_LAB_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) | Err(failure) => {
            eprintln!("sperner-lab: {failure}");
            ExitCode::from(failure.code())
        }
    }
}

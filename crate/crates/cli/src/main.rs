//! `spud`: nonce treebank generation, LM score aggregation and structural
//! probing from the command line.

mod args;
mod config;
mod error;
mod generate;
mod manifest;
mod probe;
mod score;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command, ProbeCommand};
use error::CliError;

fn main() -> ExitCode {
    let matches = match Cli::command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let verbosity = matches.get_count("verbose");
    init_logging(verbosity);
    match run(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("\nFor more information, try '--help'.");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn init_logging(verbosity: u8) {
    let level = match verbosity {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
}

fn run(matches: &clap::ArgMatches) -> Result<(), CliError> {
    let cli = Cli::from_arg_matches(matches).map_err(|e| CliError::Usage(e.to_string()))?;
    let cfg = match &cli.config {
        Some(path) => Some(config::ConfigFile::load(path)?),
        None => None,
    };
    let jobs = cli.jobs.or(cfg.as_ref().and_then(|c| c.jobs));
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Data(format!("cannot start worker pool: {e}")))?;
    }
    let ctx = RunContext {
        manifest: cli.manifest.clone(),
    };
    let (sub, sub_matches) = matches.subcommand().expect("a subcommand is required");
    match cli.command {
        Command::Generate(a) => {
            let a = config::merge(a, sub_matches, cfg.as_ref(), &["generate"])?;
            generate::run(a, &ctx)
        }
        Command::Stats(a) => {
            let a = config::merge(a, sub_matches, cfg.as_ref(), &["stats"])?;
            score::stats(a, &ctx)
        }
        Command::Score(a) => {
            let a = config::merge(a, sub_matches, cfg.as_ref(), &["score"])?;
            score::score(a, &ctx)
        }
        Command::Ttr(a) => {
            let a = config::merge(a, sub_matches, cfg.as_ref(), &["ttr"])?;
            score::ttr(a, &ctx)
        }
        Command::Probe(p) => {
            let (name, m) = sub_matches
                .subcommand()
                .expect("a probe subcommand is required");
            match p {
                ProbeCommand::Train(a) => {
                    let a = config::merge(a, m, cfg.as_ref(), &[sub, name])?;
                    probe::train(a, &ctx)
                }
                ProbeCommand::Eval(a) => {
                    let a = config::merge(a, m, cfg.as_ref(), &[sub, name])?;
                    probe::eval(a, &ctx)
                }
            }
        }
    }
}

/// Options shared by every subcommand.
pub struct RunContext {
    /// Explicit manifest location.
    pub manifest: Option<std::path::PathBuf>,
}

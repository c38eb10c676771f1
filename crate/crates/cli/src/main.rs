use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

mod commands;
mod csv;
mod manifest;
mod settings;

use commands::UsageError;

/// Hypernetwork dismantling: synthetic data, agent training, dismantling
/// traces, baseline tables and SIR containment.
#[derive(Parser)]
#[command(name = "hyperdismantle", version)]
struct Cli {
    /// TOML file of `key = value` settings for the subcommand. Flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write synthetic hypernetworks as hyperedge lists.
    Gen(commands::gen::Args),
    /// Train the agent; writes the best checkpoint and the validation curve.
    Train(commands::train::Args),
    /// Dismantle one hypernetwork with one strategy.
    Dismantle(commands::dismantle::Args),
    /// ANC of several strategies over several hypernetworks.
    Eval(commands::eval::Args),
    /// SIR infection rates after immunizing each strategy's top nodes.
    Sir(commands::sir::Args),
}

fn set_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("HYPERDISMANTLE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("HYPERDISMANTLE_THREADS must be a thread count, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let config = cli.config.as_deref();
    let result = set_threads().and_then(|()| match &cli.command {
        Command::Gen(a) => commands::gen::run(a, config, argv),
        Command::Train(a) => commands::train::run(a, config, argv),
        Command::Dismantle(a) => commands::dismantle::run(a, config, argv),
        Command::Eval(a) => commands::eval::run(a, config, argv),
        Command::Sir(a) => commands::sir::run(a, config, argv),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(u) = e.downcast_ref::<UsageError>() {
                Cli::command()
                    .error(clap::error::ErrorKind::MissingRequiredArgument, &u.0)
                    .exit();
            }
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

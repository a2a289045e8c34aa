use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use resonance_core::cli::{run, Command, RunConfig};

/// Extended-WKB resonances, Siegert refinement and Darboux partners for radial barriers.
#[derive(Parser, Debug)]
#[command(name = "resonance", version)]
struct Args {
    /// summit | count | wkb | refine | siegert | darboux | tables
    command: String,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "V0")]
    v0: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    rmax: Option<String>,
    /// Resonance index.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

fn configure(args: &Args) -> resonance_core::Result<RunConfig> {
    let command: Command = args.command.parse()?;
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(command, path)?,
        None => RunConfig::new(command),
    };
    let overrides = [
        ("V0", &args.v0),
        ("lambda", &args.lambda),
        ("h", &args.h),
        ("rmax", &args.rmax),
        ("n", &args.n),
        ("out", &args.out),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = configure(&args).and_then(|cfg| run(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

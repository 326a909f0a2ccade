use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use colored_limits_cli::{parse_config, run};

#[derive(Debug, Parser)]
#[command(name = "colored-limits", version, about = "Coupled colored-noise Langevin experiments")]
struct Args {
    /// TOML configuration file.
    #[arg(short, long)]
    config: PathBuf,
    /// Output directory, overriding `output` in the configuration.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Worker threads for the path ensemble.
    #[arg(short, long)]
    workers: Option<usize>,
    /// Master seed, overriding `seed` in the configuration.
    #[arg(short, long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    let args = Args::parse();
    let text = std::fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut config = parse_config(&text).with_context(|| format!("in {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(w) = args.workers {
        config.workers = Some(w);
    }
    let out = args.out.unwrap_or_else(|| PathBuf::from(&config.output));
    let workers = config
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let summary = run(&config, &out, workers)?;
    for a in &summary.assertions {
        println!("{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
    }
    println!("wrote {} tables and summary.json to {}", summary.tables.len(), out.display());
    Ok(summary.passed)
}

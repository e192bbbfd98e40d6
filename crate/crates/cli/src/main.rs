use anyhow::{Context, Result};
use clap::Parser;
use secgame_cli::{run_command, CommandName, Config};
use std::path::PathBuf;

/// Finite-population attacker-defender experiments.
#[derive(Parser, Debug)]
#[command(name = "secgame", version)]
struct Cli {
    #[arg(value_enum)]
    command: CommandName,
    /// Configuration file (`section.key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Seed; overrides `run.seed`.
    #[arg(long, env = "EGT_SEED")]
    seed: Option<u64>,
    /// Worker threads; outputs do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let text = std::fs::read_to_string(&cli.config)
        .with_context(|| format!("reading {}", cli.config.display()))?;
    let mut cfg = Config::parse(&text).with_context(|| format!("in {}", cli.config.display()))?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().context("building thread pool")?;
    let (manifest, warnings) = pool.install(|| run_command(cli.command, &cfg, &cli.out))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    for f in &manifest.files {
        println!("{}  {}", f.sha256, cli.out.join(&f.name).display());
    }
    Ok(())
}

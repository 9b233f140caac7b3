use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wep_torsim::{load_config, run, CliError, Mode, OUT_ENV};

/// Quantum WEP torsion-balance simulations. Writes one CSV per table and a
/// manifest into the output directory.
#[derive(Debug, Parser)]
#[command(name = "wep-torsim", version)]
struct Args {
    #[arg(value_enum)]
    mode: Mode,
    /// TOML scenario file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; WEP_TORSIM_OUT takes precedence when set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed; overrides [rng] seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Recompute a sample of rows from the written CSVs.
    #[arg(long)]
    verify: bool,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let out = std::env::var_os(OUT_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| args.out.clone())
        .ok_or_else(|| {
            CliError::Config(format!("no output directory: pass --out or set {OUT_ENV}"))
        })?;
    if let Some(k) = args.threads {
        if k == 0 {
            return Err(CliError::Config("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let cfg = load_config(&args.config, args.mode, args.seed)?;
    let summary = run(&cfg, &out, args.verify)?;
    for (file, rows) in &summary.tables {
        println!("{} ({rows} rows)", out.join(file).display());
    }
    if args.verify {
        println!(
            "verify: {} rows recomputed, all match",
            summary.verified_rows
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wep-torsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hardy_disc::{parse_config, run, write_outputs, CliError};

/// Run one hardy-disc experiment scenario.
#[derive(Debug, Parser)]
#[command(name = "hardy-disc", version)]
struct Args {
    /// Configuration file with `key = value` lines.
    config: PathBuf,
    /// Output directory, overriding the `output` key.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid size applied to both `n_angles` and `n_radii`.
    #[arg(long)]
    grid: Option<usize>,
    /// Suppress the per-check summary.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hardy-disc: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(args: &Args) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io {
        path: args.config.clone(),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(n) = args.grid {
        cfg = cfg.with_grid(n)?;
    }
    if let Ok(seed) = std::env::var("HARDY_DISC_SEED") {
        cfg = cfg.with_seed_text(&seed)?;
    }
    if let Some(out) = &args.out {
        cfg.output = out.clone();
    }
    let (record, table) = run(&cfg)?;
    let (csv, json) = write_outputs(&cfg.output, &record, &table)?;
    if !args.quiet {
        for c in &record.checks {
            println!(
                "{} {}: value {:e}, reference {:e}, tolerance {:e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.reference,
                c.tolerance
            );
        }
        for note in &record.notes {
            println!("note: {note}");
        }
        println!("wrote {} and {}", csv.display(), json.display());
    }
    for c in record.failed_checks() {
        eprintln!("hardy-disc: check {} failed", c.name);
    }
    Ok(record.passed)
}

//! Command-line front end: resolves a config (and optional preset) into
//! sweeps, runs them and writes CSV, JSON or SVG.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dualris::config::{config_hash, load_config, resolve, thread_count, Overrides, SCHEMA_VERSION};
use dualris::emit::{to_csv, to_json, to_svg, write_output, Format, Metadata};
use dualris::montecarlo::with_threads;
use dualris::sweep::{first_order_marcum_residual, run_sweeps, Preset};
use dualris::Result;

/// Dual-RIS received space shift keying simulator.
///
/// Worker threads come from the RIS_THREADS environment variable
/// (0 or unset: one per core).
#[derive(Debug, Parser)]
#[command(name = "simulate", version)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Figure preset: fig1a, fig1b, fig2a, fig2b or fig4.
    #[arg(long)]
    preset: Option<Preset>,
    /// Output format: csv, json or svg.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials per grid point, overriding the config.
    #[arg(long)]
    trials: Option<u64>,
}

fn run(args: &Args) -> Result<()> {
    let threads = thread_count(std::env::var("RIS_THREADS").ok().as_deref())?;
    let file = load_config(&args.config)?;
    let overrides = Overrides {
        preset: args.preset,
        seed: args.seed,
        trials: args.trials,
    };
    let specs = resolve(&file, &overrides)?;
    let result = with_threads(threads, || run_sweeps(&specs))??;
    let text = match args.format {
        Format::Csv => to_csv(&result)?,
        Format::Json => {
            let plan = specs[0].plan;
            let metadata = Metadata {
                schema_version: SCHEMA_VERSION,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                config_hash: config_hash(&specs)?,
                master_seed: plan.master_seed,
                n_trials: plan.n_trials,
                antenna_policy: plan.antenna_policy,
                preset: args.preset.map(|p| p.to_string()),
                first_order_marcum_residual: first_order_marcum_residual(&specs)?,
            };
            to_json(&result, &metadata)?
        }
        Format::Svg => {
            let title = match args.preset {
                Some(p) => format!("{p}"),
                None => args.config.display().to_string(),
            };
            to_svg(&result, &title)
        }
    };
    write_output(args.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("simulate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

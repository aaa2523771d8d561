use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use specshare::error::{AppError, AppResult};
use specshare::figures::run_figure;
use specshare::pipeline::evaluate;
use specshare::sweep::{run_sweep, SweepSpec};
use specshare::table::{error_row, rows, write_rows};
use specshare::verify::{verify, VerifyOptions};
use specshare::RunConfig;

#[derive(Parser)]
#[command(name = "specshare", version, about = "Spectrum-sharing bargaining equilibria")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Solve one parameter point
    Solve {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Emit a preset dataset
    Figure {
        #[arg(long)]
        dataset: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check closed forms against the oracles
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = VerifyOptions::default().grid_points)]
        grid_points: usize,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
}

fn load(path: &Option<PathBuf>) -> AppResult<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::base()),
    }
}

fn load_opt(path: &Option<PathBuf>) -> AppResult<Option<RunConfig>> {
    path.as_ref().map(|p| RunConfig::load(p)).transpose()
}

fn emit(out: &Option<PathBuf>, table: &[Vec<String>]) -> AppResult<()> {
    match out {
        Some(p) => {
            let f = File::create(p).map_err(|e| AppError::Input(format!("cannot create {}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            write_rows(&mut w, table)?;
            w.flush()?;
        }
        None => write_rows(io::stdout().lock(), table)?,
    }
    Ok(())
}

fn run(cli: Cli) -> AppResult<ExitCode> {
    match cli.verb {
        Verb::Solve { config, out } => {
            let cfg = load(&config)?;
            let table = match evaluate(&cfg) {
                Ok(ev) => rows(0, &ev),
                Err(e) => vec![error_row(0, cfg.mode, &cfg.params, &e)],
            };
            emit(&out, &table)?;
        }
        Verb::Sweep { config, out, param, lo, hi, steps } => {
            let cfg = load(&config)?;
            emit(&out, &run_sweep(&cfg, &SweepSpec { param, lo, hi, steps })?)?;
        }
        Verb::Figure { dataset, config, out } => {
            let cfg = load_opt(&config)?;
            emit(&out, &run_figure(&dataset, cfg.as_ref())?)?;
        }
        Verb::Verify { config, grid_points, seed } => {
            if grid_points < 2 {
                return Err(AppError::Input("grid-points must be >= 2".into()));
            }
            let cfg = load(&config)?;
            let opts = VerifyOptions { grid_points, seed, ..Default::default() };
            let report = verify(&cfg, &opts);
            print!("{}", report.render());
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

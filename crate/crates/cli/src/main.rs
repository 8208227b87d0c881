use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use advnet_cli::cache::Cache;
use advnet_cli::report::{any_mismatch, render, Format, Status};
use advnet_cli::{run_file, run_report, Command, ReportRow, RunConfig};
use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "advnet",
    version,
    about = "Adversarial network coding experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Singleton cut-set bound of the scenario's network and adversary.
    Bound(Single),
    /// Check that the scenario's code is unambiguous.
    Verify(Single),
    /// Exact search for the largest unambiguous code.
    Search(Single),
    /// Run every scenario (files or directories) with its own command.
    Report {
        #[arg(long = "scenario", value_name = "PATH", num_args = 1..)]
        scenarios: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Single {
    #[arg(long, value_name = "FILE")]
    scenario: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Search timeout in seconds; overrides the scenario.
    #[arg(long, value_name = "SECS")]
    timeout: Option<f64>,
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    #[arg(long, value_name = "K")]
    seed: Option<u64>,
    #[arg(long, value_name = "FILE")]
    cache: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let timeout = match self.timeout {
            Some(t) if !(t.is_finite() && t > 0.0) => bail!("--timeout must be positive"),
            t => t.map(Duration::from_secs_f64),
        };
        if self.workers == Some(0) {
            bail!("--workers must be at least 1");
        }
        Ok(RunConfig {
            timeout,
            workers: self.workers,
            seed: self.seed,
        })
    }
}

fn emit(rows: &[ReportRow], common: &Common) -> Result<()> {
    for r in rows {
        if r.status == Status::Mismatch && !r.detail.is_empty() {
            eprintln!("{}: {}", r.scenario_id, r.detail);
        }
    }
    let text = render(rows, common.format)?;
    match &common.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
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
    let cli = Cli::parse();
    let (rows, common) = match &cli.command {
        Cmd::Report { scenarios, common } => {
            let cfg = common.config()?;
            let mut cache = common.cache.as_deref().map(Cache::open).transpose()?;
            let rows = run_report(scenarios, &cfg, cache.as_mut())?;
            if let Some(c) = cache.as_mut() {
                c.save()?;
            }
            (rows, common)
        }
        Cmd::Bound(s) | Cmd::Verify(s) | Cmd::Search(s) => {
            let command = match &cli.command {
                Cmd::Bound(_) => Command::Bound,
                Cmd::Verify(_) => Command::Verify,
                _ => Command::Search,
            };
            let cfg = s.common.config()?;
            let mut cache = s.common.cache.as_deref().map(Cache::open).transpose()?;
            let row = run_file(&s.scenario, Some(command), &cfg, cache.as_mut());
            if let Some(c) = cache.as_mut() {
                c.save()?;
            }
            if !row.detail.is_empty() && row.status != Status::Mismatch {
                eprintln!("{}", row.detail);
            }
            (vec![row], &s.common)
        }
    };
    emit(&rows, common)?;
    Ok(!any_mismatch(&rows))
}

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use openpath::config::{DesignChoice, LinkChoice};
use openpath::io::{self, FREQUENCY_COLUMN, POWER_COLUMN};
use openpath::report::ReconstructionReport;
use openpath::synthetic::{generate_history, generate_synthetic_with, DEFAULT_NOISE};
use openpath::{run_pipeline, Overrides, Report, ScenarioConfig};
use openpath_core::poisson::{fit_poisson_with, FitOptions};
use openpath_core::spectra::{reconstruct, DeviationSeries};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "openpath",
    version,
    about = "Droop reconstruction and path prediction"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    k0: Option<f64>,
    /// Spectrum grid size N.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Tikhonov regularization weight.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Regression link: identity or log.
    #[arg(long, global = true, value_parser = parse_link)]
    link: Option<LinkChoice>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (a directory for `simulate`). Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct both spectra and the actual droop.
    Reconstruct(SeriesArgs),
    /// Run the full prediction and write the JSON report.
    Predict(SeriesArgs),
    /// Write a synthetic scenario (series, optionally a regression history).
    Simulate(SimulateArgs),
    /// Fit the redundancy regression and dump the model.
    FitPoisson(FitArgs),
}

#[derive(Args)]
struct SeriesArgs {
    /// `t,delta_f` CSV; overrides the config's `frequency`.
    #[arg(long)]
    frequency: Option<PathBuf>,
    /// `t,delta_p` CSV; overrides the config's `power`.
    #[arg(long)]
    power: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// True droop ΔP/Δf of the generated series.
    #[arg(long)]
    droop: f64,
    #[arg(long, default_value_t = 48)]
    len: usize,
    #[arg(long, default_value_t = DEFAULT_NOISE)]
    noise: f64,
    /// Also write a regression history with this many rows.
    #[arg(long)]
    history_rows: Option<usize>,
    /// Regression coefficients β₀..β₄ for the history.
    #[arg(long, value_delimiter = ',', num_args = 5, default_values_t = [1.0, 2.0, 0.0, 0.0, 0.0])]
    beta: Vec<f64>,
}

#[derive(Args)]
struct FitArgs {
    /// `c1,c2,c3,c4,count` CSV; overrides the config's `history`.
    #[arg(long)]
    history: Option<PathBuf>,
    #[arg(long, value_parser = parse_design)]
    design: Option<DesignChoice>,
}

fn parse_link(s: &str) -> Result<LinkChoice, String> {
    LinkChoice::parse(s).map_err(|e| e.to_string())
}

fn parse_design(s: &str) -> Result<DesignChoice, String> {
    match s {
        "full" => Ok(DesignChoice::Full),
        "intercept-only" => Ok(DesignChoice::InterceptOnly),
        other => Err(format!(
            "unknown design `{other}` (expected `full` or `intercept-only`)"
        )),
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let g = &cli.global;
    let mut config = match &g.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    config.apply(&Overrides {
        k0: g.k0,
        grid: g.grid,
        lambda: g.lambda,
        link: g.link,
        seed: g.seed,
    })?;

    match cli.command {
        Command::Reconstruct(args) => {
            let (f, p) = load_series(&config, &args)?;
            let r = reconstruct(&f, &p, &config.inversion()).context("reconstruction failed")?;
            emit(g.out.as_deref(), &ReconstructionReport::new(&r, config.k0))
        }
        Command::Predict(args) => {
            let (f, p) = load_series(&config, &args)?;
            let outcome = run_pipeline(&config, &f, &p)?;
            let report = Report::new(&outcome, &config);
            write_text(g.out.as_deref(), &report.to_json()?)
        }
        Command::Simulate(args) => simulate(&config, g.out.as_deref(), &args),
        Command::FitPoisson(args) => {
            let path = args
                .history
                .as_ref()
                .or(config.history.as_ref())
                .context("no history file: pass --history or set `history` in the config")?;
            let rows = io::read_history(path)?;
            let options = FitOptions {
                design: args.design.unwrap_or(config.design).into(),
                ..config.fit_options()
            };
            let fit = fit_poisson_with(&rows, &options).context("regression failed")?;
            emit(
                g.out.as_deref(),
                &FitDump {
                    beta: fit.model.beta,
                    link: config.link,
                    design: args.design.unwrap_or(config.design),
                    iterations: fit.iterations,
                    log_likelihood: fit.log_likelihood,
                    rows: rows.len(),
                },
            )
        }
    }
}

#[derive(Serialize)]
struct FitDump {
    beta: [f64; 5],
    link: LinkChoice,
    design: DesignChoice,
    iterations: usize,
    log_likelihood: Vec<f64>,
    rows: usize,
}

fn load_series(
    config: &ScenarioConfig,
    args: &SeriesArgs,
) -> Result<(DeviationSeries, DeviationSeries)> {
    let f = args
        .frequency
        .as_ref()
        .or(config.frequency.as_ref())
        .context("no frequency series: pass --frequency or set `frequency` in the config")?;
    let p = args
        .power
        .as_ref()
        .or(config.power.as_ref())
        .context("no power series: pass --power or set `power` in the config")?;
    Ok((
        io::read_series(f, FREQUENCY_COLUMN)?,
        io::read_series(p, POWER_COLUMN)?,
    ))
}

fn simulate(config: &ScenarioConfig, out: Option<&Path>, args: &SimulateArgs) -> Result<()> {
    let dir = out.unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let s = generate_synthetic_with(config.seed, args.droop, args.len, args.noise)?;
    io::write_series(&dir.join("frequency.csv"), FREQUENCY_COLUMN, &s.frequency)?;
    io::write_series(&dir.join("power.csv"), POWER_COLUMN, &s.power)?;
    if let Some(rows) = args.history_rows {
        let Ok(beta) = <[f64; 5]>::try_from(args.beta.as_slice()) else {
            bail!("--beta needs exactly five values");
        };
        let history = generate_history(config.seed, beta, rows)?;
        io::write_history(&dir.join("history.csv"), &history)?;
    }
    Ok(())
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(out, &text)
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

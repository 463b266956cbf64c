//! Argument parsing and dispatch.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::{parse_estimator_list, parse_scale_vector, ConfigLayer, EstimatorChoice, ExperimentConfig, OutputFormat};
use crate::engine::Engine;
use crate::error::Result;
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "hazsel", version, about = "Estimate the hazard rate of the selected exponential population")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Observations per population.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Number of populations.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Monte Carlo replications per grid point.
    #[arg(long, global = true)]
    pub reps: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// csv, json or markdown.
    #[arg(long, global = true, value_parser = parse_format)]
    pub format: Option<OutputFormat>,
    /// Config file of `key = value` lines; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available cores). Does not change results.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Comma list, e.g. `N1,N2,inv:4.5,imp:4:0.01:2`.
    #[arg(long, global = true)]
    pub estimators: Option<String>,
    /// One scale vector `s1,s2,...`; repeat for a grid.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub scales: Vec<String>,
    /// α for N2I / MLI (default: the upper bound).
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// h for N2I / MLI (default: k).
    #[arg(long = "h-count", global = true)]
    pub h_count: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Risk and standard error of each estimator at each grid point.
    RiskTable,
    /// Admissible range of c, minimax value, sup-risk bounds and α bounds.
    Bounds,
    /// Paired risk difference R(A) − R(B) at each grid point.
    Dominance {
        a: String,
        b: String,
    },
    /// Long-format `ratio,estimator,risk,std_error` series (k = 2).
    PlotData,
    /// Exact two-population risk of c/Y_J against Monte Carlo.
    Exact {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
    },
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: crate::error::CliError| e.to_string())
}

impl GlobalArgs {
    fn layer(&self) -> Result<ConfigLayer> {
        let file = match &self.config {
            Some(p) => ConfigLayer::load(p)?,
            None => ConfigLayer::default(),
        };
        let flags = ConfigLayer {
            n: self.n,
            k: self.k,
            replications: self.reps,
            seed: self.seed,
            format: self.format,
            estimators: self.estimators.as_deref().map(parse_estimator_list).transpose()?,
            scales: if self.scales.is_empty() {
                None
            } else {
                Some(self.scales.iter().map(|s| parse_scale_vector(s)).collect::<Result<_>>()?)
            },
            alpha: self.alpha,
            h_count: self.h_count,
        };
        Ok(file.overlay(flags))
    }

    fn engine(&self) -> Result<Engine> {
        self.workers.map_or_else(|| Ok(Engine::default()), Engine::new)
    }
}

/// Builds the report for a parsed command line.
pub fn build_report(cli: &Cli) -> Result<(Report, OutputFormat)> {
    let layer = cli.global.layer()?;
    if let Command::Bounds = cli.command {
        // Only n, k and format matter here; n = 1 must reach the domain check.
        let n = layer.n.unwrap_or(crate::config::DEFAULT_N);
        let k = layer.k.unwrap_or(crate::config::DEFAULT_K);
        return Ok((commands::bounds(n, k)?, layer.format.unwrap_or_default()));
    }
    let cfg = ExperimentConfig::from_layer(layer)?;
    let engine = cli.global.engine()?;
    let report = match &cli.command {
        Command::RiskTable => commands::risk_table(&cfg, &engine)?,
        Command::Dominance { a, b } => {
            let a: EstimatorChoice = a.parse()?;
            let b: EstimatorChoice = b.parse()?;
            commands::dominance(&cfg, &engine, &a, &b)?
        }
        Command::PlotData => commands::plot_data(&cfg, &engine)?,
        Command::Exact { c } => commands::exact(&cfg, &engine, *c)?,
        Command::Bounds => unreachable!(),
    };
    Ok((report, cfg.output_format))
}

pub fn run(cli: &Cli) -> Result<()> {
    let (report, format) = build_report(cli)?;
    let bytes = report.to_bytes(format)?;
    match &cli.global.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(&bytes)?;
            f.flush()?;
        }
        None => io::stdout().lock().write_all(&bytes)?,
    }
    if let (OutputFormat::Csv, Some(s)) = (format, &report.summary) {
        eprintln!("{s}");
    }
    Ok(())
}

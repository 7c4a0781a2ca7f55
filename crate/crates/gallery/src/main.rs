//! `fractal-gallery`: figure data, rasters and check reports.

mod graph;
mod hilbert_image;
mod output;
mod series;
mod strip;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fractal_conjugacy::checks::{self, CheckConfig, Suite};
use fractal_conjugacy::code_space::DEFAULT_DEPTH;

use crate::output::Provenance;

#[derive(Parser, Debug)]
#[command(name = "fractal-gallery", version, about = "Fractal transformation figures and invariant checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Address depth of every transform.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    /// Tile membership tolerance of the greedy address.
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graph of a transform, or of a composition such as `FG2+FG2`.
    Graph {
        #[arg(long, default_value = "FG1")]
        pair: String,
        /// Number of abscissae, also the raster side.
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Partial sums of a series expansion on the 2^12 midpoint grid.
    Series {
        #[arg(long, default_value = "constant")]
        function: String,
        #[arg(long, default_value = "sine")]
        basis: String,
        /// Comma-separated term counts.
        #[arg(long, default_value = "10,50,100", value_delimiter = ',')]
        terms: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Moves an image between the square and the Hilbert strip.
    HilbertImage {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Direction::TwoDToStrip)]
        direction: Direction,
        /// Output image file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs a check suite and writes `statistic,value,threshold,pass`.
    Check {
        /// measures, isometry, haar, flows or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Strips of a function transported by the translation flow and its conjugate.
    FlowStrip {
        #[arg(long, default_value = "FG1")]
        pair: String,
        #[arg(long, default_value = "tent")]
        function: String,
        /// Pixels per strip.
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    #[value(name = "2d_to_strip", alias = "2d-to-strip")]
    TwoDToStrip,
    #[value(name = "strip_to_2d", alias = "strip-to-2d")]
    StripToTwoD,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Checks,
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn configure_threads() {
    let Some(cap) = std::env::var("FRACTAL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) else {
        return;
    };
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cap.clamp(1, available.max(1)))
        .build_global();
}

fn run(cli: Cli) -> Result<(), Failure> {
    let prov = Provenance::from_args();
    match cli.command {
        Command::Graph { pair, n, common } => graph::run(&pair, n, &common, &prov)?,
        Command::Series {
            function,
            basis,
            terms,
            common,
        } => series::run(&function, &basis, &terms, &common, &prov)?,
        Command::HilbertImage { input, direction, out } => hilbert_image::run(&input, direction, &out, &prov)?,
        Command::Check { suite, n, common } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>().map_err(anyhow::Error::from)?]
            };
            let cfg = CheckConfig {
                seed: common.seed,
                n,
                ..CheckConfig::default()
            };
            let mut all_pass = true;
            for s in suites {
                let report = checks::run(s, &cfg).map_err(anyhow::Error::from)?;
                let path = common.out.join(format!("check_{}.csv", s.label()));
                output::write_report(&path, &report)?;
                for row in &report.rows {
                    println!(
                        "{:<9} {:<40} {:>12.4e} {:>12.4e} {}",
                        s.label(),
                        row.statistic,
                        row.value,
                        row.threshold,
                        if row.pass { "PASS" } else { "FAIL" }
                    );
                }
                all_pass &= report.all_pass();
            }
            if !all_pass {
                return Err(Failure::Checks);
            }
        }
        Command::FlowStrip {
            pair,
            function,
            n,
            common,
        } => strip::run(&pair, &function, n, &common, &prov)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => {
            eprintln!("fractal-gallery: check failures");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("fractal-gallery: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! `coastpca` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input or configuration,
//! 3 numerical failure. Reports go to stdout as one JSON object; diagnostics
//! go to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coastpca::GeoPoint;
use coastpca_cli::commands;
use coastpca_cli::config::PipelineConfig;
use coastpca_cli::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "coastpca", version, about = "PCA shoreline and bathymetry simplification with mesh preprocessing")]
struct Cli {
    /// More log output on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simplify every contour of a GeoJSON document.
    SimplifyVector {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Points per window.
        #[arg(long)]
        partition: usize,
        /// Retained modes.
        #[arg(long)]
        modes: usize,
        /// Keep contours shorter than the partition instead of dropping them.
        #[arg(long)]
        keep_small: bool,
    },
    /// Simplify an ESRI ASCII grid.
    SimplifyRaster {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Block size as ROWSxCOLS, e.g. 8x8.
        #[arg(long, value_parser = parse_block)]
        block: (usize, usize),
        #[arg(long)]
        modes: usize,
        /// Fill nodata cells from their nearest valid neighbour first.
        #[arg(long)]
        fill_nodata: bool,
    },
    /// Build and trim open boundaries; write the closed loops as GeoJSON.
    Boundary {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the target edge length at one or more points.
    Sizefield {
        #[arg(long)]
        config: PathBuf,
        /// Query point as LON,LAT (repeatable).
        #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_probe)]
        probe: Vec<GeoPoint>,
    },
    /// Write the Gmsh geometry file for the configured domain.
    ExportGeo {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every configured step and write all outputs.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        /// Directory for relative output paths (default: the config's directory).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn parse_block(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
    let p = p.trim().parse().map_err(|_| format!("bad block rows {p:?}"))?;
    let q = q.trim().parse().map_err(|_| format!("bad block cols {q:?}"))?;
    Ok((p, q))
}

fn parse_probe(s: &str) -> Result<GeoPoint, String> {
    let (lon, lat) = s.split_once(',').ok_or_else(|| format!("expected LON,LAT, got {s:?}"))?;
    let lon: f64 = lon.trim().parse().map_err(|_| format!("bad longitude {lon:?}"))?;
    let lat: f64 = lat.trim().parse().map_err(|_| format!("bad latitude {lat:?}"))?;
    Ok(GeoPoint::new(lon, lat))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let report = match cli.command {
        Command::SimplifyVector {
            input,
            out,
            partition,
            modes,
            keep_small,
        } => commands::simplify_vector(&input, &out, partition, modes, keep_small)?,
        Command::SimplifyRaster {
            input,
            out,
            block,
            modes,
            fill_nodata,
        } => commands::simplify_raster(&input, &out, block, modes, fill_nodata)?,
        Command::Boundary { config, out } => commands::boundary(&PipelineConfig::load(&config)?, out)?,
        Command::Sizefield { config, probe } => {
            for line in commands::sizefield(&PipelineConfig::load(&config)?, &probe)? {
                println!("{line}");
            }
            return Ok(());
        }
        Command::ExportGeo { config, out } => commands::export_geo(&PipelineConfig::load(&config)?, out)?,
        Command::Pipeline { config, out_dir } => {
            commands::pipeline(&PipelineConfig::load(&config)?, out_dir.as_deref())?
        }
    };
    report.print();
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! `ballbody`: batch front end for the ball-body library.
//!
//! Documents are read from a file path, from standard input (`-`), or
//! inline when the argument starts with `{`. Every invocation writes one
//! JSON report embedding the run configuration and tool version.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use ballbody::Error;

#[derive(Parser, Debug)]
#[command(name = "ballbody", version, about = "Hausdorff geometry, c-duality and isometries of ball bodies")]
pub struct Cli {
    /// Ambient dimension; inferred from body documents when omitted.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Covering radius of the direction net [default: 0.02 in the plane, 0.08 otherwise].
    #[arg(long, global = true)]
    pub mesh: Option<f64>,
    /// Accuracy of each support evaluation.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cross-check planar results against the raster oracle.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hausdorff distance between two bodies.
    Dist { a: String, b: String },
    /// Classify a map of ball bodies as a motion or a motion after c-duality.
    Classify { map: String },
    /// Run the acceptance suite.
    Selftest {
        /// Comma-separated criterion ids (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
    /// Support values on given directions, or on the whole net.
    Support {
        body: String,
        /// Comma-separated direction coordinates; repeat for several.
        #[arg(long = "direction", value_delimiter = ',', num_args = 1, action = clap::ArgAction::Append)]
        directions: Vec<f64>,
    },
    /// Check the c-duality identities on a body.
    CdualCheck { body: String },
    /// Circumball of a body.
    Circ { body: String },
    /// Rebuild a body from its point distances on a grid.
    Reconstruct {
        body: String,
        #[arg(long, default_value_t = 0.5)]
        spacing: f64,
        /// Half-width of the probe grid.
        #[arg(long, default_value_t = 3.0)]
        extent: f64,
    },
    /// Additivity and the point-midpoint check on a triple of bodies.
    GeodesicCheck { k0: String, k1: String, k2: String },
    /// Degree-based surjectivity evidence for a planar map.
    Surjectivity {
        map: String,
        #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0,0")]
        target: Vec<f64>,
    },
}

/// Configuration echoed in every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub dimension: Option<usize>,
    pub net_mesh: Option<f64>,
    pub support_tol: f64,
    pub seed: u64,
    pub oracle: bool,
    pub output_path: Option<String>,
}

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    result: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        dimension: cli.dim,
        net_mesh: cli.mesh,
        support_tol: cli.tol,
        seed: cli.seed,
        oracle: cli.oracle,
        output_path: cli.out.as_ref().map(|p| p.display().to_string()),
    };
    let (name, outcome) = commands::run(&cli, &config);
    match outcome {
        Ok((result, code)) => {
            let report = Report { tool: "ballbody", version: ballbody::VERSION, command: name, config: &config, result };
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            if let Err(e) = emit(cli.out.as_ref(), &text) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code().clamp(1, 255) as u8
}

fn emit(out: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

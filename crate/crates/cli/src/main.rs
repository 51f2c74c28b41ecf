//! `k3dyn`: complex entropy, orbit certification, arc tracking and the
//! mapping-class word, with JSON outputs and a hashed run manifest.

mod config;
mod error;
mod manifest;
mod stages;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use k3dyn::mapclass::Convention;

use config::{Overrides, PipelineConfig};
use error::CliError;
use manifest::StageRecord;
use stages::StageOutput;

#[derive(Parser)]
#[command(name = "k3dyn", version, about = "Entropy certification pipeline for real (2,2,2) surface automorphisms")]
struct Cli {
    /// Working precision in bits (at least 34).
    #[arg(long, global = true, env = "K3DYN_PRECISION", default_value_t = 512)]
    precision: u32,
    /// Pseudo-orbit JSON file; the built-in period-10 orbit for A = 10 by default.
    #[arg(long, global = true, value_name = "FILE")]
    orbit: Option<PathBuf>,
    /// Override the surface parameter A of the orbit file.
    #[arg(long, global = true, value_name = "A")]
    parameter: Option<String>,
    /// Radius of the chart balls used for derivative bounds.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Radius that must fit in every transition domain.
    #[arg(long, global = true)]
    eps_prime: Option<f64>,
    /// Longest allowed segment of a tracked arc in disk coordinates.
    #[arg(long, global = true)]
    max_segment: Option<f64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "k3dyn-out")]
    out: PathBuf,
    /// Also write the tracked arcs as CSV (`arcs.csv`).
    #[arg(long, global = true)]
    emit_plot_csv: bool,
    /// Print stage reports as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one pipeline stage, or all of them.
    Run {
        stage: StageName,
        /// Arc-data input for `mclass` (default: `arcs.txt` in the output directory).
        #[arg(long, value_name = "FILE")]
        arcs: Option<PathBuf>,
        /// Export the f² word with every generator inverted.
        #[arg(long)]
        mirror_word: bool,
        /// Fail with exit code 4 when `all` finds no bridge report.
        #[arg(long)]
        require_bridge: bool,
    },
    /// Replay the inequalities stored in a certificate.
    Recheck { certificate: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StageName {
    EntropyComplex,
    Certify,
    Arcs,
    Mclass,
    All,
}

fn emit(out: &StageOutput, json: bool) {
    if json {
        let v = serde_json::json!({ "stage": out.stage, "report": out.report, "failure": out.failure });
        println!("{}", serde_json::to_string(&v).expect("serializable"));
    } else {
        println!("== {}", out.stage);
        for l in &out.lines {
            println!("{l}");
        }
    }
}

/// Writes a stage's files, records them in the manifest and reports.
fn finish(cfg: &PipelineConfig, out: StageOutput, started: Instant, json: bool) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out).map_err(CliError::io(&cfg.out))?;
    let mut rec = StageRecord {
        config_sha256: manifest::config_hash(cfg),
        ok: out.failure.is_none(),
        ..StageRecord::default()
    };
    for (name, bytes) in &out.files {
        let path = cfg.path(name);
        std::fs::write(&path, bytes).map_err(CliError::io(&path))?;
        rec.outputs.insert(name.to_string(), manifest::sha256_hex(bytes));
    }
    manifest::record(&cfg.out, out.stage, rec, started.elapsed().as_secs_f64())?;
    emit(&out, json);
    match out.failure {
        Some(f) => Err(CliError::Failure(format!("{} failed: {f}", out.stage))),
        None => Ok(()),
    }
}

fn run_stage(cli: &Cli, cfg: &PipelineConfig, stage: StageName, arcs: &Option<PathBuf>, conv: Convention) -> Result<(), CliError> {
    let t = Instant::now();
    let out = match stage {
        StageName::EntropyComplex => stages::entropy_complex()?,
        StageName::Certify => stages::certify(cfg)?,
        StageName::Arcs => stages::arcs(cfg, cli.emit_plot_csv)?,
        StageName::Mclass => {
            let path = arcs.clone().unwrap_or_else(|| cfg.path(stages::ARCS_FILE));
            stages::mclass(&path, conv)?
        }
        StageName::All => unreachable!("expanded by the caller"),
    };
    finish(cfg, out, t, cli.json)
}

fn main_inner(cli: &Cli) -> Result<(), CliError> {
    let cfg = PipelineConfig::build(Overrides {
        precision: cli.precision,
        orbit: cli.orbit.clone(),
        parameter: cli.parameter.clone(),
        eps: cli.eps,
        eps_prime: cli.eps_prime,
        max_segment: cli.max_segment,
        out: cli.out.clone(),
    })?;
    match &cli.command {
        Command::Recheck { certificate } => {
            let out = stages::recheck_file(certificate)?;
            emit(&out, cli.json);
            match out.failure {
                Some(f) => Err(CliError::Failure(f)),
                None => Ok(()),
            }
        }
        Command::Run { stage, arcs, mirror_word, require_bridge } => {
            let conv = if *mirror_word { Convention::Mirror } else { Convention::AsIs };
            if *stage != StageName::All {
                return run_stage(cli, &cfg, *stage, arcs, conv);
            }
            for s in [StageName::EntropyComplex, StageName::Certify, StageName::Arcs, StageName::Mclass] {
                run_stage(cli, &cfg, s, arcs, conv)?;
            }
            let out = stages::summary(&cfg, *require_bridge)?;
            emit(&out, cli.json);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("k3dyn: {e}");
            e.exit_code()
        }
    }
}

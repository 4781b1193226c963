//! `weakcore`: batch runner for blocking searches, core enumeration, the
//! discretization pipeline, the anonymous blocking cycle and diagnostics.
//!
//! Every run writes one JSON report. The exit status is 0 when the mode's
//! assertion holds (or the mode has none), 1 when it fails, 2 on a usage
//! error and 3 when a computation or fixture self-check fails.

mod modes;
mod registry;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

pub const REPORT_SCHEMA: &str = "weakcore.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    BlockSearch,
    WeakCore,
    AlphaCore,
    Pipeline,
    Cycle,
    Contrast,
    Diagnostics,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::BlockSearch => "block-search",
            Mode::WeakCore => "weak-core",
            Mode::AlphaCore => "alpha-core",
            Mode::Pipeline => "pipeline",
            Mode::Cycle => "cycle",
            Mode::Contrast => "contrast",
            Mode::Diagnostics => "diagnostics",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "weakcore", version, about = "Weak-core and alpha-core experiments")]
pub struct Cli {
    /// Fixture name (see --list) or path to a JSON game.
    #[arg(long, required_unless_present = "list")]
    pub game: Option<String>,

    #[arg(long, value_enum, required_unless_present = "list")]
    pub mode: Option<Mode>,

    /// Blocking slack, as "p/q" or a decimal.
    #[arg(long)]
    pub epsilon: Option<String>,

    /// Cells of the uniform search partition.
    #[arg(long, default_value_t = 4)]
    pub cells: usize,

    /// Number of equally spaced actions in [0,1].
    #[arg(long, default_value_t = 5)]
    pub grid: usize,

    /// Dyadic level of the sample points in t.
    #[arg(long, default_value_t = 6)]
    pub samples: u32,

    /// Cell counts of the pipeline stages, each dividing the next.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4, 8])]
    pub stages: Vec<usize>,

    /// Status quo: action labels per player (finite), cell values (continuum)
    /// or four digits of A0 (anonymous).
    #[arg(long)]
    pub profile: Option<String>,

    /// Seed for randomized probes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Optional CSV table (pipeline integrals or sweep rows).
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Print the fixture registry and exit.
    #[arg(long)]
    pub list: bool,
}

pub enum Failure {
    Usage(String),
    Run(String),
}

impl From<weakcore::Error> for Failure {
    fn from(e: weakcore::Error) -> Self {
        match e {
            weakcore::Error::InvalidInput(m) => Failure::Usage(m),
            other => Failure::Run(other.to_string()),
        }
    }
}

/// What a mode produced: its result section and, if it asserts
/// something, whether that holds.
pub struct Outcome {
    pub result: Value,
    pub assertion: Option<(&'static str, bool)>,
}

fn inputs(cli: &Cli) -> Value {
    json!({
        "game": cli.game,
        "mode": cli.mode.map(Mode::name),
        "epsilon": cli.epsilon,
        "cells": cli.cells,
        "grid": cli.grid,
        "samples": cli.samples,
        "stages": cli.stages,
        "profile": cli.profile,
        "seed": cli.seed,
    })
}

fn write_report(cli: &Cli, report: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize");
    match &cli.out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let (Some(name), Some(mode)) = (&cli.game, cli.mode) else {
        return Err(Failure::Usage("--game and --mode are required".into()));
    };
    let game = registry::resolve(name).map_err(Failure::Usage)?;
    let outcome = modes::dispatch(cli, mode, &game)?;
    let holds = outcome.assertion.map_or(true, |(_, h)| h);
    let report = json!({
        "schema": REPORT_SCHEMA,
        "versions": { "weakcore": weakcore::VERSION, "cli": env!("CARGO_PKG_VERSION") },
        "inputs": inputs(cli),
        "game_kind": game.kind(),
        "result": outcome.result,
        "assertion": outcome.assertion.map(|(name, holds)| json!({ "name": name, "holds": holds })),
    });
    write_report(cli, &report)?;
    if let Some((name, h)) = outcome.assertion {
        eprintln!("{}: {name} {}", mode.name(), if h { "holds" } else { "FAILS" });
    }
    Ok(holds)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("WEAKCORE_THREADS").ok().and_then(|v| v.parse().ok()) {
        weakcore::par::set_threads(n);
    }
    if cli.list {
        for (name, about) in registry::FIXTURES {
            println!("{name:<18} {about}");
        }
        return ExitCode::SUCCESS;
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

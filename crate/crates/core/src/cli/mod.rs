//! Scenario configs, task runners and figure data behind the `sasc` binary.

mod config;
mod figures;
mod output;
mod tasks;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use log::info;

pub use config::{
    apply_override, canonical_json, config_hash, set_path, DriveConfig, Format, Goal, GridConfig, OutputConfig,
    Scenario, ScenarioConfig, Sweep, SystemConfig, TaskConfig, TaskKind,
};
pub use figures::{builtin, generate, FigureSet, BUILTIN, FIGURE_CONFIGS};
pub use output::{Metadata, Sink, Table};
pub use tasks::run_task;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("unstable: {0}")]
    Unstable(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("oracle comparison failed: {0}")]
    Oracle(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Unstable(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Oracle(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::InvalidParameter(m) => CliError::Config(m),
            e @ crate::Error::Unstable { .. } => CliError::Unstable(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sasc", version, about = "Stokes/anti-Stokes coherence spectra of dispersively coupled modes")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario config (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Dotted-path override applied to the config, e.g. system.modes.0.kappa=0.5.
    #[arg(long = "set", global = true, value_name = "PATH=VALUE")]
    pub set: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed for the stochastic oracle.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transmission, asymmetry and output spectra over the omega grid.
    Spectrum,
    /// Asymmetry factors over coupling phases.
    Asymmetry,
    /// Amplification and SNR spectra.
    Snr,
    /// f-factor map over the two detunings.
    Fmap,
    /// Chain gain scaling.
    Chain,
    /// Time-domain oracle against the predicted spectra.
    Oracle,
    /// Phase or SNR optimization.
    Optimize,
    /// Regenerates figure data from the built-in configs.
    Figures {
        #[arg(value_enum)]
        which: FigureSet,
    },
}

impl Command {
    fn kind(&self) -> Option<TaskKind> {
        Some(match self {
            Command::Spectrum => TaskKind::Spectrum,
            Command::Asymmetry => TaskKind::Asymmetry,
            Command::Snr => TaskKind::Snr,
            Command::Fmap => TaskKind::Fmap,
            Command::Chain => TaskKind::Chain,
            Command::Oracle => TaskKind::Oracle,
            Command::Optimize => TaskKind::Optimize,
            Command::Figures { .. } => return None,
        })
    }
}

/// Loads a config, applies `--set` overrides and fixes the task block.
pub fn load_config(
    path: &std::path::Path,
    overrides: &[String],
    kind: TaskKind,
    seed: Option<u64>,
) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    // a task block built only from overrides takes the subcommand's kind
    if let Some(t) = doc.get_mut("task").and_then(|t| t.as_object_mut()) {
        t.entry("kind").or_insert_with(|| kind.name().into());
    }
    let mut cfg = ScenarioConfig::from_value(doc)?;
    let mut task = match cfg.task.take() {
        Some(t) if t.kind() != kind => {
            return Err(CliError::Config(format!(
                "task.kind is '{}' but '{}' was requested",
                t.kind().name(),
                kind.name()
            )))
        }
        Some(t) => t,
        None => TaskConfig::default_for(kind)?,
    };
    if let (Some(s), TaskConfig::Oracle { seed: ts, .. }) = (seed, &mut task) {
        *ts = s;
    }
    cfg.task = Some(task);
    Ok(cfg)
}

pub fn execute(args: &Args) -> Result<Vec<PathBuf>, CliError> {
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let Some(kind) = args.command.kind() else {
        let Command::Figures { which } = args.command else {
            unreachable!()
        };
        let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
        return generate(which, &dir, args.format.unwrap_or_default());
    };
    let path = args
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("{} needs --config", kind.name())))?;
    let cfg = load_config(path, &args.set, kind, args.seed)?;
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let stem = cfg.output.stem.clone().unwrap_or_else(|| kind.name().to_string());
    let format = args.format.unwrap_or(cfg.output.format);
    let task = cfg.task.clone().expect("load_config sets the task");
    let sc = cfg.resolve()?;
    info!("config sha256 {}", sc.hash);
    let mut sink = Sink::new(dir, stem, format);
    run_task(&sc, &task, &mut sink, None)?;
    Ok(sink.written().to_vec())
}

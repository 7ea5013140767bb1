mod commands;
mod error;
mod io;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use blockcoh::dynamics::{Scenario, SimulationConfig};
use blockcoh::exec::Execution;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, EXIT_OK, EXIT_VALIDATION};

/// Block-coherence measures, ordering analysis and radical-pair dynamics.
#[derive(Debug, Parser)]
#[command(name = "blockcoh", version)]
struct Cli {
    /// Run every batch on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Evaluate one measure on a state file and print a JSON report.
    Measure(MeasureArgs),
    /// Tabulate DIS(alpha) = C_{alpha,1}(rho1) - C_{alpha,1}(rho2).
    Ordering(OrderingArgs),
    /// Random ordering comparisons or the inequality battery.
    Fuzz(FuzzArgs),
    /// Integrate the radical-pair master equation.
    Simulate(SimulateArgs),
    /// Final yields over random pure initial states.
    Batch(BatchArgs),
    /// Re-run the command recorded in a manifest.
    #[serde(skip)]
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest file; defaults to `<out>.manifest.json`, or standard error
    /// when writing to standard output.
    #[arg(long)]
    #[serde(skip)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OptimizerArgs {
    /// Restarts for optimizer-backed measures (the first is a warm start).
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct MeasureArgs {
    /// State file (JSON with `dim`, `re`, `im`, optional `basis`).
    #[arg(long)]
    pub state: PathBuf,
    /// `st`, an index partition like `0|1,2,3`, or a projector JSON file.
    #[arg(long, default_value = "st")]
    pub projectors: String,
    #[arg(long, default_value = "c_alpha_1")]
    pub measure: String,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub z: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OrderingArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub state2: PathBuf,
    #[arg(long, default_value = "st")]
    pub projectors: String,
    /// `default` (4096 points), `table` (0.1, ..., 0.9), a point count, or
    /// `lo:hi:n`.
    #[arg(long, default_value = "default")]
    pub grid: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FuzzArgs {
    /// `battery`, or two closed-form measures such as
    /// `c_l1_tilde,c_rel_entropy` or `c_alpha_1:0.3,c_alpha_1:0.4`.
    #[arg(long, default_value = "c_l1_tilde,c_rel_entropy")]
    pub measure: String,
    /// Pairs compared, or states of each kind for the battery.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `mixed` or `pure` sampling for measure pairs.
    #[arg(long, default_value = "mixed")]
    pub kind: String,
    #[arg(long, default_value = "st")]
    pub projectors: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DynamicsArgs {
    /// `A`, `B`, `C` or `R_only`.
    #[arg(long, default_value = "C")]
    pub scenario: String,
    #[arg(long, default_value_t = SimulationConfig::default().omega1)]
    pub omega1: f64,
    #[arg(long, default_value_t = SimulationConfig::default().omega2)]
    pub omega2: f64,
    #[arg(long, default_value_t = SimulationConfig::default().k_s)]
    pub ks: f64,
    #[arg(long, default_value_t = SimulationConfig::default().k_t)]
    pub kt: f64,
    /// Order of the coherence measure driving recombination.
    #[arg(long, default_value_t = SimulationConfig::default().alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = SimulationConfig::default().dt)]
    pub dt: f64,
    #[arg(long, default_value_t = SimulationConfig::default().t_end)]
    pub t_end: f64,
    #[arg(long, default_value_t = SimulationConfig::default().stride)]
    pub stride: usize,
}

impl DynamicsArgs {
    pub fn config(&self) -> Result<SimulationConfig, CliError> {
        let scenario: Scenario = self.scenario.parse()?;
        let cfg = SimulationConfig {
            omega1: self.omega1,
            omega2: self.omega2,
            k_s: self.ks,
            k_t: self.kt,
            alpha: self.alpha,
            scenario,
            t_end: self.t_end,
            dt: self.dt,
            stride: self.stride,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Initial state label: `S`, `T1`, `T0`, `T-1` or sums like `S+T0`.
    #[arg(long, default_value = "S", conflicts_with = "state")]
    pub initial: String,
    /// Initial state file instead of a label.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BatchArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use this initial state for every row instead of random pure states.
    #[arg(long)]
    pub initial: Option<String>,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write to this file instead of the recorded output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.exit_code() == 0 { EXIT_OK } else { EXIT_VALIDATION });
        }
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match commands::run(cli.command, exec) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stackplan_core::analysis::SweepMode;
use stackplan_core::provision::{CorePolicy, Mode};
use stackplan_core::units::{Bytes, Seconds, Watts};

#[derive(Debug, Parser)]
#[command(name = "stackplan", version, about = "Size and compare in-memory analytics clusters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Provision one system and print its design and metrics.
    Evaluate(EvaluateArgs),
    /// Provision systems across a range of one variable; CSV by default.
    Sweep(SweepArgs),
    /// Find the SLA at which two systems draw equal power.
    Crossover(CrossoverArgs),
    /// Energy per query or power composition of every system.
    Report(ReportArgs),
    /// Print the effective configuration as a JSON config document.
    Presets(PresetsArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Full,
    Matched,
}

impl From<Policy> for CorePolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Full => CorePolicy::Full,
            Policy::Matched => CorePolicy::Matched,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Performance,
    Power,
    Capacity,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Performance => Mode::Performance,
            ModeArg::Power => Mode::Power,
            ModeArg::Capacity => Mode::Capacity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepModeArg {
    Performance,
    Power,
    Capacity,
    MemoryWall,
}

impl From<SweepModeArg> for SweepMode {
    fn from(m: SweepModeArg) -> Self {
        match m {
            SweepModeArg::Performance => SweepMode::Performance,
            SweepModeArg::Power => SweepMode::Power,
            SweepModeArg::Capacity => SweepMode::Capacity,
            SweepModeArg::MemoryWall => SweepMode::MemoryWall,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VarArg {
    Sla,
    #[value(alias = "power-budget")]
    Budget,
    DbSize,
    #[value(alias = "percent-accessed")]
    Accessed,
    #[value(alias = "fraction-read")]
    Fraction,
}

/// Inputs shared by every modelling command.
#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// JSON config document layered over the built-in presets.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Database size, e.g. 16TB.
    #[arg(long, value_name = "SIZE")]
    pub db_size: Option<Bytes>,
    /// Percent of the database read per query.
    #[arg(long, value_name = "PERCENT")]
    pub accessed: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Response-time target for performance mode, e.g. 10ms.
    #[arg(long)]
    pub sla: Option<Seconds>,
    /// Power budget for power mode, e.g. 1MW.
    #[arg(long)]
    pub budget: Option<Watts>,
    #[arg(long, value_enum, default_value = "full")]
    pub core_policy: Policy,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub var: VarArg,
    /// Comma-separated values, e.g. 10ms,100ms,1s.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "log_range", required_unless_present = "log_range")]
    pub values: Option<String>,
    /// Log-spaced values as start:stop:points, e.g. 1e-4:1:50.
    #[arg(long)]
    pub log_range: Option<String>,
    /// Comma-separated system names; all systems when omitted.
    #[arg(long, value_delimiter = ',')]
    pub systems: Option<Vec<String>>,
    /// Defaults to the mode the variable implies.
    #[arg(long, value_enum)]
    pub mode: Option<SweepModeArg>,
    #[arg(long)]
    pub sla: Option<Seconds>,
    #[arg(long)]
    pub budget: Option<Watts>,
    #[arg(long, value_enum, default_value = "full")]
    pub core_policy: Policy,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CrossoverArgs {
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    /// Percent accessed for this search only.
    #[arg(long)]
    pub accessed_percent: Option<f64>,
    /// Multiplies main-memory module capacity on both systems.
    #[arg(long, default_value_t = 1.0)]
    pub density_factor: f64,
    /// Multiplies per-core power.
    #[arg(long, default_value_t = 1.0)]
    pub core_power_factor: f64,
    /// SLA search range as lo:hi.
    #[arg(long, default_value = "1ms:10s")]
    pub range: String,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(value_enum)]
    pub kind: ReportKind,
    /// Power budget for the breakdown report.
    #[arg(long, default_value = "1MW")]
    pub budget: Watts,
    #[arg(long, value_enum, default_value = "full")]
    pub core_policy: Policy,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Energy,
    Breakdown,
}

#[derive(Debug, Args)]
pub struct PresetsArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Address to listen on, e.g. 127.0.0.1:8080. Port 0 picks a free port.
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub listen: String,
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Browser origin allowed to call the service.
    #[arg(long)]
    pub cors_origin: Option<String>,
}

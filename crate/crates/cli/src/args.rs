use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eee_core::analyzer::LpiAccounting;
use eee_core::{Nanos, Preset};

/// Energy Efficient Ethernet low power idle: models, simulation, coalescer tuning and trace analysis.
#[derive(Debug, Parser)]
#[command(name = "eee", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the analytic sleeping-time models over a parameter grid.
    Model(ModelArgs),
    /// Run replicated simulations over a parameter grid.
    Sim(SimArgs),
    /// Pick a coalescer bunch length, or the wake delay matching one.
    Tune(TuneArgs),
    /// Pass a trace through the coalescer and write the release times.
    Coalesce(CoalesceArgs),
    /// Estimate LPI statistics from a departure trace and an LPI event count.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args, Default)]
pub struct LinkArgs {
    /// TOML config file; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Link capacity in b/s.
    #[arg(long, value_name = "BPS")]
    pub capacity: Option<f64>,
    #[arg(long, value_name = "DURATION")]
    pub t_sleep: Option<Nanos>,
    #[arg(long, value_name = "DURATION")]
    pub t_wake: Option<Nanos>,
    /// LPI power relative to active power.
    #[arg(long, value_name = "FRACTION")]
    pub sigma_lpi: Option<f64>,
    #[arg(long, value_name = "BITS")]
    pub frame_bits: Option<u64>,
}

#[derive(Debug, Args, Default)]
pub struct EeeArgs {
    /// aggressive (20us, 6us), non-aggressive (600us, 6us) or frame-tx (0, 0).
    #[arg(long)]
    pub preset: Option<Preset>,
    /// Hysteresis h*, a duration grid.
    #[arg(long = "h", value_name = "GRID")]
    pub h: Option<String>,
    /// Wake delay d, a duration grid.
    #[arg(long = "d", value_name = "GRID")]
    pub d: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessKind {
    Poisson,
    Pareto,
    Periodic,
}

#[derive(Debug, Args, Default)]
pub struct TrafficArgs {
    /// Offered load ρ, a grid such as 0.01,0.1 or log:0.001:0.5:20.
    #[arg(long, value_name = "GRID")]
    pub load: Option<String>,
    #[arg(long, value_enum)]
    pub process: Option<ProcessKind>,
    /// Pareto shape.
    #[arg(long)]
    pub alpha: Option<f64>,
}

/// Bunch length derived per grid point from the tuner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BunchRule {
    /// h*/δ.
    IdealBound,
    /// Exact load-independent bound for δ.
    IdealBoundExact,
    /// Exact value at the point's load for δ.
    Ideal,
    /// Matches the frame-transmission sleeping fraction at the point's load.
    FrameTx,
}

#[derive(Debug, Args, Default)]
pub struct CoalescerArgs {
    /// Coalescer bunch length B, a duration grid. Omit for no coalescer.
    #[arg(long, value_name = "GRID", conflicts_with = "bunch_rule")]
    pub bunch: Option<String>,
    /// Derive B from the tuner at every point instead of sweeping it.
    #[arg(long, value_enum)]
    pub bunch_rule: Option<BunchRule>,
    /// Tolerance δ for the ideal rules.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Coalescer to NIC propagation delay.
    #[arg(long, value_name = "DURATION")]
    pub propagation: Option<Nanos>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// coalesced when a bunch is given, hyst-delay otherwise.
    Auto,
    HystDelay,
    FrameTx,
    /// Closed form with λB frames per bunch.
    Coalesced,
    /// Renewal form that also counts the frame opening each bunch.
    CoalescedRenewal,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[command(flatten)]
    pub link: LinkArgs,
    #[command(flatten)]
    pub eee: EeeArgs,
    #[command(flatten)]
    pub traffic: TrafficArgs,
    #[command(flatten)]
    pub coalescer: CoalescerArgs,
    /// CSV destination; stdout when omitted.
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub link: LinkArgs,
    #[command(flatten)]
    pub eee: EeeArgs,
    #[command(flatten)]
    pub traffic: TrafficArgs,
    #[command(flatten)]
    pub coalescer: CoalescerArgs,
    /// Simulate this trace instead of generated traffic.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["load", "process", "alpha"])]
    pub trace: Option<PathBuf>,
    /// Frames per replication.
    #[arg(long)]
    pub frames: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Replication i uses seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Write the departure trace of the first replication (single-point grids only).
    #[arg(long, value_name = "PATH")]
    pub departures_out: Option<PathBuf>,
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TuneTarget {
    /// Sleep within δ of the ideal 1 − ρ. Without --load, the bound over all loads.
    Ideal,
    /// Sleep as much as frame transmission mode at --load.
    FrameTx,
    /// Wake delay giving the same sleep as coalescing with --bunch.
    Delay,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(value_enum)]
    pub target: TuneTarget,
    #[command(flatten)]
    pub link: LinkArgs,
    #[command(flatten)]
    pub eee: EeeArgs,
    /// Load grid.
    #[arg(long, value_name = "GRID")]
    pub load: Option<String>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Bunch length grid (delay target).
    #[arg(long, value_name = "GRID")]
    pub bunch: Option<String>,
    /// CSV instead of the text report.
    #[arg(long)]
    pub csv: bool,
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoalesceArgs {
    /// Input trace.
    pub input: PathBuf,
    #[arg(long, value_name = "DURATION")]
    pub bunch: Nanos,
    #[command(flatten)]
    pub link: LinkArgs,
    /// Output trace; stdout when omitted.
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Accounting {
    KeepDelay,
    SubtractDelay,
}

impl From<Accounting> for LpiAccounting {
    fn from(a: Accounting) -> Self {
        match a {
            Accounting::KeepDelay => LpiAccounting::KeepDelay,
            Accounting::SubtractDelay => LpiAccounting::SubtractDelay,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Departure trace.
    pub trace: PathBuf,
    /// LPI entries reported by the sender. Defaults to the `# lpi_events` line
    /// written by `sim --departures-out`.
    #[arg(long)]
    pub events: Option<usize>,
    #[arg(long, value_enum, default_value = "keep-delay")]
    pub accounting: Accounting,
    #[command(flatten)]
    pub link: LinkArgs,
    #[command(flatten)]
    pub eee: EeeArgs,
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

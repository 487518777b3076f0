//! Config files and the precedence flags > config file > preset > defaults.
//!
//! Config file schema (every key optional):
//!
//! ```toml
//! preset = "aggressive"          # aggressive | non-aggressive | frame-tx
//! model = "coalesced"            # model command only
//!
//! [link]
//! capacity = 10e9                # b/s
//! t_sleep = "2.88us"
//! t_wake = "4.48us"
//! sigma_lpi = 0.1
//!
//! [eee]
//! h = ["0", "20us", "600us"]     # grids: a list, or one grid string
//! d = "6us"
//!
//! [traffic]
//! process = "poisson"            # poisson | pareto | periodic
//! alpha = 1.8
//! load = "log:0.001:0.5:20"
//! frame_bits = 12000
//!
//! [coalescer]
//! bunch = ["200us", "1ms"]
//! bunch_rule = "ideal-bound"     # instead of bunch
//! delta = 0.1
//! propagation = "0"
//!
//! [sim]
//! frames = 100000
//! reps = 20
//! seed = 1
//! jobs = 0
//! ```

use std::path::Path;

use clap::ValueEnum;
use eee_core::config::{DEFAULT_FRAME_BITS, DEFAULT_PARETO_ALPHA};
use eee_core::tuner::DEFAULT_DELTA;
use eee_core::{LinkConfig, Nanos, Preset};
use serde::Deserialize;

use crate::args::{BunchRule, CoalescerArgs, EeeArgs, LinkArgs, ModelKind, ProcessKind, TrafficArgs};
use crate::error::{input, CliError};
use crate::grid;

pub const DEFAULT_FRAMES: usize = 100_000;
pub const DEFAULT_REPS: usize = 20;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub model: Option<String>,
    #[serde(default)]
    pub link: LinkSection,
    #[serde(default)]
    pub eee: EeeSection,
    #[serde(default)]
    pub traffic: TrafficSection,
    #[serde(default)]
    pub coalescer: CoalescerSection,
    #[serde(default)]
    pub sim: SimSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub capacity: Option<f64>,
    pub t_sleep: Option<String>,
    pub t_wake: Option<String>,
    pub sigma_lpi: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EeeSection {
    pub h: Option<GridValue>,
    pub d: Option<GridValue>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficSection {
    pub process: Option<String>,
    pub alpha: Option<f64>,
    pub load: Option<GridValue>,
    pub frame_bits: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalescerSection {
    pub bunch: Option<GridValue>,
    pub bunch_rule: Option<String>,
    pub delta: Option<f64>,
    pub propagation: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub frames: Option<usize>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Text(String),
    Number(f64),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    One(Scalar),
    Many(Vec<Scalar>),
}

impl Scalar {
    fn spec(&self) -> String {
        match self {
            Scalar::Text(s) => s.clone(),
            Scalar::Number(v) => v.to_string(),
        }
    }
}

impl GridValue {
    /// Grid string understood by [`grid`].
    fn spec(&self) -> String {
        match self {
            GridValue::One(s) => s.spec(),
            GridValue::Many(v) => v.iter().map(Scalar::spec).collect::<Vec<_>>().join(","),
        }
    }
}

pub fn load_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io(eee_core::Error::Io { path: path.to_owned(), source }))?;
    toml::from_str(&text).map_err(|source| CliError::Config { path: path.to_owned(), source })
}

fn duration(s: &str) -> Result<Nanos, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn enum_value<T: ValueEnum>(key: &str, s: &str) -> Result<T, CliError> {
    T::from_str(s, true).map_err(|_| CliError::usage(format!("unknown {key} '{s}'")))
}

pub fn link(args: &LinkArgs, file: &FileConfig) -> Result<(LinkConfig, u64), CliError> {
    let d = LinkConfig::ten_gig();
    let f = &file.link;
    let t_sleep = match (args.t_sleep, &f.t_sleep) {
        (Some(t), _) => t,
        (None, Some(s)) => duration(s)?,
        (None, None) => d.t_sleep,
    };
    let t_wake = match (args.t_wake, &f.t_wake) {
        (Some(t), _) => t,
        (None, Some(s)) => duration(s)?,
        (None, None) => d.t_wake,
    };
    let link = LinkConfig::new(
        args.capacity.or(f.capacity).unwrap_or(d.capacity_bps),
        t_sleep,
        t_wake,
        args.sigma_lpi.or(f.sigma_lpi).unwrap_or(d.sigma_lpi),
    )
    .map_err(input)?;
    let frame_bits = args.frame_bits.or(file.traffic.frame_bits).unwrap_or(DEFAULT_FRAME_BITS);
    if frame_bits == 0 {
        return Err(CliError::usage("frame size must be positive"));
    }
    Ok((link, frame_bits))
}

/// Hysteresis and wake delay grids.
pub fn eee(args: &EeeArgs, file: &FileConfig) -> Result<(Vec<Nanos>, Vec<Nanos>), CliError> {
    let preset = match (args.preset, &file.preset) {
        (Some(p), _) => Some(p),
        (None, Some(s)) => Some(s.parse::<Preset>().map_err(CliError::Usage)?),
        (None, None) => None,
    };
    let base = preset.map(Preset::eee);
    let pick =
        |flag: &Option<String>, cfg: &Option<GridValue>, preset: Option<Nanos>| -> Result<Vec<Nanos>, CliError> {
            match (flag, cfg) {
                (Some(s), _) => grid::durations(s),
                (None, Some(g)) => grid::durations(&g.spec()),
                (None, None) => Ok(vec![preset.unwrap_or(Nanos::ZERO)]),
            }
        };
    Ok((
        pick(&args.h, &file.eee.h, base.map(|e| e.hysteresis))?,
        pick(&args.d, &file.eee.d, base.map(|e| e.wake_delay))?,
    ))
}

/// A single (h*, d) pair, for commands that do not sweep.
pub fn single_eee(args: &EeeArgs, file: &FileConfig) -> Result<eee_core::EeeConfig, CliError> {
    let (h, d) = eee(args, file)?;
    match (h.as_slice(), d.as_slice()) {
        ([h], [d]) => Ok(eee_core::EeeConfig::new(*h, *d)),
        _ => Err(CliError::usage("this command takes a single h* and d")),
    }
}

pub struct Traffic {
    pub process: ProcessKind,
    pub alpha: f64,
    pub loads: Option<Vec<f64>>,
}

pub fn traffic(args: &TrafficArgs, file: &FileConfig) -> Result<Traffic, CliError> {
    let f = &file.traffic;
    let process = match (args.process, &f.process) {
        (Some(p), _) => p,
        (None, Some(s)) => enum_value("process", s)?,
        (None, None) => ProcessKind::Poisson,
    };
    let loads = match (&args.load, &f.load) {
        (Some(s), _) => Some(grid::numbers(s)?),
        (None, Some(g)) => Some(grid::numbers(&g.spec())?),
        (None, None) => None,
    };
    Ok(Traffic { process, alpha: args.alpha.or(f.alpha).unwrap_or(DEFAULT_PARETO_ALPHA), loads })
}

/// How the bunch length of each point is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum Bunching {
    None,
    Grid(Vec<Nanos>),
    Rule(BunchRule),
}

pub struct Coalescer {
    pub bunching: Bunching,
    pub delta: f64,
    pub propagation: Nanos,
}

pub fn coalescer(args: &CoalescerArgs, file: &FileConfig) -> Result<Coalescer, CliError> {
    let f = &file.coalescer;
    let bunching = if let Some(s) = &args.bunch {
        Bunching::Grid(grid::durations(s)?)
    } else if let Some(r) = args.bunch_rule {
        Bunching::Rule(r)
    } else {
        match (&f.bunch, &f.bunch_rule) {
            (Some(_), Some(_)) => {
                return Err(CliError::usage("config sets both coalescer.bunch and coalescer.bunch_rule"))
            }
            (Some(g), None) => Bunching::Grid(grid::durations(&g.spec())?),
            (None, Some(r)) => Bunching::Rule(enum_value("bunch rule", r)?),
            (None, None) => Bunching::None,
        }
    };
    let propagation = match (args.propagation, &f.propagation) {
        (Some(p), _) => p,
        (None, Some(s)) => duration(s)?,
        (None, None) => Nanos::ZERO,
    };
    Ok(Coalescer { bunching, delta: args.delta.or(f.delta).unwrap_or(DEFAULT_DELTA), propagation })
}

pub fn model_kind(flag: Option<ModelKind>, file: &FileConfig) -> Result<ModelKind, CliError> {
    match (flag, &file.model) {
        (Some(m), _) => Ok(m),
        (None, Some(s)) => enum_value("model", s),
        (None, None) => Ok(ModelKind::Auto),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> FileConfig {
        toml::from_str(text).unwrap()
    }

    #[test]
    fn flags_beat_config_beat_preset() {
        let file = parse("preset = \"aggressive\"\n[eee]\nd = \"10us\"\n");
        let (h, d) = eee(&EeeArgs::default(), &file).unwrap();
        assert_eq!((h, d), (vec![Nanos::from_micros(20)], vec![Nanos::from_micros(10)]));

        let args = EeeArgs { d: Some("1us".into()), ..EeeArgs::default() };
        assert_eq!(eee(&args, &file).unwrap().1, vec![Nanos::from_micros(1)]);

        // A preset on the command line still loses to explicit config values.
        let args = EeeArgs { preset: Some(Preset::NonAggressive), ..EeeArgs::default() };
        let (h, d) = eee(&args, &file).unwrap();
        assert_eq!((h, d), (vec![Nanos::from_micros(600)], vec![Nanos::from_micros(10)]));
    }

    #[test]
    fn defaults_without_anything() {
        let file = FileConfig::default();
        assert_eq!(eee(&EeeArgs::default(), &file).unwrap(), (vec![Nanos::ZERO], vec![Nanos::ZERO]));
        let (l, bits) = link(&LinkArgs::default(), &file).unwrap();
        assert_eq!((l, bits), (LinkConfig::ten_gig(), 12_000));
        let t = traffic(&TrafficArgs::default(), &file).unwrap();
        assert_eq!((t.process, t.alpha, t.loads), (ProcessKind::Poisson, 1.8, None));
    }

    #[test]
    fn grids_in_config() {
        let file =
            parse("[traffic]\nload = [0.01, 0.1]\nprocess = \"pareto\"\n[coalescer]\nbunch = \"log:10us:1ms:3\"\n");
        let t = traffic(&TrafficArgs::default(), &file).unwrap();
        assert_eq!(t.loads, Some(vec![0.01, 0.1]));
        assert_eq!(t.process, ProcessKind::Pareto);
        let c = coalescer(&CoalescerArgs::default(), &file).unwrap();
        assert_eq!(c.bunching, Bunching::Grid(vec![Nanos(10_000), Nanos(100_000), Nanos(1_000_000)]));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("[eee]\nhysteresis = \"1us\"\n").is_err());
    }
}

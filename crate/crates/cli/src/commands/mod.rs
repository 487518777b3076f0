pub mod model;
pub mod sim;
pub mod trace;
pub mod tune;

use eee_core::tuner::{bunch_bound_ideal, bunch_for_ideal, bunch_match_frame_tx};
use eee_core::{EeeConfig, LinkConfig, Load, Nanos, TrafficSpec};

use crate::args::{BunchRule, ProcessKind};
use crate::error::{domain, input, CliError};
use crate::output::num;
use crate::settings::{Bunching, Traffic};

/// One grid point. Grids nest as h*, d, bunch, load with load innermost.
#[derive(Clone, Copy, Debug)]
pub struct Point {
    pub eee: EeeConfig,
    pub bunch: Option<Nanos>,
    pub load: Option<f64>,
}

pub fn points(hs: &[Nanos], ds: &[Nanos], bunching: &Bunching, loads: Option<&[f64]>) -> Vec<Point> {
    let bunches: Vec<Option<Nanos>> = match bunching {
        Bunching::Grid(b) => b.iter().copied().map(Some).collect(),
        _ => vec![None],
    };
    let loads: Vec<Option<f64>> = match loads {
        Some(l) => l.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let mut out = Vec::with_capacity(hs.len() * ds.len() * bunches.len() * loads.len());
    for &h in hs {
        for &d in ds {
            for &bunch in &bunches {
                for &load in &loads {
                    out.push(Point { eee: EeeConfig::new(h, d), bunch, load });
                }
            }
        }
    }
    out
}

pub fn check_loads(loads: Option<&[f64]>) -> Result<(), CliError> {
    for &rho in loads.unwrap_or_default() {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(CliError::usage(format!("load {rho} is outside (0, 1)")));
        }
    }
    Ok(())
}

pub fn require_load(p: &Point) -> Result<f64, CliError> {
    p.load.ok_or_else(|| CliError::usage("--load is required"))
}

pub fn to_load(rho: f64, link: &LinkConfig, frame_bits: u64) -> Result<Load, CliError> {
    Load::from_rho(rho, link, frame_bits).map_err(input)
}

pub fn traffic_spec(t: &Traffic, rho: f64, link: &LinkConfig, frame_bits: u64) -> Result<TrafficSpec, CliError> {
    match t.process {
        ProcessKind::Poisson => TrafficSpec::poisson(rho, link, frame_bits),
        ProcessKind::Pareto => TrafficSpec::pareto(t.alpha, rho, link, frame_bits),
        ProcessKind::Periodic => Nanos::from_secs_f64(frame_bits as f64 / (rho * link.capacity_bps))
            .map(|period| TrafficSpec::periodic(period, frame_bits)),
    }
    .map_err(input)
}

/// Bunch length of a point: from the grid, or from the tuner for rules.
pub fn bunch_of(
    p: &Point,
    bunching: &Bunching,
    delta: f64,
    link: &LinkConfig,
    frame_bits: u64,
) -> Result<Option<Nanos>, CliError> {
    let rule = match bunching {
        Bunching::None => return Ok(None),
        Bunching::Grid(_) => return Ok(p.bunch),
        Bunching::Rule(r) => *r,
    };
    let load = || -> Result<Load, CliError> {
        let rho = p.load.ok_or_else(|| CliError::usage("this bunch rule needs a load"))?;
        to_load(rho, link, frame_bits)
    };
    let secs = match rule {
        BunchRule::IdealBound => bunch_bound_ideal(&p.eee, link, frame_bits, delta).map_err(domain)?.bunch_approx,
        BunchRule::IdealBoundExact => bunch_bound_ideal(&p.eee, link, frame_bits, delta).map_err(domain)?.bunch_exact,
        BunchRule::Ideal => bunch_for_ideal(load()?, &p.eee, link, delta).map_err(domain)?,
        BunchRule::FrameTx => bunch_match_frame_tx(load()?, &p.eee, link).bunch_exact,
    };
    Nanos::from_secs_f64(secs).map(Some).map_err(domain)
}

pub fn alpha_column(t: &Traffic) -> String {
    match t.process {
        ProcessKind::Pareto => num(t.alpha),
        _ => String::new(),
    }
}

pub fn process_name(p: ProcessKind) -> &'static str {
    match p {
        ProcessKind::Poisson => "poisson",
        ProcessKind::Pareto => "pareto",
        ProcessKind::Periodic => "periodic",
    }
}

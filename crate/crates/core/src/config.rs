//! Domain types shared by every module: interface constants, governing
//! algorithm knobs, traffic descriptions and the pre-coalescer settings.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{check_positive, check_range, Error, Result};
use crate::units::Nanos;

/// Bits in a 1500-byte frame, the frame size used throughout the experiments.
pub const DEFAULT_FRAME_BITS: u64 = 1500 * 8;

/// Default Pareto shape: heavy tailed with infinite variance.
pub const DEFAULT_PARETO_ALPHA: f64 = 1.8;

/// Physical constants of an EEE interface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkConfig {
    /// Line rate in bits per second.
    pub capacity_bps: f64,
    /// Active to LPI transition time (T_S).
    pub t_sleep: Nanos,
    /// LPI to active transition time (T_W).
    pub t_wake: Nanos,
    /// Power drawn in LPI as a fraction of nominal power.
    pub sigma_lpi: f64,
}

impl LinkConfig {
    pub fn new(capacity_bps: f64, t_sleep: Nanos, t_wake: Nanos, sigma_lpi: f64) -> Result<Self> {
        check_positive("capacity", capacity_bps)?;
        if !(0.0..1.0).contains(&sigma_lpi) {
            return Err(Error::invalid("sigma_lpi", format!("{sigma_lpi} is outside [0, 1)")));
        }
        Ok(LinkConfig { capacity_bps, t_sleep, t_wake, sigma_lpi })
    }

    /// 10 Gb/s with the 802.3az transition times (2.88 µs / 4.48 µs) and an
    /// LPI mode drawing 10% of nominal power.
    pub fn ten_gig() -> Self {
        LinkConfig { capacity_bps: 10e9, t_sleep: Nanos(2_880), t_wake: Nanos(4_480), sigma_lpi: 0.1 }
    }

    /// Time to put `bits` on the wire, in seconds.
    pub fn service_secs(&self, bits: u64) -> f64 {
        bits as f64 / self.capacity_bps
    }

    /// Time to put `bits` on the wire, rounded to the nanosecond clock.
    pub fn service_time(&self, bits: u64) -> Nanos {
        Nanos((bits as f64 * 1e9 / self.capacity_bps).round() as u64)
    }

    pub fn ts(&self) -> f64 {
        self.t_sleep.as_secs_f64()
    }

    pub fn tw(&self) -> f64 {
        self.t_wake.as_secs_f64()
    }

    /// T_S + T_W in seconds.
    pub fn transitions(&self) -> f64 {
        self.ts() + self.tw()
    }
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig::ten_gig()
    }
}

/// Knobs of the governing algorithm inside the NIC.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EeeConfig {
    /// Time the queue must stay empty before the sleep transition starts (h*).
    pub hysteresis: Nanos,
    /// Time from the first arrival in LPI until the wake transition starts (d).
    pub wake_delay: Nanos,
}

impl EeeConfig {
    pub const fn new(hysteresis: Nanos, wake_delay: Nanos) -> Self {
        EeeConfig { hysteresis, wake_delay }
    }

    /// Sleep as soon as the queue empties, wake on the first arrival.
    pub const fn frame_transmission() -> Self {
        EeeConfig::new(Nanos::ZERO, Nanos::ZERO)
    }

    pub fn h_star(&self) -> f64 {
        self.hysteresis.as_secs_f64()
    }

    pub fn d(&self) -> f64 {
        self.wake_delay.as_secs_f64()
    }
}

/// Vendor-style configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// h* = 20 µs, d = 6 µs.
    Aggressive,
    /// h* = 600 µs, d = 6 µs.
    NonAggressive,
    /// h* = 0, d = 0.
    FrameTransmission,
}

impl Preset {
    pub fn eee(self) -> EeeConfig {
        match self {
            Preset::Aggressive => EeeConfig::new(Nanos::from_micros(20), Nanos::from_micros(6)),
            Preset::NonAggressive => EeeConfig::new(Nanos::from_micros(600), Nanos::from_micros(6)),
            Preset::FrameTransmission => EeeConfig::frame_transmission(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Aggressive => "aggressive",
            Preset::NonAggressive => "non-aggressive",
            Preset::FrameTransmission => "frame-tx",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "aggressive" => Ok(Preset::Aggressive),
            "non-aggressive" | "nonaggressive" | "conservative" => Ok(Preset::NonAggressive),
            "frame-tx" | "frame-transmission" => Ok(Preset::FrameTransmission),
            _ => Err(Error::invalid("preset", format!("unknown preset '{s}'"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Arrival rate paired with the load it produces on a given link.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Load {
    /// Frames per second (λ).
    pub rate: f64,
    /// Offered load λ·L/C.
    pub rho: f64,
}

impl Load {
    pub fn from_rho(rho: f64, link: &LinkConfig, frame_bits: u64) -> Result<Self> {
        Ok(Load { rate: lambda_from_load(rho, link, frame_bits)?, rho })
    }

    pub fn from_rate(rate: f64, link: &LinkConfig, frame_bits: u64) -> Result<Self> {
        Ok(Load { rate, rho: load_from_lambda(rate, link, frame_bits)? })
    }

    /// Mean interarrival time 1/λ in seconds.
    pub fn mean_gap(&self) -> f64 {
        1.0 / self.rate
    }
}

/// λ = ρ·C/L.
pub fn lambda_from_load(rho: f64, link: &LinkConfig, frame_bits: u64) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0 && rho <= 1.0) {
        return Err(Error::invalid("load", format!("{rho} is outside (0, 1]")));
    }
    if frame_bits == 0 {
        return Err(Error::invalid("frame size", "must be positive"));
    }
    Ok(rho * link.capacity_bps / frame_bits as f64)
}

/// ρ = λ·L/C.
pub fn load_from_lambda(lambda: f64, link: &LinkConfig, frame_bits: u64) -> Result<f64> {
    check_positive("arrival rate", lambda)?;
    if frame_bits == 0 {
        return Err(Error::invalid("frame size", "must be positive"));
    }
    Ok(lambda * frame_bits as f64 / link.capacity_bps)
}

/// Arrival process families understood by the generators and the models.
#[derive(Clone, Debug, PartialEq)]
pub enum ArrivalProcess {
    Poisson {
        rate: f64,
    },
    /// Renewal process with Pareto interarrivals whose mean is 1/rate.
    Pareto {
        alpha: f64,
        rate: f64,
    },
    Periodic {
        period: Nanos,
    },
    Trace(PathBuf),
}

impl ArrivalProcess {
    pub fn name(&self) -> &'static str {
        match self {
            ArrivalProcess::Poisson { .. } => "poisson",
            ArrivalProcess::Pareto { .. } => "pareto",
            ArrivalProcess::Periodic { .. } => "periodic",
            ArrivalProcess::Trace(_) => "trace",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrafficSpec {
    pub frame_bits: u64,
    pub process: ArrivalProcess,
}

impl TrafficSpec {
    pub fn poisson(load: f64, link: &LinkConfig, frame_bits: u64) -> Result<Self> {
        check_open_load(load)?;
        let rate = lambda_from_load(load, link, frame_bits)?;
        Ok(TrafficSpec { frame_bits, process: ArrivalProcess::Poisson { rate } })
    }

    pub fn pareto(alpha: f64, load: f64, link: &LinkConfig, frame_bits: u64) -> Result<Self> {
        check_open_load(load)?;
        let rate = lambda_from_load(load, link, frame_bits)?;
        Ok(TrafficSpec { frame_bits, process: ArrivalProcess::Pareto { alpha, rate } })
    }

    pub fn periodic(period: Nanos, frame_bits: u64) -> Self {
        TrafficSpec { frame_bits, process: ArrivalProcess::Periodic { period } }
    }

    pub fn rate(&self) -> Option<f64> {
        match &self.process {
            ArrivalProcess::Poisson { rate } | ArrivalProcess::Pareto { rate, .. } => Some(*rate),
            ArrivalProcess::Periodic { period } if !period.is_zero() => Some(1.0 / period.as_secs_f64()),
            _ => None,
        }
    }

    /// Rate and load on `link`. Traces have no a-priori rate.
    pub fn load(&self, link: &LinkConfig) -> Result<Load> {
        let rate = self
            .rate()
            .ok_or_else(|| Error::UnsupportedModel(format!("{} traffic has no nominal rate", self.process.name())))?;
        Load::from_rate(rate, link, self.frame_bits)
    }

    /// `Some(load)` only for Poisson traffic, the only family with closed forms.
    pub fn poisson_load(&self, link: &LinkConfig) -> Result<Load> {
        match self.process {
            ArrivalProcess::Poisson { .. } => {
                let load = self.load(link)?;
                check_open_load(load.rho)?;
                Ok(load)
            }
            _ => Err(Error::UnsupportedModel(format!(
                "closed forms assume Poisson arrivals, got {} (use the simulator)",
                self.process.name()
            ))),
        }
    }
}

fn check_open_load(rho: f64) -> Result<f64> {
    if rho.is_finite() && rho > 0.0 && rho < 1.0 {
        Ok(rho)
    } else {
        Err(Error::invalid("load", format!("{rho} is outside (0, 1)")))
    }
}

/// Settings of the pre-coalescer placed in front of the NIC.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoalescerConfig {
    /// Time the coalescer holds the first frame of a bunch (B).
    pub bunch: Nanos,
    /// Coalescer to NIC propagation delay (τ).
    pub propagation: Nanos,
}

impl CoalescerConfig {
    pub const fn new(bunch: Nanos) -> Self {
        CoalescerConfig { bunch, propagation: Nanos::ZERO }
    }

    pub fn b(&self) -> f64 {
        self.bunch.as_secs_f64()
    }
}

/// δ must lie in (0, 1]; δ = 1 is the degenerate "any consumption" target.
pub(crate) fn check_delta(delta: f64) -> Result<f64> {
    if delta.is_finite() && delta > 0.0 {
        check_range("delta", delta, 0.0, 1.0)
    } else {
        Err(Error::invalid("delta", format!("{delta} is outside (0, 1]")))
    }
}

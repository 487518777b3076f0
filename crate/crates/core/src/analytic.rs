//! Closed-form sleeping-time, energy and delay models under Poisson arrivals.
//!
//! All functions here take and return SI units as `f64` (seconds, frames per
//! second). The configuration-level entry points accept the typed configs
//! and convert once at the boundary.

use std::fmt;

use crate::config::{CoalescerConfig, EeeConfig, LinkConfig, Load, TrafficSpec};
use crate::error::{check_non_negative, check_positive, check_range, Error, Result};

/// Largest λ·h* for which `e^(λ·h*)` is evaluated.
pub const MAX_EXPONENT: f64 = 700.0;

/// Output of the hysteresis + wake-delay model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelResult {
    /// Normalized sleeping time ρ_LPI.
    pub rho_lpi: f64,
    /// Normalized energy consumption σ.
    pub sigma: f64,
    /// E[T_LPI] in seconds.
    pub exp_tlpi: f64,
    /// E[n], hysteresis intervals per cycle.
    pub exp_n: f64,
    /// E[h] in seconds.
    pub exp_h: f64,
    /// E[T_cycle] in seconds.
    pub exp_tcycle: Option<f64>,
}

/// Why a pre-coalescing prediction does not apply.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Violation {
    /// The NIC wake delay is not shorter than the bunch length.
    DelayNotBelowBunch { d: f64, bunch: f64 },
    /// E[e] + B ≤ T_W + h*: the NIC cannot follow the coalescer cycles.
    Desynchronized { gap_plus_bunch: f64, required: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DelayNotBelowBunch { d, bunch } => {
                write!(f, "wake delay {:.3} us is not below bunch length {:.3} us", d * 1e6, bunch * 1e6)
            }
            Violation::Desynchronized { gap_plus_bunch, required } => write!(
                f,
                "E[e] + B = {:.3} us does not exceed T_W + h* = {:.3} us; the NIC loses sync with the coalescer",
                gap_plus_bunch * 1e6,
                required * 1e6
            ),
        }
    }
}

/// A model value that is only meaningful inside its validity region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Prediction {
    Valid(f64),
    OutOfValidity(Violation),
}

impl Prediction {
    pub fn valid(self) -> Option<f64> {
        match self {
            Prediction::Valid(v) => Some(v),
            Prediction::OutOfValidity(_) => None,
        }
    }

    pub fn is_valid(self) -> bool {
        matches!(self, Prediction::Valid(_))
    }

    pub fn into_result(self) -> Result<f64> {
        match self {
            Prediction::Valid(v) => Ok(v),
            Prediction::OutOfValidity(v) => Err(Error::OutOfValidity(v)),
        }
    }
}

/// σ = 1 − (1 − σ_LPI)·ρ_LPI.
pub fn energy_from_sleep(sigma_lpi: f64, rho_lpi: f64) -> Result<f64> {
    check_range("sigma_lpi", sigma_lpi, 0.0, 1.0)?;
    check_range("rho_lpi", rho_lpi, 0.0, 1.0)?;
    Ok(1.0 - (1.0 - sigma_lpi) * rho_lpi)
}

/// E[n] = e^(λh*): mean of the geometric number of hysteresis intervals per
/// cycle, each one failing when an arrival lands inside it.
pub fn expected_n_poisson(lambda: f64, h_star: f64) -> Result<f64> {
    check_positive("arrival rate", lambda)?;
    check_non_negative("hysteresis", h_star)?;
    let exponent = lambda * h_star;
    if exponent > MAX_EXPONENT {
        return Err(Error::Overflow { exponent, limit: MAX_EXPONENT });
    }
    Ok(exponent.exp())
}

/// E[h] = (1 − e^(−λh*))/λ = E[min(I, h*)] for exponential I.
pub fn expected_h_poisson(lambda: f64, h_star: f64) -> Result<f64> {
    check_positive("arrival rate", lambda)?;
    check_non_negative("hysteresis", h_star)?;
    Ok(-(-lambda * h_star).exp_m1() / lambda)
}

/// E[T_LPI] with a wake delay d: the wake transition starts at
/// max(T_S, E + d) after the sleep transition begins, E ~ Exp(λ).
pub fn expected_tlpi_poisson(lambda: f64, d: f64, t_sleep: f64) -> Result<f64> {
    check_positive("arrival rate", lambda)?;
    check_non_negative("wake delay", d)?;
    check_non_negative("sleep transition", t_sleep)?;
    Ok(if d > t_sleep { 1.0 / lambda + d - t_sleep } else { (-lambda * (t_sleep - d)).exp() / lambda })
}

/// Sleeping fraction of a NIC with hysteresis and wake delay fed by Poisson
/// traffic of the given load.
pub fn hyst_delay_model(load: Load, eee: &EeeConfig, link: &LinkConfig) -> Result<ModelResult> {
    let Load { rate, rho } = load;
    check_range("load", rho, 0.0, 1.0)?;
    if rho >= 1.0 {
        return Err(Error::invalid("load", "must be below 1"));
    }
    let exp_n = expected_n_poisson(rate, eee.h_star())?;
    let exp_h = expected_h_poisson(rate, eee.h_star())?;
    let exp_tlpi = expected_tlpi_poisson(rate, eee.d(), link.ts())?;
    let overhead = exp_tlpi + exp_n * exp_h + link.transitions();
    let rho_lpi = (1.0 - rho) * exp_tlpi / overhead;
    Ok(ModelResult {
        rho_lpi,
        sigma: energy_from_sleep(link.sigma_lpi, rho_lpi)?,
        exp_tlpi,
        exp_n,
        exp_h,
        exp_tcycle: Some(overhead / (1.0 - rho)),
    })
}

/// [`hyst_delay_model`] for a traffic description; only Poisson is modeled.
pub fn sleep_fraction_hyst_delay(traffic: &TrafficSpec, eee: &EeeConfig, link: &LinkConfig) -> Result<ModelResult> {
    hyst_delay_model(traffic.poisson_load(link)?, eee, link)
}

/// Frame transmission (h* = d = 0) sleeping fraction for a given load.
pub fn frame_tx_fraction(load: Load, link: &LinkConfig) -> f64 {
    let x = (-load.rate * link.ts()).exp();
    (1.0 - load.rho) * x / (x + load.rate * link.transitions())
}

pub fn sleep_fraction_frame_tx(traffic: &TrafficSpec, link: &LinkConfig) -> Result<f64> {
    Ok(frame_tx_fraction(traffic.poisson_load(link)?, link))
}

/// Checks the conditions under which the NIC stays in step with the coalescer.
pub fn precoalesce_validity(load: Load, bunch: f64, eee: &EeeConfig, link: &LinkConfig) -> Option<Violation> {
    let d = eee.d();
    if bunch <= d {
        return Some(Violation::DelayNotBelowBunch { d, bunch });
    }
    let gap_plus_bunch = load.mean_gap() + bunch;
    let required = link.tw() + eee.h_star();
    if gap_plus_bunch <= required {
        return Some(Violation::Desynchronized { gap_plus_bunch, required });
    }
    None
}

/// Sleeping fraction of a NIC behind a pre-coalescer with bunch length
/// `bunch` (seconds), in the closed form where the bunch holds
/// λB frames' worth of work.
pub fn precoalesce_fraction(load: Load, bunch: f64, eee: &EeeConfig, link: &LinkConfig) -> Prediction {
    if let Some(v) = precoalesce_validity(load, bunch, eee, link) {
        return Prediction::OutOfValidity(v);
    }
    // The raw form goes negative when 1/λ + B barely clears T_W + h*.
    let v = precoalesce_formula(load, bunch, eee.h_star(), link);
    Prediction::Valid(v.clamp(0.0, 1.0 - load.rho))
}

/// Raw formula, no validity check. Also used by the tuner identities.
pub(crate) fn precoalesce_formula(load: Load, bunch: f64, h_star: f64, link: &LinkConfig) -> f64 {
    let Load { rate, rho } = load;
    let gap = 1.0 / rate;
    (1.0 - rho) * (gap + bunch - h_star - link.transitions()) / ((1.0 - rho) * gap + bunch)
}

/// Renewal-reward form of the same in-sync cycle where the frame that opens
/// a bunch is counted in the drained work: cycle = (1/λ + B)/(1 − ρ). This is
/// what the tandem simulator converges to for Poisson input; it differs from
/// [`precoalesce_fraction`] by a relative `ρ/(λ(1/λ + B))`.
pub fn precoalesce_fraction_renewal(load: Load, bunch: f64, eee: &EeeConfig, link: &LinkConfig) -> Prediction {
    if let Some(v) = precoalesce_validity(load, bunch, eee, link) {
        return Prediction::OutOfValidity(v);
    }
    let Load { rate, rho } = load;
    let gap = 1.0 / rate;
    let lpi = (gap + bunch - eee.h_star() - link.transitions()).max(0.0);
    Prediction::Valid((1.0 - rho) * lpi / (gap + bunch))
}

pub fn precoalesce_sleep_fraction(
    traffic: &TrafficSpec,
    coal: &CoalescerConfig,
    eee: &EeeConfig,
    link: &LinkConfig,
) -> Result<Prediction> {
    Ok(precoalesce_fraction(traffic.poisson_load(link)?, coal.b(), eee, link))
}

/// Inputs of the GI/G/1-with-first-customer-setup waiting time bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaitInputs {
    pub rate: f64,
    pub rho: f64,
    /// Variance of the transmission time, s².
    pub var_service: f64,
    /// Variance of the interarrival time, s².
    pub var_interarrival: f64,
    pub bunch: f64,
    pub t_wake: f64,
    /// E[e], mean empty period, s.
    pub exp_e: f64,
    /// E[e²], s².
    pub exp_e2: f64,
}

/// E[W] = λ(σ_S² + σ_I²)/(2(1−ρ)) + (1−ρ)/(2λ) + ((B+T_W)² − E[e²])/(2(B+T_W+E[e])).
pub fn marshall_wait_general(w: &WaitInputs) -> Result<f64> {
    check_positive("arrival rate", w.rate)?;
    if !(w.rho >= 0.0 && w.rho < 1.0) {
        return Err(Error::invalid("load", format!("{} is outside [0, 1)", w.rho)));
    }
    for (name, v) in
        [("service variance", w.var_service), ("interarrival variance", w.var_interarrival), ("E[e²]", w.exp_e2)]
    {
        if v.is_infinite() {
            return Err(Error::UnsupportedModel(format!(
                "{name} is infinite (heavy-tailed traffic has no finite mean wait bound)"
            )));
        }
        check_non_negative(name, v)?;
    }
    check_non_negative("bunch", w.bunch)?;
    check_non_negative("wake transition", w.t_wake)?;
    check_non_negative("E[e]", w.exp_e)?;
    let setup = w.bunch + w.t_wake;
    let idle = setup + w.exp_e;
    if idle <= 0.0 {
        return Err(Error::invalid("E[e]", "empty periods must have positive mean when B + T_W = 0"));
    }
    Ok(w.rate * (w.var_service + w.var_interarrival) / (2.0 * (1.0 - w.rho))
        + (1.0 - w.rho) / (2.0 * w.rate)
        + (setup * setup - w.exp_e2) / (2.0 * idle))
}

/// Poisson specialization of [`marshall_wait_general`] (E[e] = 1/λ, E[e²] = 2/λ², σ_I² = 1/λ²).
pub fn precoalesce_mean_wait(lambda: f64, rho: f64, var_service: f64, bunch: f64, t_wake: f64) -> Result<f64> {
    check_positive("arrival rate", lambda)?;
    check_non_negative("service variance", var_service)?;
    check_non_negative("bunch", bunch)?;
    check_non_negative("wake transition", t_wake)?;
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::invalid("load", format!("{rho} is outside [0, 1)")));
    }
    let setup = bunch + t_wake;
    let l = lambda;
    Ok((1.0 + l * l * var_service) / (2.0 * l * (1.0 - rho))
        + (1.0 - rho) / (2.0 * l)
        + (l * l * setup * setup - 2.0) / (2.0 * l * (1.0 + l * setup)))
}

/// Interarrival variance of the mean-matched Pareto renewal process;
/// infinite for α ≤ 2.
pub fn pareto_interarrival_variance(alpha: f64, rate: f64) -> f64 {
    if alpha <= 2.0 {
        return f64::INFINITY;
    }
    let xm = (alpha - 1.0) / (alpha * rate);
    xm * xm * alpha / ((alpha - 1.0).powi(2) * (alpha - 2.0))
}

//! Choosing the coalescer bunch length for a target sleeping profile, and the
//! wake delay that gives the same sleeping time as a given bunch length.
//!
//! Bunch lengths are returned in seconds as `f64`; round with
//! [`Nanos::from_secs_f64`] before handing them to the simulator.

use crate::analytic::{
    frame_tx_fraction, hyst_delay_model, precoalesce_formula, precoalesce_fraction_renewal, precoalesce_validity,
};
use crate::config::{check_delta, lambda_from_load, EeeConfig, LinkConfig, Load, TrafficSpec};
use crate::error::{Error, Result};
use crate::units::Nanos;

pub const DEFAULT_DELTA: f64 = 0.1;

/// Largest wake delay [`equivalent_delay`] searches.
pub const DEFAULT_DELAY_CAP: Nanos = Nanos(1_000_000_000);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TuningTarget {
    /// Same sleeping fraction as sleeping on every empty queue with no delay.
    MatchFrameTx,
    /// Within `delta` of the ideal sleeping fraction 1 − ρ.
    ApproxIdeal { delta: f64 },
}

impl Default for TuningTarget {
    fn default() -> Self {
        TuningTarget::ApproxIdeal { delta: DEFAULT_DELTA }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuningResult {
    /// Seconds.
    pub bunch_exact: f64,
    /// Seconds.
    pub bunch_approx: f64,
    /// Load at which the bound was taken, when the result is load independent.
    pub worst_case_load: Option<f64>,
    /// The closed form went negative: no bunching is needed.
    pub clamped: bool,
}

fn clamp(b: f64) -> (f64, bool) {
    if b < 0.0 {
        (0.0, true)
    } else {
        (b, false)
    }
}

/// Bunch length that gives the coalesced NIC the sleeping fraction of frame
/// transmission mode at this load.
pub fn bunch_match_frame_tx(load: Load, eee: &EeeConfig, link: &LinkConfig) -> TuningResult {
    let Load { rate: l, rho } = load;
    let h = eee.h_star();
    let t = link.transitions();
    let e = (l * link.ts()).exp();
    let exact = (l * (h + t + t * (l * (h + t) - 1.0) * e) - rho) / (t * l * l * e);
    let approx = h * (1.0 + 1.0 / (l * t));
    let (bunch_exact, clamped) = clamp(exact);
    TuningResult { bunch_exact, bunch_approx: approx, worst_case_load: None, clamped }
}

/// Smallest bunch length whose predicted sleeping fraction is 1 − ρ − δ.
/// Returns 0 when the target is met without coalescing.
pub fn bunch_for_ideal(load: Load, eee: &EeeConfig, link: &LinkConfig, delta: f64) -> Result<f64> {
    let delta = check_delta(delta)?;
    let Load { rate: l, rho } = load;
    if rho + delta >= 1.0 {
        return Err(Error::invalid("delta", format!("load + delta = {} must stay below 1", rho + delta)));
    }
    let b = (1.0 - rho) * (l * (eee.h_star() + link.transitions()) - rho - delta) / (delta * l);
    Ok(b.max(0.0))
}

/// (h* + T_S + T_W)·C − L, rejecting values that are zero up to rounding or negative.
fn bound_margin(eee: &EeeConfig, link: &LinkConfig, frame_bits: u64) -> Result<(f64, f64)> {
    let l = frame_bits as f64;
    let hc = (eee.h_star() + link.transitions()) * link.capacity_bps;
    let margin = hc - l;
    if margin <= 1e-12 * l {
        return Err(Error::invalid(
            "frame size",
            format!("(h* + T_S + T_W)·C = {hc} bits must exceed the frame size {l} bits"),
        ));
    }
    Ok((hc, margin))
}

/// Load at which [`bunch_for_ideal`] peaks.
pub fn worst_case_load(eee: &EeeConfig, link: &LinkConfig, frame_bits: u64, delta: f64) -> Result<f64> {
    let delta = check_delta(delta)?;
    let (_, margin) = bound_margin(eee, link, frame_bits)?;
    Ok((delta * frame_bits as f64).sqrt() / margin.sqrt())
}

/// Bunch length that keeps the sleeping fraction within δ of ideal at any load.
pub fn bunch_bound_ideal(eee: &EeeConfig, link: &LinkConfig, frame_bits: u64, delta: f64) -> Result<TuningResult> {
    let delta = check_delta(delta)?;
    let (hc, margin) = bound_margin(eee, link, frame_bits)?;
    let l = frame_bits as f64;
    let c = link.capacity_bps;
    let exact = (hc + (delta - 1.0) * l - 2.0 * (delta * l).sqrt() * margin.sqrt()) / (delta * c);
    let (bunch_exact, clamped) = clamp(exact);
    Ok(TuningResult {
        bunch_exact,
        bunch_approx: eee.h_star() / delta,
        worst_case_load: Some(worst_case_load(eee, link, frame_bits, delta)?),
        clamped,
    })
}

/// Dispatches on the target. `ApproxIdeal` without a load gives the
/// load-independent bound; with a load, the exact value at that load.
pub fn tune(
    target: TuningTarget,
    load: Option<Load>,
    eee: &EeeConfig,
    link: &LinkConfig,
    frame_bits: u64,
) -> Result<TuningResult> {
    match (target, load) {
        (TuningTarget::MatchFrameTx, Some(load)) => Ok(bunch_match_frame_tx(load, eee, link)),
        (TuningTarget::MatchFrameTx, None) => Err(Error::invalid("load", "frame-transmission matching needs a load")),
        (TuningTarget::ApproxIdeal { delta }, None) => bunch_bound_ideal(eee, link, frame_bits, delta),
        (TuningTarget::ApproxIdeal { delta }, Some(load)) => {
            let exact = (1.0 - load.rho) * (load.rate * (eee.h_star() + link.transitions()) - load.rho - delta)
                / (delta * load.rate);
            Ok(TuningResult {
                bunch_exact: bunch_for_ideal(load, eee, link, delta)?,
                bunch_approx: eee.h_star() / delta,
                worst_case_load: None,
                clamped: exact < 0.0,
            })
        }
    }
}

/// Sleeping fraction predicted for a bunch length from the identity the
/// tuner inverts.
pub fn tuned_sleep_fraction(load: Load, bunch: f64, eee: &EeeConfig, link: &LinkConfig) -> f64 {
    precoalesce_formula(load, bunch, eee.h_star(), link)
}

/// Frame-transmission sleeping fraction at a given load; the target of
/// [`bunch_match_frame_tx`].
pub fn frame_tx_target(rho: f64, link: &LinkConfig, frame_bits: u64) -> Result<f64> {
    let rate = lambda_from_load(rho, link, frame_bits)?;
    Ok(frame_tx_fraction(Load { rate, rho }, link))
}

/// Smallest wake delay (to 1 ns) with which a NIC with hysteresis `h_star`
/// sleeps as long as the same NIC behind a coalescer with bunch length
/// `bunch` and no wake delay.
pub fn equivalent_delay(bunch: Nanos, traffic: &TrafficSpec, h_star: Nanos, link: &LinkConfig) -> Result<Nanos> {
    equivalent_delay_capped(bunch, traffic, h_star, link, DEFAULT_DELAY_CAP)
}

pub fn equivalent_delay_capped(
    bunch: Nanos,
    traffic: &TrafficSpec,
    h_star: Nanos,
    link: &LinkConfig,
    cap: Nanos,
) -> Result<Nanos> {
    let load = traffic.poisson_load(link)?;
    let coalesced = EeeConfig::new(h_star, Nanos::ZERO);
    if let Some(v) = precoalesce_validity(load, bunch.as_secs_f64(), &coalesced, link) {
        return Err(Error::OutOfValidity(v));
    }
    let target = precoalesce_fraction_renewal(load, bunch.as_secs_f64(), &coalesced, link).into_result()?;
    let sleep = |d: Nanos| hyst_delay_model(load, &EeeConfig::new(h_star, d), link).map(|m| m.rho_lpi);

    if sleep(Nanos::ZERO)? >= target {
        return Ok(Nanos::ZERO);
    }
    if sleep(cap)? < target {
        return Err(Error::Unreachable { target, cap_s: cap.as_secs_f64() });
    }
    let (mut lo, mut hi) = (0u64, cap.0);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if sleep(Nanos(mid))? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Nanos(hi))
}

//! LPI statistics recovered from a receiver-side trace and the number of LPI
//! entries reported by the sender's NIC.
//!
//! Every LPI period sits inside an idle gap of the departure trace, padded by
//! the hysteresis, the sleep transition and the wake transition. Given the
//! event count, the largest gaps are taken as the ones holding an LPI period.

use crate::config::{EeeConfig, LinkConfig};
use crate::error::{Error, Result};
use crate::traffic::ArrivalStream;

/// What is taken off each selected gap besides h* + T_S + T_W.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LpiAccounting {
    /// The wake delay is spent in LPI and stays in the estimate. This is
    /// what the simulator counts as LPI time.
    #[default]
    KeepDelay,
    /// Also subtract d, counting only the LPI time before the first frame
    /// of the next burst reached the NIC.
    SubtractDelay,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LpiEstimate {
    /// Bits carried over the trace duration.
    pub rate_bps: f64,
    pub lpi_events_per_s: f64,
    /// Seconds.
    pub mean_lpi_duration: f64,
    /// Fraction of the trace duration, in [0, 1].
    pub time_in_lpi: f64,
}

/// Idle time between the end of one transmission and the start of the next, in seconds.
pub fn idle_gaps(trace: &ArrivalStream, link: &LinkConfig) -> Vec<f64> {
    trace
        .frames()
        .windows(2)
        .map(|w| {
            let end = w[0].at.as_secs_f64() + link.service_secs(w[0].size_bits);
            (w[1].at.as_secs_f64() - end).max(0.0)
        })
        .collect()
}

pub fn estimate_lpi(
    trace: &ArrivalStream,
    link: &LinkConfig,
    eee: &EeeConfig,
    lpi_event_count: usize,
    accounting: LpiAccounting,
) -> Result<LpiEstimate> {
    let (first, last) = match trace.frames() {
        [] => return Err(Error::EmptyStream),
        [f, .., l] => (*f, *l),
        [f] => (*f, *f),
    };
    let mut gaps = idle_gaps(trace, link);
    if lpi_event_count > gaps.len() {
        return Err(Error::invalid(
            "lpi event count",
            format!("{lpi_event_count} events but the trace has only {} gaps", gaps.len()),
        ));
    }
    // Relative to the first transmission start, so the estimate is shift invariant.
    let duration = (last.at - first.at).as_secs_f64() + link.service_secs(last.size_bits);
    let bits: u64 = trace.iter().map(|f| f.size_bits).sum();
    let rate_bps = bits as f64 / duration;
    if lpi_event_count == 0 {
        return Ok(LpiEstimate { rate_bps, ..LpiEstimate::default() });
    }

    let mut overhead = eee.h_star() + link.ts() + link.tw();
    if accounting == LpiAccounting::SubtractDelay {
        overhead += eee.d();
    }
    let k = lpi_event_count;
    if k < gaps.len() {
        gaps.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
    }
    let lpi: f64 = gaps[..k].iter().map(|g| (g - overhead).max(0.0)).sum();
    Ok(LpiEstimate {
        rate_bps,
        lpi_events_per_s: k as f64 / duration,
        mean_lpi_duration: lpi / k as f64,
        time_in_lpi: (lpi / duration).min(1.0),
    })
}

//! Packet coalescer in front of the NIC.
//!
//! A frame reaching an empty coalescer starts a bunch and is held for B.
//! Later frames join the bunch until it has drained. Held frames are released
//! back to back at line rate, so a bunch reaches the NIC as one burst.

use crate::config::{CoalescerConfig, EeeConfig, LinkConfig};
use crate::error::{Error, Result};
use crate::stats::SimStats;
use crate::traffic::{ArrivalStream, Frame};
use crate::units::Nanos;

use super::nic::run_nic_sim;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoalescerState {
    Empty,
    /// Holding the bunch until B has elapsed since its first frame.
    Accumulating,
    /// Releasing held frames at line rate.
    Draining,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoalescerStats {
    pub time_empty: Nanos,
    pub time_accumulating: Nanos,
    pub time_draining: Nanos,
    pub bunches: u64,
}

impl CoalescerStats {
    pub fn total(&self) -> Nanos {
        self.time_empty + self.time_accumulating + self.time_draining
    }

    pub fn time_in(&self, state: CoalescerState) -> Nanos {
        match state {
            CoalescerState::Empty => self.time_empty,
            CoalescerState::Accumulating => self.time_accumulating,
            CoalescerState::Draining => self.time_draining,
        }
    }
}

/// Release time of every frame, in arrival order.
#[derive(Clone, Debug, PartialEq)]
pub struct Coalesced {
    pub releases: Vec<Nanos>,
    pub stats: CoalescerStats,
}

/// Runs the coalescer over `arrivals`. With B = 0 it only paces frames to
/// line rate, which leaves any stream with gaps of at least one transmission
/// time unchanged.
pub fn coalesce(arrivals: &ArrivalStream, cfg: &CoalescerConfig, link: &LinkConfig) -> Coalesced {
    let mut releases = Vec::with_capacity(arrivals.len());
    let mut stats = CoalescerStats::default();
    // End of the last release slot; the coalescer is empty after it.
    let mut free_at: Option<Nanos> = None;
    for f in arrivals.iter() {
        let release = match free_at {
            Some(free) if f.at <= free => free,
            _ => {
                stats.time_empty += f.at - free_at.unwrap_or(Nanos::ZERO);
                stats.bunches += 1;
                stats.time_accumulating += cfg.bunch;
                f.at + cfg.bunch
            }
        };
        let end = release + link.service_time(f.size_bits);
        stats.time_draining += end - release;
        free_at = Some(end);
        releases.push(release);
    }
    Coalesced { releases, stats }
}

impl Coalesced {
    /// The stream the NIC sees: releases shifted by the propagation delay.
    pub fn nic_input(&self, arrivals: &ArrivalStream, cfg: &CoalescerConfig) -> ArrivalStream {
        let frames =
            arrivals.iter().zip(&self.releases).map(|(f, r)| Frame::new(*r + cfg.propagation, f.size_bits)).collect();
        ArrivalStream::from_sorted_unchecked(frames)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TandemStats {
    /// NIC view, except `frame_delays`, which run from the original arrival
    /// to the start of transmission.
    pub nic: SimStats,
    pub coalescer: CoalescerStats,
}

/// Coalescer followed by the NIC.
pub fn run_tandem_sim(
    arrivals: &ArrivalStream,
    coal: &CoalescerConfig,
    eee: &EeeConfig,
    link: &LinkConfig,
) -> Result<TandemStats> {
    if arrivals.is_empty() {
        return Err(Error::EmptyStream);
    }
    let c = coalesce(arrivals, coal, link);
    let input = c.nic_input(arrivals, coal);
    let mut nic = run_nic_sim(&input, eee, link)?;
    for ((d, f), nf) in nic.frame_delays.iter_mut().zip(arrivals.iter()).zip(input.iter()) {
        *d += nf.at - f.at;
    }
    Ok(TandemStats { nic, coalescer: c.stats })
}

//! Discrete-event model of one EEE transmit queue.
//!
//! ```text
//!            queue empties                 h* elapses
//!   ACTIVE ─────────────────▶ HYSTERESIS ─────────────▶ SLEEP_TRANS (T_S)
//!     ▲  ▲     arrival            │                          │
//!     │  └────────────────────────┘                          ▼
//!     │                                                     LPI
//!     │            T_W                                       │ max(sleep end, first arrival + d)
//!     └──────────────────────── WAKE_TRANS ◀─────────────────┘
//! ```
//!
//! Service is FIFO and non-preemptive at line rate. Events sharing a
//! timestamp are handled arrival first, then timer expiry, then transmission
//! completion, so an arrival exactly at hysteresis expiry keeps the NIC awake.

use crate::analytic::energy_from_sleep;
use crate::config::{EeeConfig, LinkConfig};
use crate::error::{Error, Result};
use crate::stats::{CycleSummary, SimStats};
use crate::traffic::{ArrivalStream, Frame};
use crate::units::Nanos;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NicState {
    /// Transmitting; the queue is non-empty.
    Active,
    Hysteresis,
    SleepTransition,
    Lpi,
    WakeTransition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum EventClass {
    Arrival,
    Timer,
    TxComplete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Timer {
    HysteresisExpiry,
    SleepDone,
    WakeStart,
    WakeDone,
}

#[derive(Clone, Copy, Debug, Default)]
struct ExitSnapshot {
    at: Nanos,
    time_lpi: Nanos,
    time_hysteresis: Nanos,
    hysteresis_intervals: u64,
    failed_hysteresis: u64,
}

struct Nic<'a> {
    frames: &'a [Frame],
    eee: EeeConfig,
    link: LinkConfig,
    state: NicState,
    since: Nanos,
    arrived: usize,
    served: usize,
    timer: Option<(Nanos, Timer)>,
    tx_done: Option<Nanos>,
    /// First arrival since hysteresis expired; starts the wake-delay clock.
    first_sleep_arrival: Option<Nanos>,
    time: [Nanos; 5],
    lpi_entries: u64,
    failed_hysteresis: u64,
    hysteresis_intervals: u64,
    first_exit: Option<ExitSnapshot>,
    last_exit: Option<ExitSnapshot>,
    exits: u64,
    delays: Vec<Nanos>,
}

fn slot(state: NicState) -> usize {
    match state {
        NicState::Active => 0,
        NicState::Hysteresis => 1,
        NicState::SleepTransition => 2,
        NicState::Lpi => 3,
        NicState::WakeTransition => 4,
    }
}

impl<'a> Nic<'a> {
    fn new(frames: &'a [Frame], eee: EeeConfig, link: LinkConfig) -> Self {
        Nic {
            frames,
            eee,
            link,
            // Starts idle with the hysteresis timer running.
            state: NicState::Hysteresis,
            since: Nanos::ZERO,
            arrived: 0,
            served: 0,
            timer: Some((eee.hysteresis, Timer::HysteresisExpiry)),
            tx_done: None,
            first_sleep_arrival: None,
            time: [Nanos::ZERO; 5],
            lpi_entries: 0,
            failed_hysteresis: 0,
            hysteresis_intervals: 1,
            first_exit: None,
            last_exit: None,
            exits: 0,
            delays: vec![Nanos::ZERO; frames.len()],
        }
    }

    fn enter(&mut self, next: NicState, now: Nanos) {
        self.time[slot(self.state)] += now - self.since;
        self.state = next;
        self.since = now;
    }

    fn next_event(&self) -> Option<(Nanos, EventClass)> {
        let arrival = self.frames.get(self.arrived).map(|f| (f.at, EventClass::Arrival));
        let timer = self.timer.map(|(t, _)| (t, EventClass::Timer));
        let tx = self.tx_done.map(|t| (t, EventClass::TxComplete));
        [arrival, timer, tx].into_iter().flatten().min()
    }

    fn start_tx(&mut self, now: Nanos) {
        let frame = self.frames[self.served];
        self.delays[self.served] = now - frame.at;
        self.tx_done = Some(now + self.link.service_time(frame.size_bits));
    }

    fn on_arrival(&mut self, now: Nanos) {
        self.arrived += 1;
        match self.state {
            NicState::Active | NicState::WakeTransition => {}
            NicState::Hysteresis => {
                self.failed_hysteresis += 1;
                self.timer = None;
                self.enter(NicState::Active, now);
                self.start_tx(now);
            }
            NicState::SleepTransition => {
                self.first_sleep_arrival.get_or_insert(now);
            }
            NicState::Lpi => {
                if self.first_sleep_arrival.is_none() {
                    self.first_sleep_arrival = Some(now);
                    self.timer = Some((now.saturating_add(self.eee.wake_delay), Timer::WakeStart));
                }
            }
        }
    }

    fn on_timer(&mut self, now: Nanos, timer: Timer) {
        self.timer = None;
        match timer {
            Timer::HysteresisExpiry => {
                debug_assert_eq!(self.state, NicState::Hysteresis);
                self.enter(NicState::SleepTransition, now);
                self.first_sleep_arrival = None;
                self.timer = Some((now + self.link.t_sleep, Timer::SleepDone));
            }
            Timer::SleepDone => {
                self.enter(NicState::Lpi, now);
                self.lpi_entries += 1;
                if let Some(first) = self.first_sleep_arrival {
                    let wake = first.saturating_add(self.eee.wake_delay).max(now);
                    self.timer = Some((wake, Timer::WakeStart));
                }
            }
            Timer::WakeStart => {
                self.enter(NicState::WakeTransition, now);
                self.first_sleep_arrival = None;
                self.record_exit(now);
                self.timer = Some((now + self.link.t_wake, Timer::WakeDone));
            }
            Timer::WakeDone => {
                if self.arrived > self.served {
                    self.enter(NicState::Active, now);
                    self.start_tx(now);
                } else {
                    // Unreachable with the wake rule above, kept for safety of the accounting.
                    self.enter(NicState::Hysteresis, now);
                    self.hysteresis_intervals += 1;
                    self.timer = Some((now.saturating_add(self.eee.hysteresis), Timer::HysteresisExpiry));
                }
            }
        }
    }

    fn on_tx_complete(&mut self, now: Nanos) -> bool {
        self.tx_done = None;
        self.served += 1;
        if self.served == self.frames.len() {
            self.enter(NicState::Active, now);
            return true;
        }
        if self.arrived > self.served {
            self.start_tx(now);
        } else {
            self.enter(NicState::Hysteresis, now);
            self.hysteresis_intervals += 1;
            self.timer = Some((now.saturating_add(self.eee.hysteresis), Timer::HysteresisExpiry));
        }
        false
    }

    fn record_exit(&mut self, now: Nanos) {
        let snap = ExitSnapshot {
            at: now,
            time_lpi: self.time[slot(NicState::Lpi)],
            time_hysteresis: self.time[slot(NicState::Hysteresis)],
            hysteresis_intervals: self.hysteresis_intervals,
            failed_hysteresis: self.failed_hysteresis,
        };
        self.exits += 1;
        self.first_exit.get_or_insert(snap);
        self.last_exit = Some(snap);
    }

    fn run(mut self) -> SimStats {
        let mut end = Nanos::ZERO;
        while let Some((now, class)) = self.next_event() {
            match class {
                EventClass::Arrival => self.on_arrival(now),
                EventClass::Timer => {
                    let (_, timer) = self.timer.expect("timer event without timer");
                    self.on_timer(now, timer);
                }
                EventClass::TxComplete => {
                    if self.on_tx_complete(now) {
                        end = now;
                        break;
                    }
                }
            }
        }
        self.finish(end)
    }

    fn finish(self, end: Nanos) -> SimStats {
        let [active, hyst, sleep, lpi, wake] = self.time;
        let rho_lpi = if end.is_zero() { 0.0 } else { lpi.as_secs_f64() / end.as_secs_f64() };
        let steady = match (self.first_exit, self.last_exit) {
            (Some(a), Some(b)) if self.exits >= 2 => Some(CycleSummary {
                cycles: self.exits - 1,
                duration: b.at - a.at,
                time_lpi: b.time_lpi - a.time_lpi,
                time_hysteresis: b.time_hysteresis - a.time_hysteresis,
                hysteresis_intervals: b.hysteresis_intervals - a.hysteresis_intervals,
                failed_hysteresis: b.failed_hysteresis - a.failed_hysteresis,
            }),
            _ => None,
        };
        SimStats {
            total_time: end,
            time_active: active,
            time_hysteresis: hyst,
            time_sleep_trans: sleep,
            time_lpi: lpi,
            time_wake_trans: wake,
            lpi_cycles: self.exits.saturating_sub(1),
            lpi_entries: self.lpi_entries,
            failed_hysteresis_count: self.failed_hysteresis,
            frames_served: self.served as u64,
            frame_delays: self.delays,
            rho_lpi_measured: rho_lpi,
            sigma_measured: energy_from_sleep(self.link.sigma_lpi, rho_lpi.clamp(0.0, 1.0))
                .expect("validated link and clamped fraction"),
            steady,
        }
    }
}

/// Runs the NIC state machine over `arrivals` until the last frame has been
/// transmitted; that instant is `total_time`.
pub fn run_nic_sim(arrivals: &ArrivalStream, eee: &EeeConfig, link: &LinkConfig) -> Result<SimStats> {
    if arrivals.is_empty() {
        return Err(Error::EmptyStream);
    }
    Ok(Nic::new(arrivals.frames(), *eee, *link).run())
}

/// Transmission start times, i.e. what a receiver timestamps, for a run over `arrivals`.
pub fn departure_trace(arrivals: &ArrivalStream, stats: &SimStats) -> ArrivalStream {
    let frames = arrivals.iter().zip(&stats.frame_delays).map(|(f, d)| Frame::new(f.at + *d, f.size_bits)).collect();
    ArrivalStream::from_sorted_unchecked(frames)
}

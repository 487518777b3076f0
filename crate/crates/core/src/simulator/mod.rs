//! Event-driven simulation of the NIC, the coalescer and the two in tandem.

mod coalescer;
mod nic;
mod replicate;

pub use coalescer::{coalesce, run_tandem_sim, Coalesced, CoalescerState, CoalescerStats, TandemStats};
pub use nic::{departure_trace, run_nic_sim, NicState};
pub use replicate::{replicate, RunSpec};

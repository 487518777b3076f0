//! Energy Efficient Ethernet low power idle under hysteresis, NIC wake
//! delay and source-side pre-coalescing.
//!
//! * [`analytic`]: closed-form sleeping time, energy and delay under Poisson traffic.
//! * [`tuner`]: bunch lengths that reach a target consumption.
//! * [`traffic`]: seeded arrival generators and the plain-text trace format.
//! * [`simulator`]: discrete-event NIC and coalescer + NIC tandem, plus replications.
//! * [`analyzer`]: LPI statistics recovered from a departure trace and an LPI event count.

pub mod analytic;
pub mod analyzer;
pub mod config;
pub mod error;
pub mod simulator;
pub mod stats;
pub mod traffic;
pub mod tuner;
pub mod units;

pub use config::{ArrivalProcess, CoalescerConfig, EeeConfig, LinkConfig, Load, Preset, TrafficSpec};
pub use error::{Error, Result};
pub use units::Nanos;

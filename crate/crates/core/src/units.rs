//! Time base shared by the simulator and the configuration types.
//!
//! Simulation event times are integer nanoseconds so that event ordering is
//! exact over arbitrarily long runs. The closed-form models work in `f64`
//! seconds; crossing between the two is always an explicit conversion.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub, SubAssign};
use std::str::FromStr;

use crate::error::Error;

const NANOS_PER_SEC: f64 = 1e9;

/// A non-negative duration or instant in integer nanoseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nanos(pub u64);

impl Nanos {
    pub const ZERO: Nanos = Nanos(0);
    pub const MAX: Nanos = Nanos(u64::MAX);

    pub const fn from_nanos(ns: u64) -> Self {
        Nanos(ns)
    }

    pub const fn from_micros(us: u64) -> Self {
        Nanos(us * 1_000)
    }

    pub const fn from_millis(ms: u64) -> Self {
        Nanos(ms * 1_000_000)
    }

    /// Rounds to the nearest nanosecond. Negative and NaN inputs are rejected.
    pub fn from_secs_f64(secs: f64) -> Result<Self, Error> {
        if !secs.is_finite() || secs < 0.0 {
            return Err(Error::invalid("duration", format!("{secs} s is not a non-negative finite time")));
        }
        let ns = (secs * NANOS_PER_SEC).round();
        if ns >= u64::MAX as f64 {
            return Err(Error::invalid("duration", format!("{secs} s overflows the nanosecond clock")));
        }
        Ok(Nanos(ns as u64))
    }

    pub const fn as_nanos(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / NANOS_PER_SEC
    }

    pub fn as_micros_f64(self) -> f64 {
        self.0 as f64 / 1e3
    }

    pub fn saturating_add(self, rhs: Nanos) -> Nanos {
        Nanos(self.0.saturating_add(rhs.0))
    }

    pub fn saturating_sub(self, rhs: Nanos) -> Nanos {
        Nanos(self.0.saturating_sub(rhs.0))
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Nanos {
    type Output = Nanos;
    fn add(self, rhs: Nanos) -> Nanos {
        Nanos(self.0 + rhs.0)
    }
}

impl AddAssign for Nanos {
    fn add_assign(&mut self, rhs: Nanos) {
        self.0 += rhs.0;
    }
}

impl Sub for Nanos {
    type Output = Nanos;
    fn sub(self, rhs: Nanos) -> Nanos {
        Nanos(self.0 - rhs.0)
    }
}

impl SubAssign for Nanos {
    fn sub_assign(&mut self, rhs: Nanos) {
        self.0 -= rhs.0;
    }
}

impl Sum for Nanos {
    fn sum<I: Iterator<Item = Nanos>>(iter: I) -> Nanos {
        Nanos(iter.map(|n| n.0).sum())
    }
}

impl fmt::Display for Nanos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ns = self.0;
        if ns == 0 {
            write!(f, "0s")
        } else if ns.is_multiple_of(1_000_000_000) {
            write!(f, "{}s", ns / 1_000_000_000)
        } else if ns.is_multiple_of(1_000_000) {
            write!(f, "{}ms", ns / 1_000_000)
        } else if ns.is_multiple_of(1_000) {
            write!(f, "{}us", ns / 1_000)
        } else {
            write!(f, "{ns}ns")
        }
    }
}

/// Parses `<number><unit>` with unit one of `ns`, `us` (or `µs`), `ms`, `s`.
/// A bare `0` is accepted; any other bare number is ambiguous and rejected.
impl FromStr for Nanos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let split = s
            .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-'))
            .unwrap_or(s.len());
        let (num, unit) = s.split_at(split);
        let scale = match unit.trim() {
            "ns" => 1e-9,
            "us" | "µs" | "μs" => 1e-6,
            "ms" => 1e-3,
            "s" => 1.0,
            "" if num.parse::<f64>().ok() == Some(0.0) => 1.0,
            "" => {
                return Err(Error::invalid("duration", format!("'{s}' needs a unit suffix (ns, us, ms, s)")));
            }
            other => return Err(Error::invalid("duration", format!("unknown time unit '{other}' in '{s}'"))),
        };
        let value: f64 =
            num.parse().map_err(|_| Error::invalid("duration", format!("'{s}' is not a number with a time unit")))?;
        Nanos::from_secs_f64(value * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_suffixes() {
        assert_eq!("2.88us".parse::<Nanos>().unwrap(), Nanos(2_880));
        assert_eq!("4.48µs".parse::<Nanos>().unwrap(), Nanos(4_480));
        assert_eq!("6ms".parse::<Nanos>().unwrap(), Nanos(6_000_000));
        assert_eq!("1s".parse::<Nanos>().unwrap(), Nanos(1_000_000_000));
        assert_eq!("500ns".parse::<Nanos>().unwrap(), Nanos(500));
        assert_eq!("0".parse::<Nanos>().unwrap(), Nanos::ZERO);
    }

    #[test]
    fn rejects_bad_durations() {
        assert!("20".parse::<Nanos>().is_err());
        assert!("-1us".parse::<Nanos>().is_err());
        assert!("3 parsecs".parse::<Nanos>().is_err());
        assert!("us".parse::<Nanos>().is_err());
    }

    #[test]
    fn display_picks_the_coarsest_exact_unit() {
        assert_eq!(Nanos(2_880).to_string(), "2880ns");
        assert_eq!(Nanos::from_micros(20).to_string(), "20us");
        assert_eq!(Nanos::from_millis(6).to_string(), "6ms");
        for n in [Nanos(2_880), Nanos::from_micros(20), Nanos::from_millis(6), Nanos(0)] {
            assert_eq!(n.to_string().parse::<Nanos>().unwrap(), n);
        }
    }

    #[test]
    fn seconds_round_trip() {
        let t = Nanos::from_secs_f64(1.2e-6).unwrap();
        assert_eq!(t, Nanos(1_200));
        assert!((t.as_secs_f64() - 1.2e-6).abs() < 1e-18);
    }
}

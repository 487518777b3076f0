//! Run outcomes and replication summaries.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::units::Nanos;

/// Accounting over complete cycles, i.e. between the first and the last LPI
/// exit. The stretch before the first LPI exit is left out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CycleSummary {
    pub cycles: u64,
    pub duration: Nanos,
    pub time_lpi: Nanos,
    pub time_hysteresis: Nanos,
    /// Hysteresis intervals started, failed ones included.
    pub hysteresis_intervals: u64,
    pub failed_hysteresis: u64,
}

impl CycleSummary {
    pub fn mean_cycle(&self) -> f64 {
        self.duration.as_secs_f64() / self.cycles as f64
    }

    pub fn mean_lpi(&self) -> f64 {
        self.time_lpi.as_secs_f64() / self.cycles as f64
    }

    /// Hysteresis intervals per cycle.
    pub fn mean_n(&self) -> f64 {
        self.hysteresis_intervals as f64 / self.cycles as f64
    }

    /// Mean length of one hysteresis interval.
    pub fn mean_h(&self) -> f64 {
        if self.hysteresis_intervals == 0 {
            0.0
        } else {
            self.time_hysteresis.as_secs_f64() / self.hysteresis_intervals as f64
        }
    }

    pub fn rho_lpi(&self) -> f64 {
        self.time_lpi.as_secs_f64() / self.duration.as_secs_f64()
    }
}

/// Measured outcome of one NIC run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimStats {
    pub total_time: Nanos,
    pub time_active: Nanos,
    pub time_hysteresis: Nanos,
    pub time_sleep_trans: Nanos,
    pub time_lpi: Nanos,
    pub time_wake_trans: Nanos,
    /// Complete cycles (LPI exit to LPI exit).
    pub lpi_cycles: u64,
    /// Number of LPI periods entered.
    pub lpi_entries: u64,
    pub failed_hysteresis_count: u64,
    pub frames_served: u64,
    /// Per-frame wait from arrival to start of transmission, in arrival order.
    pub frame_delays: Vec<Nanos>,
    pub rho_lpi_measured: f64,
    pub sigma_measured: f64,
    pub steady: Option<CycleSummary>,
}

impl SimStats {
    pub fn state_time_sum(&self) -> Nanos {
        self.time_active + self.time_hysteresis + self.time_sleep_trans + self.time_lpi + self.time_wake_trans
    }

    pub fn mean_delay(&self) -> f64 {
        if self.frame_delays.is_empty() {
            return 0.0;
        }
        self.frame_delays.iter().map(|d| d.0 as f64).sum::<f64>() / self.frame_delays.len() as f64 * 1e-9
    }

    /// Nearest-rank percentile of the frame delays, `q` in (0, 1].
    pub fn delay_percentile(&self, q: f64) -> Nanos {
        percentile(&self.frame_delays, q)
    }

    pub fn lpi_events_per_sec(&self) -> f64 {
        self.lpi_entries as f64 / self.total_time.as_secs_f64()
    }

    pub fn mean_lpi_duration(&self) -> f64 {
        if self.lpi_entries == 0 {
            0.0
        } else {
            self.time_lpi.as_secs_f64() / self.lpi_entries as f64
        }
    }
}

pub fn percentile(samples: &[Nanos], q: f64) -> Nanos {
    if samples.is_empty() {
        return Nanos::ZERO;
    }
    let mut v = samples.to_vec();
    let rank = ((q.clamp(0.0, 1.0) * v.len() as f64).ceil() as usize).clamp(1, v.len());
    let (_, nth, _) = v.select_nth_unstable(rank - 1);
    *nth
}

/// Metrics summarized across replications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    RhoLpi,
    Sigma,
    MeanWait,
    P95Wait,
    LpiEventsPerSec,
    MeanLpiDuration,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::RhoLpi,
        Metric::Sigma,
        Metric::MeanWait,
        Metric::P95Wait,
        Metric::LpiEventsPerSec,
        Metric::MeanLpiDuration,
    ];

    /// Column stem used in CSV output.
    pub fn key(self) -> &'static str {
        match self {
            Metric::RhoLpi => "rho_lpi",
            Metric::Sigma => "sigma",
            Metric::MeanWait => "mean_wait_s",
            Metric::P95Wait => "p95_wait_s",
            Metric::LpiEventsPerSec => "lpi_events_per_s",
            Metric::MeanLpiDuration => "mean_lpi_s",
        }
    }

    pub fn extract(self, s: &SimStats) -> f64 {
        match self {
            Metric::RhoLpi => s.rho_lpi_measured,
            Metric::Sigma => s.sigma_measured,
            Metric::MeanWait => s.mean_delay(),
            Metric::P95Wait => s.delay_percentile(0.95).as_secs_f64(),
            Metric::LpiEventsPerSec => s.lpi_events_per_sec(),
            Metric::MeanLpiDuration => s.mean_lpi_duration(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSummary {
    pub mean: f64,
    /// Standard error of the mean, sd/√n.
    pub std_err: f64,
    /// Student-t 95% half-width.
    pub ci95_halfwidth: f64,
}

impl MetricSummary {
    /// Summary of one sample per replication. Needs at least two samples.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::invalid("replications", format!("{n} given, confidence intervals need at least 2")));
        }
        let nf = n as f64;
        // Identical samples would otherwise leave a rounding-level spread around the summed mean.
        if samples.iter().all(|&x| x == samples[0]) {
            return Ok(MetricSummary { mean: samples[0], std_err: 0.0, ci95_halfwidth: 0.0 });
        }
        let mean = samples.iter().sum::<f64>() / nf;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        let std_err = (var / nf).sqrt();
        let t = StudentsT::new(0.0, 1.0, nf - 1.0)
            .map_err(|e| Error::invalid("replications", e.to_string()))?
            .inverse_cdf(0.975);
        Ok(MetricSummary { mean, std_err, ci95_halfwidth: t * std_err })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplicationSummary {
    pub metrics: Vec<(Metric, MetricSummary)>,
    pub n_reps: usize,
    pub seeds: Vec<u64>,
}

impl ReplicationSummary {
    pub fn get(&self, metric: Metric) -> MetricSummary {
        self.metrics.iter().find(|(m, _)| *m == metric).map(|(_, s)| *s).expect("every metric is summarized")
    }

    pub fn mean(&self, metric: Metric) -> f64 {
        self.get(metric).mean
    }
}

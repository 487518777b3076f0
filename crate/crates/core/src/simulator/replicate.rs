use rayon::prelude::*;

use crate::config::{CoalescerConfig, EeeConfig, LinkConfig, TrafficSpec};
use crate::error::{Error, Result};
use crate::stats::{Metric, MetricSummary, ReplicationSummary, SimStats};
use crate::traffic::generate;

use super::coalescer::run_tandem_sim;
use super::nic::run_nic_sim;

/// Everything needed to run one simulation, apart from the seed.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub traffic: TrafficSpec,
    pub n_frames: usize,
    pub eee: EeeConfig,
    pub link: LinkConfig,
    pub coalescer: Option<CoalescerConfig>,
}

impl RunSpec {
    pub fn new(traffic: TrafficSpec, n_frames: usize, eee: EeeConfig, link: LinkConfig) -> Self {
        RunSpec { traffic, n_frames, eee, link, coalescer: None }
    }

    pub fn with_coalescer(mut self, coal: CoalescerConfig) -> Self {
        self.coalescer = Some(coal);
        self
    }

    pub fn run(&self, seed: u64) -> Result<SimStats> {
        if self.n_frames == 0 {
            return Err(Error::invalid("frames", "must be at least 1"));
        }
        let arrivals = generate(&self.traffic, self.n_frames, seed)?;
        match &self.coalescer {
            None => run_nic_sim(&arrivals, &self.eee, &self.link),
            Some(c) => Ok(run_tandem_sim(&arrivals, c, &self.eee, &self.link)?.nic),
        }
    }
}

/// Runs `n_reps` independent replications with seeds `base_seed..base_seed + n_reps`
/// on the current rayon pool. The result does not depend on the pool size.
pub fn replicate(spec: &RunSpec, n_reps: usize, base_seed: u64) -> Result<ReplicationSummary> {
    if n_reps < 2 {
        return Err(Error::invalid("replications", format!("{n_reps} given, confidence intervals need at least 2")));
    }
    let seeds: Vec<u64> = (0..n_reps as u64).map(|i| base_seed.wrapping_add(i)).collect();
    let samples: Vec<[f64; Metric::ALL.len()]> = seeds
        .par_iter()
        .map(|&seed| {
            let st = spec.run(seed)?;
            Ok(Metric::ALL.map(|m| m.extract(&st)))
        })
        .collect::<Result<_>>()?;
    let metrics = Metric::ALL
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let xs: Vec<f64> = samples.iter().map(|s| s[i]).collect();
            MetricSummary::from_samples(&xs).map(|s| (m, s))
        })
        .collect::<Result<_>>()?;
    Ok(ReplicationSummary { metrics, n_reps, seeds })
}

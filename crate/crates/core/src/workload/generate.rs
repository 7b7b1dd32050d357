use std::iter::Peekable;

use serde::{Deserialize, Serialize};

use super::rng::{sample_exponential, sample_uniform, Stream};
use super::WorkloadTrace;
use crate::model::{ClassConfig, ClassIndex, LspRequest};
use crate::units::{Bandwidth, SimTime};
use crate::{Error, Result};

/// Poisson arrival process of one traffic class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub class: ClassIndex,
    /// Mean of the exponential inter-arrival gap, seconds.
    pub mean_interarrival_s: f64,
    /// Offset of the process; the first gap starts here.
    #[serde(default)]
    pub start_delay_s: f64,
    pub bandwidth_min_mbps: Bandwidth,
    pub bandwidth_max_mbps: Bandwidth,
    /// Mean of the exponential holding time, seconds.
    pub mean_holding_s: f64,
    /// Informational only: the class mix follows from the rates once the
    /// merged stream is truncated at `total_lsps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count_share: Option<u64>,
}

impl GeneratorSpec {
    pub fn validate(&self, cfg: &ClassConfig) -> Result<()> {
        let bad = |what: String| Err(Error::Config(format!("generator for class {}: {what}", self.class)));
        cfg.check_class(self.class)?;
        if !(self.mean_interarrival_s.is_finite() && self.mean_interarrival_s > 0.0) {
            return bad(format!(
                "mean inter-arrival must be > 0, got {}",
                self.mean_interarrival_s
            ));
        }
        if !(self.mean_holding_s.is_finite() && self.mean_holding_s > 0.0) {
            return bad(format!("mean holding time must be > 0, got {}", self.mean_holding_s));
        }
        if !(self.start_delay_s.is_finite() && self.start_delay_s >= 0.0) {
            return bad(format!("start delay must be >= 0, got {}", self.start_delay_s));
        }
        if !self.bandwidth_min_mbps.is_positive() {
            return bad(format!(
                "minimum bandwidth must be > 0, got {}",
                self.bandwidth_min_mbps
            ));
        }
        if self.bandwidth_min_mbps > self.bandwidth_max_mbps {
            return bad(format!(
                "bandwidth range is empty: {} > {}",
                self.bandwidth_min_mbps, self.bandwidth_max_mbps
            ));
        }
        Ok(())
    }
}

/// Everything needed to generate one workload.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub class_config: ClassConfig,
    pub generators: Vec<GeneratorSpec>,
    pub total_lsps: usize,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.total_lsps == 0 {
            return Err(Error::Config("total_lsps must be > 0".into()));
        }
        if self.generators.is_empty() {
            return Err(Error::Config("at least one generator is required".into()));
        }
        let mut seen = vec![false; self.class_config.class_count()];
        for g in &self.generators {
            g.validate(&self.class_config)?;
            if std::mem::replace(&mut seen[g.class], true) {
                return Err(Error::Config(format!("two generators for class {}", g.class)));
            }
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One arrival before ids are assigned.
struct Arrival {
    time: SimTime,
    class: ClassIndex,
    bandwidth: Bandwidth,
    holding: SimTime,
}

/// Unbounded arrival process of one class. Each arrival draws, in order, the
/// gap, the bandwidth and the holding time from the class's own stream.
struct ClassProcess {
    spec: GeneratorSpec,
    stream: Stream,
    clock: SimTime,
}

impl ClassProcess {
    fn new(spec: &GeneratorSpec, seed: u64) -> Self {
        ClassProcess {
            spec: spec.clone(),
            stream: Stream::for_class(seed, spec.class),
            clock: SimTime::from_secs_f64(spec.start_delay_s),
        }
    }
}

impl Iterator for ClassProcess {
    type Item = Arrival;

    fn next(&mut self) -> Option<Arrival> {
        let gap = sample_exponential(&mut self.stream, self.spec.mean_interarrival_s);
        self.clock = self.clock + SimTime::from_secs_f64(gap);
        let bandwidth = sample_uniform(
            &mut self.stream,
            self.spec.bandwidth_min_mbps,
            self.spec.bandwidth_max_mbps,
        );
        let holding = SimTime::from_secs_f64(sample_exponential(&mut self.stream, self.spec.mean_holding_s))
            .max(SimTime::from_millis(1));
        Some(Arrival {
            time: self.clock,
            class: self.spec.class,
            bandwidth,
            holding,
        })
    }
}

/// The first `total_lsps` arrivals of all classes merged by time.
///
/// Simultaneous arrivals are ordered by class index; ids are dense from 0 in
/// merged order.
pub fn generate_trace(spec: &ScenarioSpec) -> Result<WorkloadTrace> {
    spec.validate()?;
    let mut generators: Vec<&GeneratorSpec> = spec.generators.iter().collect();
    generators.sort_by_key(|g| g.class);
    let mut processes: Vec<Peekable<ClassProcess>> = generators
        .into_iter()
        .map(|g| ClassProcess::new(g, spec.seed).peekable())
        .collect();

    let mut requests = Vec::with_capacity(spec.total_lsps);
    for id in 0..spec.total_lsps as u64 {
        let next = processes
            .iter_mut()
            .enumerate()
            .filter_map(|(i, p)| p.peek().map(|a| (a.time, i)))
            .min()
            .map(|(_, i)| i)
            .expect("class processes never end");
        let a = processes[next].next().expect("peeked");
        requests.push(LspRequest::new(id, a.class, a.bandwidth, a.time, a.holding));
    }
    Ok(WorkloadTrace::new(spec.seed, requests))
}

/// The arrivals of a single class, unmerged and unbounded; used to check
/// that class streams do not depend on each other.
pub fn class_arrivals(spec: &GeneratorSpec, seed: u64) -> impl Iterator<Item = (SimTime, Bandwidth, SimTime)> {
    ClassProcess::new(spec, seed).map(|a| (a.time, a.bandwidth, a.holding))
}

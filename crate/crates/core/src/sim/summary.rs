use std::fmt;
use std::str::FromStr;

use super::{MetricsRecord, Sample};
use crate::model::{ClassIndex, Model};
use crate::units::{Bandwidth, SimTime};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Class(ClassIndex),
    Total,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Class(c) => write!(f, "tc{c}"),
            Scope::Total => f.write_str("total"),
        }
    }
}

impl FromStr for Scope {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        if s == "total" {
            return Ok(Scope::Total);
        }
        s.strip_prefix("tc")
            .and_then(|c| c.parse().ok())
            .map(Scope::Class)
            .ok_or_else(|| crate::Error::Usage(format!("unknown scope {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub scope: Scope,
    pub requested: u64,
    pub granted: u64,
    pub blocked: u64,
    pub preempted: u64,
    pub granted_traffic: Bandwidth,
    pub peak_load: Bandwidth,
    /// Time-average of the load step function over `[0, horizon]`, Mbps.
    pub mean_load: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub model: Model,
    pub horizon: SimTime,
    /// One row per class, then the total.
    pub rows: Vec<SummaryRow>,
}

impl Summary {
    pub fn total(&self) -> &SummaryRow {
        self.rows.last().expect("summary always has a total row")
    }
}

/// Tabulates per-class and total counters plus peak and time-averaged load.
///
/// The load is a step function: zero before the first sample, then each
/// sample's value until the next one. The average is taken from time 0 to
/// the last sample.
pub fn summarize(metrics: &MetricsRecord) -> Summary {
    let horizon = metrics.samples.last().map(|s| s.time).unwrap_or_default();
    let mut rows = Vec::with_capacity(metrics.class_count() + 1);
    for (class, c) in metrics.classes.iter().enumerate() {
        let load_of = |s: &Sample| s.load[class];
        rows.push(SummaryRow {
            scope: Scope::Class(class),
            requested: c.requested,
            granted: c.granted,
            blocked: c.blocked,
            preempted: c.preempted,
            granted_traffic: c.granted_traffic,
            peak_load: metrics.samples.iter().map(load_of).max().unwrap_or_default(),
            mean_load: time_average(&metrics.samples, load_of),
        });
    }
    let total_of = |s: &Sample| s.total_load;
    rows.push(SummaryRow {
        scope: Scope::Total,
        requested: metrics.requested(),
        granted: metrics.granted(),
        blocked: metrics.blocked(),
        preempted: metrics.preempted(),
        granted_traffic: metrics.granted_traffic,
        peak_load: metrics.peak_total_load(),
        mean_load: time_average(&metrics.samples, total_of),
    });
    Summary {
        model: metrics.model,
        horizon,
        rows,
    }
}

fn time_average(samples: &[Sample], value: impl Fn(&Sample) -> Bandwidth) -> f64 {
    let Some(last) = samples.last() else {
        return 0.0;
    };
    let horizon = last.time.millis();
    if horizon <= 0 {
        return value(last).as_mbps();
    }
    // tenths of Mbps times milliseconds
    let area: i128 = samples
        .windows(2)
        .map(|w| value(&w[0]).tenths() as i128 * (w[1].time.millis() - w[0].time.millis()) as i128)
        .sum();
    area as f64 / horizon as f64 / 10.0
}

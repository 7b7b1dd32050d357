use std::fmt;
use std::str::FromStr;

use crate::model::{ClassIndex, LinkState, LspId, LspRequest, Model};
use crate::units::{Bandwidth, SimTime};
use crate::Error;

/// Link load right after one event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub time: SimTime,
    pub total_load: Bandwidth,
    pub load: Vec<Bandwidth>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassCounters {
    pub requested: u64,
    pub granted: u64,
    pub blocked: u64,
    pub preempted: u64,
    /// Sum of the bandwidth of granted requests.
    pub granted_traffic: Bandwidth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Arrival,
    Departure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Admitted,
    /// Admitted after tearing down the listed victims.
    Preempting,
    Blocked,
    Released,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Arrival => "arrival",
            EventKind::Departure => "departure",
        }
    }
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Admitted => "admitted",
            Outcome::Preempting => "admitted_preempting",
            Outcome::Blocked => "blocked",
            Outcome::Released => "released",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "arrival" => Ok(EventKind::Arrival),
            "departure" => Ok(EventKind::Departure),
            _ => Err(Error::Usage(format!("unknown event kind {s:?}"))),
        }
    }
}

impl FromStr for Outcome {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "admitted" => Ok(Outcome::Admitted),
            "admitted_preempting" => Ok(Outcome::Preempting),
            "blocked" => Ok(Outcome::Blocked),
            "released" => Ok(Outcome::Released),
            _ => Err(Error::Usage(format!("unknown outcome {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventRecord {
    pub time: SimTime,
    pub kind: EventKind,
    pub lsp_id: LspId,
    pub class: ClassIndex,
    pub bandwidth: Bandwidth,
    pub outcome: Outcome,
    pub victims: Vec<LspId>,
}

/// Everything measured during one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricsRecord {
    pub model: Model,
    /// One sample per processed event, in event order.
    pub samples: Vec<Sample>,
    pub classes: Vec<ClassCounters>,
    pub granted_traffic: Bandwidth,
    pub events: Vec<EventRecord>,
}

impl MetricsRecord {
    pub fn new(model: Model, class_count: usize) -> Self {
        MetricsRecord {
            model,
            samples: Vec::new(),
            classes: vec![ClassCounters::default(); class_count],
            granted_traffic: Bandwidth::ZERO,
            events: Vec::new(),
        }
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub(crate) fn record_arrival(
        &mut self,
        time: SimTime,
        req: &LspRequest,
        outcome: Outcome,
        victims: &[(LspId, ClassIndex)],
    ) {
        let counters = &mut self.classes[req.class];
        counters.requested += 1;
        if outcome == Outcome::Blocked {
            counters.blocked += 1;
        } else {
            counters.granted += 1;
            counters.granted_traffic += req.bandwidth;
            self.granted_traffic += req.bandwidth;
        }
        for &(_, class) in victims {
            self.classes[class].preempted += 1;
        }
        self.events.push(EventRecord {
            time,
            kind: EventKind::Arrival,
            lsp_id: req.id,
            class: req.class,
            bandwidth: req.bandwidth,
            outcome,
            victims: victims.iter().map(|(id, _)| *id).collect(),
        });
    }

    pub(crate) fn record_departure(&mut self, time: SimTime, req: &LspRequest) {
        self.events.push(EventRecord {
            time,
            kind: EventKind::Departure,
            lsp_id: req.id,
            class: req.class,
            bandwidth: req.bandwidth,
            outcome: Outcome::Released,
            victims: Vec::new(),
        });
    }

    pub(crate) fn push_sample(&mut self, time: SimTime, state: &LinkState) {
        self.samples.push(Sample {
            time,
            total_load: state.total_load(),
            load: state.load().to_vec(),
        });
    }

    pub fn requested(&self) -> u64 {
        self.classes.iter().map(|c| c.requested).sum()
    }

    pub fn granted(&self) -> u64 {
        self.classes.iter().map(|c| c.granted).sum()
    }

    pub fn blocked(&self) -> u64 {
        self.classes.iter().map(|c| c.blocked).sum()
    }

    pub fn preempted(&self) -> u64 {
        self.classes.iter().map(|c| c.preempted).sum()
    }

    pub fn peak_total_load(&self) -> Bandwidth {
        self.samples.iter().map(|s| s.total_load).max().unwrap_or_default()
    }

    /// Peak total load over samples strictly before `until`.
    pub fn peak_total_load_before(&self, until: SimTime) -> Bandwidth {
        self.samples
            .iter()
            .take_while(|s| s.time < until)
            .map(|s| s.total_load)
            .max()
            .unwrap_or_default()
    }

    /// Time of the first arrival that preempted anything.
    pub fn first_preemption_time(&self) -> Option<SimTime> {
        self.events
            .iter()
            .find(|e| e.outcome == Outcome::Preempting)
            .map(|e| e.time)
    }
}

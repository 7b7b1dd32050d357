//! Discrete-event replay of a workload trace against one model on one link.

mod metrics;
mod summary;

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::model::{verify_invariants, ClassConfig, Decision, LinkState, LspId, LspRequest, Model};
use crate::units::SimTime;
use crate::workload::WorkloadTrace;
use crate::{Error, Result};

pub use metrics::{ClassCounters, EventKind, EventRecord, MetricsRecord, Outcome, Sample};
pub use summary::{summarize, Scope, Summary, SummaryRow};

/// A scheduled simulation event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub time: SimTime,
    pub kind: ScheduledKind,
    /// Assigned when the event is scheduled; breaks ties at equal time.
    pub sequence: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduledKind {
    Arrival(LspRequest),
    Departure(LspId),
}

impl Event {
    // Departures sort before arrivals at the same instant, so bandwidth
    // released at time t is usable by a request arriving at t.
    fn key(&self) -> (SimTime, u8, u64) {
        let rank = match self.kind {
            ScheduledKind::Departure(_) => 0,
            ScheduledKind::Arrival(_) => 1,
        };
        (self.time, rank, self.sequence)
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Replays `trace` under `model`.
///
/// Every processed event appends one load sample and is followed by a full
/// invariant check; the first violation aborts the run with the index of the
/// offending event. Departures of preempted LSPs are dropped without being
/// recorded.
pub fn run(trace: &WorkloadTrace, model: Model, cfg: &ClassConfig) -> Result<MetricsRecord> {
    cfg.validate(model)?;
    trace.validate_for(cfg)?;

    let mut state = LinkState::new(model, cfg.clone())?;
    let mut metrics = MetricsRecord::new(model, cfg.class_count());
    let mut queue = BinaryHeap::with_capacity(trace.len() * 2);
    let mut sequence = 0u64;
    for req in trace.requests() {
        queue.push(Reverse(Event {
            time: req.arrival,
            kind: ScheduledKind::Arrival(req.clone()),
            sequence,
        }));
        sequence += 1;
    }

    while let Some(Reverse(event)) = queue.pop() {
        match event.kind {
            ScheduledKind::Arrival(req) => {
                let decision = state.admit(&req)?;
                let mut victims = Vec::new();
                if decision.is_admitted() {
                    for &id in decision.victims() {
                        let victim = state.get(id).ok_or(Error::UnknownLsp(id))?;
                        victims.push((id, victim.class()));
                    }
                    state.apply(&req, &decision)?;
                    queue.push(Reverse(Event {
                        time: req.arrival + req.holding,
                        kind: ScheduledKind::Departure(req.id),
                        sequence,
                    }));
                    sequence += 1;
                }
                let outcome = match &decision {
                    Decision::Admitted { .. } => Outcome::Admitted,
                    Decision::AdmittedWithPreemption { .. } => Outcome::Preempting,
                    Decision::Blocked { .. } => Outcome::Blocked,
                };
                metrics.record_arrival(event.time, &req, outcome, &victims);
            }
            ScheduledKind::Departure(id) => {
                if !state.contains(id) {
                    continue;
                }
                let lsp = state.release(id)?;
                metrics.record_departure(event.time, &lsp.request);
            }
        }

        metrics.push_sample(event.time, &state);
        let violations = verify_invariants(&state, cfg, model);
        if !violations.is_empty() {
            return Err(Error::InvariantViolation {
                event_index: metrics.events.len() - 1,
                violations,
            });
        }
    }
    Ok(metrics)
}

//! Deterministic LSP request workloads.
//!
//! A [`ScenarioSpec`] describes one Poisson arrival process per traffic
//! class. [`generate_trace`] turns it into a [`WorkloadTrace`], which every
//! model then replays unchanged, so model comparisons are paired on the
//! exact same requests.

mod generate;
pub mod rng;
mod trace_io;

use std::fmt;

use sha2::{Digest, Sha256};

use crate::model::{ClassConfig, LspRequest};
use crate::{Error, Result};

pub use generate::{class_arrivals, generate_trace, GeneratorSpec, ScenarioSpec};
pub use trace_io::{read_trace, read_trace_file, write_trace, write_trace_file, TRACE_HEADER_PREFIX};

/// Requests sorted by arrival time (ties by id), ids dense from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkloadTrace {
    seed: u64,
    requests: Vec<LspRequest>,
}

/// Identifies a trace: its seed plus a digest of its rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceFingerprint {
    pub seed: u64,
    pub digest: String,
}

impl fmt::Display for TraceFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seed={} sha256={}", self.seed, self.digest)
    }
}

impl WorkloadTrace {
    pub(crate) fn new(seed: u64, requests: Vec<LspRequest>) -> Self {
        WorkloadTrace { seed, requests }
    }

    /// Builds a trace from explicit requests, checking ordering and ids.
    pub fn from_requests(seed: u64, requests: Vec<LspRequest>) -> Result<Self> {
        for (i, r) in requests.iter().enumerate() {
            if r.id != i as u64 {
                return Err(Error::InvalidTrace(format!(
                    "ids must be dense from 0: position {i} has id {}",
                    r.id
                )));
            }
            if i > 0 && r.arrival < requests[i - 1].arrival {
                return Err(Error::InvalidTrace(format!(
                    "arrival of request {} goes back in time",
                    r.id
                )));
            }
            if !r.bandwidth.is_positive() || r.holding <= crate::units::SimTime::ZERO {
                return Err(Error::InvalidTrace(format!(
                    "request {} needs positive bandwidth and holding time",
                    r.id
                )));
            }
        }
        Ok(WorkloadTrace { seed, requests })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn requests(&self) -> &[LspRequest] {
        &self.requests
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }

    /// Rejects requests whose class or bandwidth does not fit `cfg`.
    pub fn validate_for(&self, cfg: &ClassConfig) -> Result<()> {
        self.requests.iter().try_for_each(|r| r.validate(cfg))
    }

    pub fn fingerprint(&self) -> TraceFingerprint {
        let mut hasher = Sha256::new();
        for r in &self.requests {
            hasher.update(trace_io::format_row(r).as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect::<String>();
        TraceFingerprint {
            seed: self.seed,
            digest,
        }
    }
}

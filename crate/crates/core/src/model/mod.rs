//! Bandwidth allocation models over the state of a single link.
//!
//! Three models are provided:
//!
//! - [`Model::Mam`]: isolated per-class caps, no preemption.
//! - [`Model::Rdm`]: nested ("Russian doll") cumulative caps. Lower classes may
//!   use headroom left by higher classes and are preempted when the higher
//!   classes claim it back.
//! - [`Model::AllocTc`]: RDM nesting plus loans. A class whose own doll is
//!   full may borrow unused bandwidth below it; borrowed bandwidth is the first
//!   thing reclaimed when the link saturates.
//!
//! Class 0 is the lowest priority. All admission functions are pure; the
//! resulting [`Decision`] is applied with [`LinkState::apply`].

mod alloctc;
mod config;
mod invariants;
mod loans;
mod mam;
mod rdm;
mod state;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::units::{Bandwidth, SimTime};
use crate::Error;

pub use alloctc::{alloctc_admit, alloctc_legal_victims};
pub use config::{ClassConfig, MAX_CLASSES};
pub use invariants::{verify_invariants, Violation};
pub use loans::{compute_loans, LoanAccounting};
pub use mam::mam_admit;
pub use rdm::rdm_admit;
pub use state::{LinkState, LoadKind};

pub type LspId = u64;
pub type ClassIndex = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Mam,
    Rdm,
    #[serde(rename = "alloctc")]
    AllocTc,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Mam, Model::Rdm, Model::AllocTc];

    pub fn name(self) -> &'static str {
        match self {
            Model::Mam => "mam",
            Model::Rdm => "rdm",
            Model::AllocTc => "alloctc",
        }
    }

    /// Whether the model uses nested constraints (`BC_0 = M`, non-increasing).
    pub fn is_nested(self) -> bool {
        !matches!(self, Model::Mam)
    }

    pub fn admit(self, state: &LinkState, req: &LspRequest, cfg: &ClassConfig) -> crate::Result<Decision> {
        match self {
            Model::Mam => mam_admit(state, req, cfg),
            Model::Rdm => rdm_admit(state, req, cfg),
            Model::AllocTc => alloctc_admit(state, req, cfg),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mam" => Ok(Model::Mam),
            "rdm" => Ok(Model::Rdm),
            "alloctc" | "alloctc-sharing" => Ok(Model::AllocTc),
            other => Err(Error::Usage(format!(
                "unknown model {other:?} (expected mam, rdm or alloctc)"
            ))),
        }
    }
}

/// A request to set up one LSP on the link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LspRequest {
    pub id: LspId,
    pub class: ClassIndex,
    pub bandwidth: Bandwidth,
    pub arrival: SimTime,
    pub holding: SimTime,
}

impl LspRequest {
    pub fn new(id: LspId, class: ClassIndex, bandwidth: Bandwidth, arrival: SimTime, holding: SimTime) -> Self {
        LspRequest {
            id,
            class,
            bandwidth,
            arrival,
            holding,
        }
    }

    /// Checks the request against `cfg`: valid class, positive bandwidth and holding time.
    pub fn validate(&self, cfg: &ClassConfig) -> crate::Result<()> {
        cfg.check_class(self.class)?;
        if !self.bandwidth.is_positive() {
            return Err(Error::InvalidRequest {
                id: self.id,
                reason: format!("bandwidth must be positive, got {}", self.bandwidth),
            });
        }
        if self.holding <= SimTime::ZERO {
            return Err(Error::InvalidRequest {
                id: self.id,
                reason: format!("holding time must be positive, got {}", self.holding),
            });
        }
        Ok(())
    }
}

/// An admitted LSP and its current native/loan split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lsp {
    pub request: LspRequest,
    pub native: Bandwidth,
    pub loan: Bandwidth,
    pub setup_time: SimTime,
}

impl Lsp {
    pub fn id(&self) -> LspId {
        self.request.id
    }

    pub fn class(&self) -> ClassIndex {
        self.request.class
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.request.bandwidth
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockReason {
    /// MAM: the class would exceed its own constraint.
    ClassConstraint { class: ClassIndex },
    /// MAM: the link would exceed its capacity.
    LinkCapacity,
    /// RDM: the constraint `BC_class` of the requesting class binds; lower
    /// classes cannot be preempted to relieve it. AllocTC: the request would
    /// still need a loan after reclaiming everything it may reclaim.
    OwnDoll { class: ClassIndex },
    /// AllocTC: free bandwidth plus every reclaimable LSP is below the demand.
    Saturated { reclaimable: Bandwidth },
}

impl fmt::Display for BlockReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockReason::ClassConstraint { class } => write!(f, "class-constraint:{class}"),
            BlockReason::LinkCapacity => f.write_str("link-capacity"),
            BlockReason::OwnDoll { class } => write!(f, "own-doll:{class}"),
            BlockReason::Saturated { reclaimable } => write!(f, "saturated:{reclaimable}"),
        }
    }
}

/// Outcome of an admission check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Admitted {
        native: Bandwidth,
        loan: Bandwidth,
    },
    AdmittedWithPreemption {
        native: Bandwidth,
        loan: Bandwidth,
        victims: Vec<LspId>,
    },
    Blocked {
        reason: BlockReason,
    },
}

impl Decision {
    pub fn is_admitted(&self) -> bool {
        !matches!(self, Decision::Blocked { .. })
    }

    pub fn victims(&self) -> &[LspId] {
        match self {
            Decision::AdmittedWithPreemption { victims, .. } => victims,
            _ => &[],
        }
    }

    /// `(native, loan)` of the admitted LSP, `None` when blocked.
    pub fn split(&self) -> Option<(Bandwidth, Bandwidth)> {
        match *self {
            Decision::Admitted { native, loan } | Decision::AdmittedWithPreemption { native, loan, .. } => {
                Some((native, loan))
            }
            Decision::Blocked { .. } => None,
        }
    }
}

/// Preemption order shared by RDM and AllocTC: lowest class first, then
/// youngest setup time first, ties broken by the larger id first.
pub(crate) fn preemption_order(a: &Lsp, b: &Lsp) -> std::cmp::Ordering {
    a.class()
        .cmp(&b.class())
        .then(b.setup_time.cmp(&a.setup_time))
        .then(b.id().cmp(&a.id()))
}

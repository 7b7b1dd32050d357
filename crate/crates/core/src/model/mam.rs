use super::{BlockReason, ClassConfig, Decision, LinkState, LspRequest};
use crate::units::Bandwidth;
use crate::Result;

/// Maximum Allocation Model: admit iff the class stays within `BC_class`
/// and the link within `M`. Never preempts.
pub fn mam_admit(state: &LinkState, req: &LspRequest, cfg: &ClassConfig) -> Result<Decision> {
    req.validate(cfg)?;
    let b = req.bandwidth;
    if state.load()[req.class] + b > cfg.bc[req.class] {
        return Ok(Decision::Blocked {
            reason: BlockReason::ClassConstraint { class: req.class },
        });
    }
    if state.total_load() + b > cfg.link_capacity {
        return Ok(Decision::Blocked {
            reason: BlockReason::LinkCapacity,
        });
    }
    Ok(Decision::Admitted {
        native: b,
        loan: Bandwidth::ZERO,
    })
}

use super::{compute_loans, preemption_order, BlockReason, ClassConfig, Decision, LinkState, Lsp, LspId, LspRequest};
use crate::units::Bandwidth;
use crate::Result;

/// AllocTC-Sharing admission.
///
/// 1. If the link has room (`total_load + b <= M`) the request is admitted;
///    whatever does not fit in its class's doll is carried as a loan.
/// 2. Otherwise LSPs are reclaimed in [`alloctc_legal_victims`] order until
///    the free bandwidth covers `b` and the request fits in its own doll.
///    Loans are only ever granted out of idle bandwidth, so a preempting
///    admission is always fully native.
/// 3. If no prefix of the legal victims achieves that, the request is
///    blocked and nothing is preempted.
pub fn alloctc_admit(state: &LinkState, req: &LspRequest, cfg: &ClassConfig) -> Result<Decision> {
    req.validate(cfg)?;
    let b = req.bandwidth;
    let free = cfg.link_capacity - state.total_load();
    if b <= free {
        let (native, loan) = split_after(state, &[], req, cfg);
        return Ok(Decision::Admitted { native, loan });
    }

    // Removing victims never shrinks the request's native share, so the
    // first prefix that works is the shortest one.
    let mut available = free;
    let mut victims = Vec::new();
    for lsp in legal_victims(state, req) {
        available += lsp.bandwidth();
        victims.push(lsp.id());
        if available >= b {
            let (native, loan) = split_after(state, &victims, req, cfg);
            if loan == Bandwidth::ZERO {
                return Ok(Decision::AdmittedWithPreemption { native, loan, victims });
            }
        }
    }
    let reason = if available < b {
        BlockReason::Saturated { reclaimable: available }
    } else {
        BlockReason::OwnDoll { class: req.class }
    };
    Ok(Decision::Blocked { reason })
}

/// Every LSP a request may reclaim, in reclamation order:
///
/// - first, loan-carrying LSPs of any other class, lowest class first and
///   youngest first within a class (the whole LSP is torn down);
/// - then fully native LSPs of strictly lower classes, in the same order.
pub fn alloctc_legal_victims(state: &LinkState, req: &LspRequest) -> Vec<LspId> {
    legal_victims(state, req).into_iter().map(Lsp::id).collect()
}

fn legal_victims<'a>(state: &'a LinkState, req: &LspRequest) -> Vec<&'a Lsp> {
    let mut borrowers: Vec<&Lsp> = state
        .lsps()
        .filter(|l| l.loan.is_positive() && l.class() != req.class)
        .collect();
    borrowers.sort_by(|a, b| preemption_order(a, b));

    let mut lower: Vec<&Lsp> = state
        .lsps()
        .filter(|l| !l.loan.is_positive() && l.class() < req.class)
        .collect();
    lower.sort_by(|a, b| preemption_order(a, b));

    borrowers.extend(lower);
    borrowers
}

/// Native/loan split the request would receive once `victims` are gone.
fn split_after(state: &LinkState, victims: &[LspId], req: &LspRequest, cfg: &ClassConfig) -> (Bandwidth, Bandwidth) {
    let candidate = Lsp {
        request: req.clone(),
        native: req.bandwidth,
        loan: Bandwidth::ZERO,
        setup_time: req.arrival,
    };
    let remaining = state.lsps().filter(|l| !victims.contains(&l.id()));
    let acc = compute_loans(remaining.chain(std::iter::once(&candidate)), cfg);
    acc.splits[&req.id]
}

use super::{preemption_order, BlockReason, ClassConfig, Decision, LinkState, LoadKind, Lsp, LspId, LspRequest};
use crate::units::Bandwidth;
use crate::Result;

/// Russian Doll Model admission.
///
/// A class-`c` request of bandwidth `b` fits iff
/// `cumulative_load(k) + b <= BC_k` for every `k <= c`. The `k = c` doll
/// contains only classes `>= c`, so when it binds the request is blocked.
/// Any other violated doll is restored by preempting classes below `c`.
pub fn rdm_admit(state: &LinkState, req: &LspRequest, cfg: &ClassConfig) -> Result<Decision> {
    req.validate(cfg)?;
    let class = req.class;
    let b = req.bandwidth;

    if state.cumulative_load(class, LoadKind::All) + b > cfg.bc[class] {
        return Ok(Decision::Blocked {
            reason: BlockReason::OwnDoll { class },
        });
    }
    let violated = (0..class).any(|k| state.cumulative_load(k, LoadKind::All) + b > cfg.bc[k]);
    if !violated {
        return Ok(Decision::Admitted {
            native: b,
            loan: Bandwidth::ZERO,
        });
    }
    Ok(Decision::AdmittedWithPreemption {
        native: b,
        loan: Bandwidth::ZERO,
        victims: restoring_victims(state, req, cfg),
    })
}

/// Picks whole LSPs of classes below `req.class` until every doll
/// `k < req.class` admits the request.
///
/// Dolls are restored from the innermost (`k = class - 1`) outwards, since a
/// victim taken for an inner doll also counts towards every outer one. Doll
/// `k` can only be relieved by classes in `k..class`; among those the lowest
/// class is preempted first and, within a class, the youngest LSP.
fn restoring_victims(state: &LinkState, req: &LspRequest, cfg: &ClassConfig) -> Vec<LspId> {
    let class = req.class;
    let mut by_class: Vec<Vec<&Lsp>> = vec![Vec::new(); class];
    for lsp in state.lsps().filter(|l| l.class() < class) {
        by_class[lsp.class()].push(lsp);
    }
    for lsps in &mut by_class {
        lsps.sort_by(|a, b| preemption_order(a, b));
    }

    let mut taken = vec![0usize; class];
    let mut freed = vec![Bandwidth::ZERO; class];
    let mut victims = Vec::new();

    for k in (0..class).rev() {
        let freed_above_k: Bandwidth = freed[k..].iter().sum();
        let mut excess = state.cumulative_load(k, LoadKind::All) + req.bandwidth - cfg.bc[k] - freed_above_k;
        'restore: while excess.is_positive() {
            for i in k..class {
                if let Some(lsp) = by_class[i].get(taken[i]) {
                    taken[i] += 1;
                    freed[i] += lsp.bandwidth();
                    excess -= lsp.bandwidth();
                    victims.push(lsp.id());
                    continue 'restore;
                }
            }
            unreachable!("emptying classes {k}..{class} always restores doll {k}");
        }
    }
    victims
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;
    use crate::units::SimTime;

    fn req(id: u64, class: usize, tenths: i64) -> LspRequest {
        LspRequest::new(
            id,
            class,
            Bandwidth::from_tenths(tenths),
            SimTime::from_secs(id as i64),
            SimTime::from_secs(100),
        )
    }

    fn state_of(reqs: Vec<LspRequest>) -> LinkState {
        LinkState::from_admitted(Model::Rdm, ClassConfig::stm4_three_class(), reqs).unwrap()
    }

    #[test]
    fn top_class_fills_its_doll_exactly() {
        let cfg = ClassConfig::stm4_three_class();
        let state = state_of(vec![]);
        let d = rdm_admit(&state, &req(0, 2, 2488), &cfg).unwrap();
        assert_eq!(
            d,
            Decision::Admitted {
                native: Bandwidth::from_tenths(2488),
                loan: Bandwidth::ZERO
            }
        );
    }

    #[test]
    fn full_top_doll_blocks() {
        let cfg = ClassConfig::stm4_three_class();
        let state = state_of(vec![req(0, 2, 2488)]);
        let d = rdm_admit(&state, &req(1, 2, 50), &cfg).unwrap();
        assert_eq!(
            d,
            Decision::Blocked {
                reason: BlockReason::OwnDoll { class: 2 }
            }
        );
    }

    #[test]
    fn lowest_class_is_preempted_to_restore_link_doll() {
        // loads (600, 0, 0); class-2 request of 100 needs >= 78 freed from TC0
        let cfg = ClassConfig::stm4_three_class();
        let state = state_of(vec![req(0, 0, 2000), req(1, 0, 2000), req(2, 0, 2000)]);
        let d = rdm_admit(&state, &req(9, 2, 1000), &cfg).unwrap();
        let Decision::AdmittedWithPreemption { victims, .. } = &d else {
            panic!("expected preemption, got {d:?}");
        };
        // youngest first: id 2 frees 200 >= 78
        assert_eq!(victims, &vec![2]);
        let freed: Bandwidth = victims.iter().map(|v| state.get(*v).unwrap().bandwidth()).sum();
        assert!(freed >= Bandwidth::from_mbps(78));
        let next = state.with_admitted(&req(9, 2, 1000), &d).unwrap();
        assert!(next.total_load() <= cfg.link_capacity);
    }

    #[test]
    fn middle_doll_is_restored_from_class_one() {
        // class 1 at 400 plus class 2 at 30: doll 1 = 430, a class-2 request
        // of 10 breaks BC_1 = 435.4 by 4.6 and only class 1 can relieve it.
        let cfg = ClassConfig::stm4_three_class();
        let state = state_of(vec![req(0, 0, 1000), req(1, 1, 2000), req(2, 1, 2000), req(3, 2, 300)]);
        let d = rdm_admit(&state, &req(9, 2, 100), &cfg).unwrap();
        assert_eq!(d.victims(), &[2]);
    }

    #[test]
    fn class_zero_never_preempts() {
        let cfg = ClassConfig::stm4_three_class();
        let state = state_of(vec![req(0, 0, 6200)]);
        let d = rdm_admit(&state, &req(1, 0, 30), &cfg).unwrap();
        assert!(!d.is_admitted());
    }

    #[test]
    fn own_doll_blocks_regardless_of_lower_loads() {
        let cfg = ClassConfig::stm4_three_class();
        for lower in [0, 1000, 3000] {
            let mut reqs = vec![req(0, 1, 4000)];
            if lower > 0 {
                reqs.push(req(1, 0, lower));
            }
            let state = state_of(reqs);
            let d = rdm_admit(&state, &req(5, 1, 400), &cfg).unwrap();
            assert_eq!(
                d,
                Decision::Blocked {
                    reason: BlockReason::OwnDoll { class: 1 }
                }
            );
        }
    }
}

use std::collections::{BTreeMap, BTreeSet};

use super::{compute_loans, ClassConfig, ClassIndex, Decision, Lsp, LspId, LspRequest, Model};
use crate::units::Bandwidth;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadKind {
    /// Whole LSP bandwidth, loans included.
    All,
    /// Native part only.
    Native,
}

/// The admitted LSPs of one link and their per-class aggregates.
///
/// Per-class and total loads are maintained incrementally. The native/loan
/// split is re-derived after every change: under AllocTC by
/// [`compute_loans`], under MAM and RDM every LSP is fully native.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkState {
    model: Model,
    cfg: ClassConfig,
    admitted: BTreeMap<LspId, Lsp>,
    load: Vec<Bandwidth>,
    native_load: Vec<Bandwidth>,
    loan_load: Vec<Bandwidth>,
    total_load: Bandwidth,
}

impl LinkState {
    /// An empty link. Fails if `cfg` is not valid for `model`.
    pub fn new(model: Model, cfg: ClassConfig) -> Result<Self> {
        cfg.validate(model)?;
        let classes = cfg.class_count();
        Ok(LinkState {
            model,
            cfg,
            admitted: BTreeMap::new(),
            load: vec![Bandwidth::ZERO; classes],
            native_load: vec![Bandwidth::ZERO; classes],
            loan_load: vec![Bandwidth::ZERO; classes],
            total_load: Bandwidth::ZERO,
        })
    }

    /// Builds a state holding exactly `requests` (setup time = arrival)
    /// without running admission control. Useful for fixtures and for
    /// from-scratch recomputation; the result may violate the model's
    /// invariants.
    pub fn from_admitted<I>(model: Model, cfg: ClassConfig, requests: I) -> Result<Self>
    where
        I: IntoIterator<Item = LspRequest>,
    {
        let mut state = LinkState::new(model, cfg)?;
        for req in requests {
            req.validate(&state.cfg)?;
            if state.admitted.contains_key(&req.id) {
                return Err(Error::InvalidRequest {
                    id: req.id,
                    reason: "duplicate LSP id".into(),
                });
            }
            state.insert(req);
        }
        state.reaccount();
        Ok(state)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn config(&self) -> &ClassConfig {
        &self.cfg
    }

    pub fn class_count(&self) -> usize {
        self.cfg.class_count()
    }

    pub fn load(&self) -> &[Bandwidth] {
        &self.load
    }

    pub fn native_load(&self) -> &[Bandwidth] {
        &self.native_load
    }

    pub fn loan_load(&self) -> &[Bandwidth] {
        &self.loan_load
    }

    pub fn total_load(&self) -> Bandwidth {
        self.total_load
    }

    pub fn free(&self) -> Bandwidth {
        self.cfg.link_capacity - self.total_load
    }

    pub fn len(&self) -> usize {
        self.admitted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.admitted.is_empty()
    }

    pub fn get(&self, id: LspId) -> Option<&Lsp> {
        self.admitted.get(&id)
    }

    pub fn contains(&self, id: LspId) -> bool {
        self.admitted.contains_key(&id)
    }

    /// Admitted LSPs in id order.
    pub fn lsps(&self) -> impl Iterator<Item = &Lsp> + '_ {
        self.admitted.values()
    }

    /// `sum_{i >= k}` of the per-class load (or native load).
    pub fn cumulative_load(&self, k: ClassIndex, kind: LoadKind) -> Bandwidth {
        debug_assert!(k < self.class_count(), "class {k} out of range");
        let per_class = match kind {
            LoadKind::All => &self.load,
            LoadKind::Native => &self.native_load,
        };
        per_class.iter().skip(k).sum()
    }

    /// Runs the state's own model against `req`.
    pub fn admit(&self, req: &LspRequest) -> Result<Decision> {
        self.model.admit(self, req, &self.cfg)
    }

    /// Applies an admission decision produced by [`LinkState::admit`] for
    /// this exact state: victims are removed, the new LSP is inserted and
    /// the accounting is refreshed. On error the state is left unchanged.
    pub fn apply(&mut self, req: &LspRequest, decision: &Decision) -> Result<()> {
        let stale = |reason: String| Error::StaleDecision { id: req.id, reason };
        let Some(split) = decision.split() else {
            return Err(stale("cannot apply a blocked decision".into()));
        };
        req.validate(&self.cfg)?;
        if self.admitted.contains_key(&req.id) {
            return Err(stale(format!("LSP {} is already admitted", req.id)));
        }
        let mut seen = BTreeSet::new();
        for &victim in decision.victims() {
            if !self.admitted.contains_key(&victim) {
                return Err(stale(format!("victim {victim} is not admitted")));
            }
            if !seen.insert(victim) {
                return Err(stale(format!("victim {victim} listed twice")));
            }
        }

        let mut next = self.clone();
        for &victim in decision.victims() {
            next.remove(victim);
        }
        next.insert(req.clone());
        next.reaccount();

        let lsp = &next.admitted[&req.id];
        if (lsp.native, lsp.loan) != split {
            return Err(stale(format!(
                "decision split ({}, {}) differs from the resulting ({}, {})",
                split.0, split.1, lsp.native, lsp.loan
            )));
        }
        *self = next;
        Ok(())
    }

    /// Pure form of [`LinkState::apply`].
    pub fn with_admitted(&self, req: &LspRequest, decision: &Decision) -> Result<LinkState> {
        let mut next = self.clone();
        next.apply(req, decision)?;
        Ok(next)
    }

    /// Removes an LSP (departure or teardown) and refreshes the accounting.
    pub fn release(&mut self, id: LspId) -> Result<Lsp> {
        if !self.admitted.contains_key(&id) {
            return Err(Error::UnknownLsp(id));
        }
        let lsp = self.remove(id);
        self.reaccount();
        Ok(lsp)
    }

    /// Pure form of [`LinkState::release`].
    pub fn with_released(&self, id: LspId) -> Result<LinkState> {
        let mut next = self.clone();
        next.release(id)?;
        Ok(next)
    }

    fn insert(&mut self, req: LspRequest) {
        let class = req.class;
        let bandwidth = req.bandwidth;
        let setup_time = req.arrival;
        self.admitted.insert(
            req.id,
            Lsp {
                request: req,
                native: bandwidth,
                loan: Bandwidth::ZERO,
                setup_time,
            },
        );
        self.load[class] += bandwidth;
        self.total_load += bandwidth;
    }

    fn remove(&mut self, id: LspId) -> Lsp {
        let lsp = self.admitted.remove(&id).expect("caller checked presence");
        self.load[lsp.class()] -= lsp.bandwidth();
        self.total_load -= lsp.bandwidth();
        lsp
    }

    fn reaccount(&mut self) {
        match self.model {
            Model::Mam | Model::Rdm => {
                for lsp in self.admitted.values_mut() {
                    lsp.native = lsp.bandwidth();
                    lsp.loan = Bandwidth::ZERO;
                }
                self.native_load.clone_from(&self.load);
                self.loan_load.fill(Bandwidth::ZERO);
            }
            Model::AllocTc => {
                let acc = compute_loans(self.admitted.values(), &self.cfg);
                for (id, (native, loan)) in &acc.splits {
                    let lsp = self.admitted.get_mut(id).expect("split of an admitted LSP");
                    lsp.native = *native;
                    lsp.loan = *loan;
                }
                self.native_load = acc.native;
                self.loan_load = acc.loan;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn with_loads(model: Model, loads: [i64; 3]) -> LinkState {
        let reqs = loads
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .map(|(class, &l)| req(class as u64, class, l * 10));
        LinkState::from_admitted(model, ClassConfig::stm4_three_class(), reqs).unwrap()
    }

    #[test]
    fn cumulative_load_sums_upper_classes() {
        let empty = LinkState::new(Model::Rdm, ClassConfig::stm4_three_class()).unwrap();
        assert_eq!(empty.cumulative_load(0, LoadKind::All), Bandwidth::ZERO);

        let state = with_loads(Model::Rdm, [100, 50, 200]);
        assert_eq!(state.cumulative_load(1, LoadKind::All), Bandwidth::from_mbps(250));
        assert_eq!(state.cumulative_load(0, LoadKind::All), Bandwidth::from_mbps(350));
        assert_eq!(state.cumulative_load(2, LoadKind::Native), Bandwidth::from_mbps(200));
    }

    #[test]
    fn apply_admitted_on_empty_link() {
        let mut state = LinkState::new(Model::Mam, ClassConfig::stm4_three_class()).unwrap();
        let r = req(1, 1, 123);
        let d = state.admit(&r).unwrap();
        state.apply(&r, &d).unwrap();
        assert_eq!(state.total_load(), Bandwidth::from_tenths(123));
        assert_eq!(state.len(), 1);
    }

    #[test]
    fn apply_with_two_victims_changes_count_by_minus_one() {
        let mut state = with_loads(Model::Rdm, [300, 0, 0]);
        let extra = req(5, 0, 3000);
        let d = state.admit(&extra).unwrap();
        state.apply(&extra, &d).unwrap();
        let before = state.len();
        let decision = Decision::AdmittedWithPreemption {
            native: Bandwidth::from_mbps(10),
            loan: Bandwidth::ZERO,
            victims: vec![0, 5],
        };
        let next = state.with_admitted(&req(9, 2, 100), &decision).unwrap();
        assert_eq!(next.len(), before - 2 + 1);
        assert_eq!(next.total_load(), Bandwidth::from_mbps(10));
    }

    #[test]
    fn stale_decisions_are_rejected_without_mutation() {
        let mut state = with_loads(Model::Rdm, [100, 0, 0]);
        let original = state.clone();
        let r = req(9, 2, 100);
        let missing = Decision::AdmittedWithPreemption {
            native: Bandwidth::from_mbps(10),
            loan: Bandwidth::ZERO,
            victims: vec![42],
        };
        assert!(matches!(state.apply(&r, &missing), Err(Error::StaleDecision { .. })));
        let wrong_split = Decision::Admitted {
            native: Bandwidth::from_mbps(1),
            loan: Bandwidth::ZERO,
        };
        assert!(matches!(
            state.apply(&r, &wrong_split),
            Err(Error::StaleDecision { .. })
        ));
        let blocked = Decision::Blocked {
            reason: super::super::BlockReason::LinkCapacity,
        };
        assert!(state.apply(&r, &blocked).is_err());
        assert_eq!(state, original);
    }

    #[test]
    fn release_only_lsp_gives_empty_state() {
        let empty = LinkState::new(Model::AllocTc, ClassConfig::stm4_three_class()).unwrap();
        let r = req(0, 2, 3000);
        let d = empty.admit(&r).unwrap();
        let one = empty.with_admitted(&r, &d).unwrap();
        assert_eq!(one.with_released(0).unwrap(), empty);
    }

    #[test]
    fn release_unknown_id_is_an_error() {
        let mut state = with_loads(Model::Mam, [10, 0, 0]);
        assert!(matches!(state.release(77), Err(Error::UnknownLsp(77))));
    }

    #[test]
    fn release_under_mam_reduces_class_load_by_bandwidth() {
        let mut state = with_loads(Model::Mam, [100, 50, 200]);
        state.release(1).unwrap();
        assert_eq!(state.load()[1], Bandwidth::ZERO);
        assert_eq!(state.total_load(), Bandwidth::from_mbps(300));
    }

    #[test]
    fn release_shrinks_remaining_loan() {
        // class-1 LSP (200) admitted first, then a class-2 LSP of 300 that
        // carries 51.2 on loan; class 1 borrows 13.4 below the class-2 natives.
        let cfg = ClassConfig::stm4_three_class();
        let state = LinkState::from_admitted(Model::AllocTc, cfg.clone(), [req(0, 1, 2000), req(1, 2, 3000)]).unwrap();
        assert_eq!(state.get(1).unwrap().loan, Bandwidth::from_tenths(512));
        assert_eq!(state.get(0).unwrap().loan, Bandwidth::from_tenths(134));
        // Releasing the class-2 LSP frees room inside BC_1: the class-1 loan goes.
        let after = state.with_released(1).unwrap();
        assert_eq!(after.get(0).unwrap().loan, Bandwidth::ZERO);
        assert_eq!(after.native_load()[1], Bandwidth::from_mbps(200));

        // Add a younger class-2 LSP of 100: fully on loan.
        let state =
            LinkState::from_admitted(Model::AllocTc, cfg, [req(0, 1, 2000), req(1, 2, 2000), req(2, 2, 1000)]).unwrap();
        assert_eq!(state.get(2).unwrap().loan, Bandwidth::from_tenths(512));
        let after = state.with_released(0).unwrap();
        // Releasing class 1 changes nothing for class 2: its doll is BC_2.
        assert_eq!(after.get(2).unwrap().loan, Bandwidth::from_tenths(512));
        // Releasing the older class-2 LSP lets the younger one become native.
        let after = state.with_released(1).unwrap();
        assert_eq!(after.get(2).unwrap().loan, Bandwidth::ZERO);
        assert_eq!(after.loan_load(), &[Bandwidth::ZERO; 3]);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let res = LinkState::from_admitted(
            Model::Rdm,
            ClassConfig::stm4_three_class(),
            [req(1, 0, 10), req(1, 1, 10)],
        );
        assert!(res.is_err());
    }
}

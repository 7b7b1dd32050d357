use std::collections::BTreeMap;

use super::{ClassConfig, Lsp, LspId};
use crate::units::Bandwidth;

/// Canonical native/loan accounting of an admitted set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoanAccounting {
    pub native: Vec<Bandwidth>,
    pub loan: Vec<Bandwidth>,
    /// `(native, loan)` per LSP.
    pub splits: BTreeMap<LspId, (Bandwidth, Bandwidth)>,
}

/// Splits every LSP's bandwidth into a native part (inside its class's doll)
/// and a loan (borrowed from headroom below it).
///
/// Classes are visited from the highest down to 0 and, within a class, in
/// setup order (ties by id). Each LSP takes as much native bandwidth as keeps
/// `sum_{i>=k} native_i <= BC_k` for every `k <= class`; the rest is loan.
/// Class 0 is always fully native. The result depends only on the set, not
/// on the order of `lsps`.
pub fn compute_loans<'a, I>(lsps: I, cfg: &ClassConfig) -> LoanAccounting
where
    I: IntoIterator<Item = &'a Lsp>,
{
    let classes = cfg.class_count();
    let mut ordered: Vec<&Lsp> = lsps.into_iter().collect();
    ordered.sort_by(|a, b| {
        b.class()
            .cmp(&a.class())
            .then(a.setup_time.cmp(&b.setup_time))
            .then(a.id().cmp(&b.id()))
    });

    // tightest constraint among BC_0..=BC_k
    let mut ceiling: Vec<Bandwidth> = Vec::with_capacity(classes);
    for (k, bc) in cfg.bc.iter().enumerate() {
        ceiling.push(if k == 0 { *bc } else { ceiling[k - 1].min(*bc) });
    }

    let mut acc = LoanAccounting {
        native: vec![Bandwidth::ZERO; classes],
        loan: vec![Bandwidth::ZERO; classes],
        splits: BTreeMap::new(),
    };
    // Every LSP visited so far has class >= the current one, so the nested sum
    // for any k <= class is simply the running total.
    let mut native_total = Bandwidth::ZERO;
    for lsp in ordered {
        let class = lsp.class();
        let demand = lsp.bandwidth();
        let native = if class == 0 {
            demand
        } else {
            demand.min(ceiling[class] - native_total).max(Bandwidth::ZERO)
        };
        let loan = demand - native;
        native_total += native;
        acc.native[class] += native;
        acc.loan[class] += loan;
        acc.splits.insert(lsp.id(), (native, loan));
    }
    acc
}

use std::fmt;

use super::{compute_loans, ClassConfig, ClassIndex, LinkState, LoadKind, LspId, Model};
use crate::units::Bandwidth;

/// A broken invariant, naming the constraint and the offending quantities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ModelMismatch {
        state: Model,
        expected: Model,
    },
    ConfigMismatch,
    LinkCapacity {
        total: Bandwidth,
        capacity: Bandwidth,
    },
    /// MAM: `load_class <= BC_class`.
    ClassConstraint {
        class: ClassIndex,
        load: Bandwidth,
        bc: Bandwidth,
    },
    /// RDM: `sum_{i>=k} load_i <= BC_k`.
    NestedLoad {
        k: ClassIndex,
        cumulative: Bandwidth,
        bc: Bandwidth,
    },
    /// AllocTC: `sum_{i>=k} native_i <= BC_k`.
    NestedNative {
        k: ClassIndex,
        cumulative: Bandwidth,
        bc: Bandwidth,
    },
    /// MAM and RDM never carry loans.
    UnexpectedLoan {
        class: ClassIndex,
        loan: Bandwidth,
    },
    /// The lowest class owns the whole link and never borrows.
    LowestClassLoan {
        loan: Bandwidth,
    },
    LspSplit {
        id: LspId,
        native: Bandwidth,
        loan: Bandwidth,
        bandwidth: Bandwidth,
    },
    /// A stored aggregate disagrees with the sum over admitted LSPs.
    Aggregate {
        what: &'static str,
        class: Option<ClassIndex>,
        stored: Bandwidth,
        recomputed: Bandwidth,
    },
    /// A stored split differs from the canonical accounting.
    NonCanonicalSplit {
        id: LspId,
        stored: (Bandwidth, Bandwidth),
        canonical: (Bandwidth, Bandwidth),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ModelMismatch { state, expected } => {
                write!(f, "state built for {state}, checked as {expected}")
            }
            Violation::ConfigMismatch => f.write_str("state carries a different class configuration"),
            Violation::LinkCapacity { total, capacity } => {
                write!(f, "link capacity: total load {total} > M {capacity}")
            }
            Violation::ClassConstraint { class, load, bc } => {
                write!(f, "class constraint: load_{class} {load} > BC_{class} {bc}")
            }
            Violation::NestedLoad { k, cumulative, bc } => {
                write!(f, "nested load k={k}: sum(load_i, i>={k}) {cumulative} > BC_{k} {bc}")
            }
            Violation::NestedNative { k, cumulative, bc } => {
                write!(
                    f,
                    "nested native k={k}: sum(native_i, i>={k}) {cumulative} > BC_{k} {bc}"
                )
            }
            Violation::UnexpectedLoan { class, loan } => write!(f, "loan_{class} = {loan} under a loan-free model"),
            Violation::LowestClassLoan { loan } => write!(f, "loan_0 = {loan}, must be zero"),
            Violation::LspSplit {
                id,
                native,
                loan,
                bandwidth,
            } => {
                write!(
                    f,
                    "LSP {id}: native {native} + loan {loan} does not split bandwidth {bandwidth}"
                )
            }
            Violation::Aggregate {
                what,
                class,
                stored,
                recomputed,
            } => match class {
                Some(c) => write!(f, "{what}_{c}: stored {stored}, recomputed {recomputed}"),
                None => write!(f, "{what}: stored {stored}, recomputed {recomputed}"),
            },
            Violation::NonCanonicalSplit { id, stored, canonical } => write!(
                f,
                "LSP {id}: split ({}, {}) differs from canonical ({}, {})",
                stored.0, stored.1, canonical.0, canonical.1
            ),
        }
    }
}

/// Checks every invariant of `model` on `state`. Empty iff all hold.
pub fn verify_invariants(state: &LinkState, cfg: &ClassConfig, model: Model) -> Vec<Violation> {
    let mut out = Vec::new();
    if state.model() != model {
        out.push(Violation::ModelMismatch {
            state: state.model(),
            expected: model,
        });
    }
    if state.config() != cfg {
        out.push(Violation::ConfigMismatch);
    }
    let classes = cfg.class_count();
    if state.class_count() != classes {
        return out;
    }

    check_aggregates(state, &mut out);

    if state.total_load() > cfg.link_capacity {
        out.push(Violation::LinkCapacity {
            total: state.total_load(),
            capacity: cfg.link_capacity,
        });
    }

    match model {
        Model::Mam => {
            for (class, (&load, &bc)) in state.load().iter().zip(&cfg.bc).enumerate() {
                if load > bc {
                    out.push(Violation::ClassConstraint { class, load, bc });
                }
            }
            loan_free(state, &mut out);
        }
        Model::Rdm => {
            for k in 0..classes {
                let cumulative = state.cumulative_load(k, LoadKind::All);
                if cumulative > cfg.bc[k] {
                    out.push(Violation::NestedLoad {
                        k,
                        cumulative,
                        bc: cfg.bc[k],
                    });
                }
            }
            loan_free(state, &mut out);
        }
        Model::AllocTc => {
            for k in 0..classes {
                let cumulative = state.cumulative_load(k, LoadKind::Native);
                if cumulative > cfg.bc[k] {
                    out.push(Violation::NestedNative {
                        k,
                        cumulative,
                        bc: cfg.bc[k],
                    });
                }
            }
            if state.loan_load()[0] != Bandwidth::ZERO {
                out.push(Violation::LowestClassLoan {
                    loan: state.loan_load()[0],
                });
            }
            let canonical = compute_loans(state.lsps(), cfg);
            for lsp in state.lsps() {
                let stored = (lsp.native, lsp.loan);
                let expected = canonical.splits[&lsp.id()];
                if stored != expected {
                    out.push(Violation::NonCanonicalSplit {
                        id: lsp.id(),
                        stored,
                        canonical: expected,
                    });
                }
            }
        }
    }
    out
}

fn loan_free(state: &LinkState, out: &mut Vec<Violation>) {
    for (class, &loan) in state.loan_load().iter().enumerate() {
        if loan != Bandwidth::ZERO {
            out.push(Violation::UnexpectedLoan { class, loan });
        }
    }
}

fn check_aggregates(state: &LinkState, out: &mut Vec<Violation>) {
    let classes = state.class_count();
    let mut load = vec![Bandwidth::ZERO; classes];
    let mut native = vec![Bandwidth::ZERO; classes];
    let mut loan = vec![Bandwidth::ZERO; classes];
    for lsp in state.lsps() {
        if lsp.native + lsp.loan != lsp.bandwidth() || lsp.native < Bandwidth::ZERO || lsp.loan < Bandwidth::ZERO {
            out.push(Violation::LspSplit {
                id: lsp.id(),
                native: lsp.native,
                loan: lsp.loan,
                bandwidth: lsp.bandwidth(),
            });
        }
        load[lsp.class()] += lsp.bandwidth();
        native[lsp.class()] += lsp.native;
        loan[lsp.class()] += lsp.loan;
    }
    let vectors = [
        ("load", state.load(), &load),
        ("native_load", state.native_load(), &native),
        ("loan_load", state.loan_load(), &loan),
    ];
    for (what, stored, recomputed) in vectors {
        for class in 0..classes {
            if stored[class] != recomputed[class] {
                out.push(Violation::Aggregate {
                    what,
                    class: Some(class),
                    stored: stored[class],
                    recomputed: recomputed[class],
                });
            }
        }
    }
    let total: Bandwidth = load.iter().sum();
    if state.total_load() != total {
        out.push(Violation::Aggregate {
            what: "total_load",
            class: None,
            stored: state.total_load(),
            recomputed: total,
        });
    }
}

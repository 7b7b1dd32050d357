#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use bamsim::model::{ClassConfig, Decision, LinkState, Lsp, LspId, LspRequest, Model};
use bamsim::units::{Bandwidth, SimTime};
use bamsim::workload::WorkloadTrace;
use proptest::prelude::*;

/// M = 10 with constraints at 100/70/40 percent.
pub fn toy_config() -> ClassConfig {
    ClassConfig::new(
        vec![
            Bandwidth::from_mbps(10),
            Bandwidth::from_mbps(7),
            Bandwidth::from_mbps(4),
        ],
        Bandwidth::from_mbps(10),
    )
    .with_mam_overprovision(true)
}

/// (id, class, bandwidth in tenths, setup time in ms)
pub type LiveLsp = (LspId, usize, i64, i64);

/// Native/loan split of every live LSP, in tenths.
///
/// Under AllocTC the LSPs are ordered by class descending, then setup time
/// and id ascending; `cap_j` is the smallest constraint among classes
/// `0..=class_j`. The native total of the first `i` LSPs is then
/// `min(B(1..=i), min_j cap_j + B(j+1..=i))` where `B` sums bandwidths, and
/// each LSP's native share is the increment of that total.
pub fn oracle_splits(model: Model, cfg: &ClassConfig, live: &[LiveLsp]) -> BTreeMap<LspId, (i64, i64)> {
    if model != Model::AllocTc {
        return live.iter().map(|&(id, _, b, _)| (id, (b, 0))).collect();
    }
    let mut order: Vec<LiveLsp> = live.to_vec();
    order.sort_by_key(|&(id, class, _, setup)| (Reverse(class), setup, id));
    let cap = |class: usize| cfg.bc[..=class].iter().map(|b| b.tenths()).min().unwrap();

    let mut out = BTreeMap::new();
    let mut prev_total = 0;
    for i in 0..order.len() {
        let sum = |from: usize| order[from..=i].iter().map(|l| l.2).sum::<i64>();
        let mut total = sum(0);
        for (j, &(_, class, _, _)) in order[..=i].iter().enumerate() {
            let tail = if j < i { sum(j + 1) } else { 0 };
            total = total.min(cap(class) + tail);
        }
        let (id, _, b, _) = order[i];
        let native = total - prev_total;
        out.insert(id, (native, b - native));
        prev_total = total;
    }
    out
}

/// Compares every stored quantity of `state` with a recomputation over
/// `live`, the LSP set tracked outside the state.
pub fn check_against_oracle(state: &LinkState, live: &BTreeMap<LspId, LiveLsp>) -> Result<(), String> {
    let cfg = state.config();
    let n = cfg.class_count();
    let stored: Vec<LspId> = state.lsps().map(Lsp::id).collect();
    let expected: Vec<LspId> = live.keys().copied().collect();
    if stored != expected {
        return Err(format!("live set {stored:?}, expected {expected:?}"));
    }
    let live_vec: Vec<LiveLsp> = live.values().copied().collect();
    let splits = oracle_splits(state.model(), cfg, &live_vec);

    let mut load = vec![0i64; n];
    let mut native = vec![0i64; n];
    let mut loan = vec![0i64; n];
    for &(id, class, b, _) in &live_vec {
        let (nat, lo) = splits[&id];
        load[class] += b;
        native[class] += nat;
        loan[class] += lo;
        let lsp = state.get(id).unwrap();
        if (lsp.native.tenths(), lsp.loan.tenths()) != (nat, lo) {
            return Err(format!(
                "lsp {id}: stored split ({}, {}), oracle ({nat}, {lo})",
                lsp.native.tenths(),
                lsp.loan.tenths()
            ));
        }
    }
    let tenths = |v: &[Bandwidth]| v.iter().map(|b| b.tenths()).collect::<Vec<_>>();
    if tenths(state.load()) != load {
        return Err(format!("load {:?}, oracle {load:?}", tenths(state.load())));
    }
    if tenths(state.native_load()) != native {
        return Err(format!("native {:?}, oracle {native:?}", tenths(state.native_load())));
    }
    if tenths(state.loan_load()) != loan {
        return Err(format!("loan {:?}, oracle {loan:?}", tenths(state.loan_load())));
    }
    if state.total_load().tenths() != load.iter().sum::<i64>() {
        return Err(format!(
            "total {}, oracle {}",
            state.total_load().tenths(),
            load.iter().sum::<i64>()
        ));
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplayCounts {
    pub granted: Vec<u64>,
    pub blocked: Vec<u64>,
    pub preempted: Vec<u64>,
}

/// Replays a trace directly on a [`LinkState`], independent of the library
/// engine, and calls `after_event` with the state and the externally tracked
/// live set after every processed event.
pub fn replay<F>(
    trace: &WorkloadTrace,
    model: Model,
    cfg: &ClassConfig,
    mut after_event: F,
) -> Result<ReplayCounts, String>
where
    F: FnMut(&LinkState, &BTreeMap<LspId, LiveLsp>) -> Result<(), String>,
{
    let n = cfg.class_count();
    let mut counts = ReplayCounts {
        granted: vec![0; n],
        blocked: vec![0; n],
        preempted: vec![0; n],
    };
    let mut state = LinkState::new(model, cfg.clone()).map_err(|e| e.to_string())?;
    let mut live: BTreeMap<LspId, LiveLsp> = BTreeMap::new();
    let by_id: BTreeMap<LspId, &LspRequest> = trace.requests().iter().map(|r| (r.id, r)).collect();

    // (time, departures first, sequence, id)
    let mut queue: BinaryHeap<Reverse<(SimTime, u8, u64, LspId)>> = BinaryHeap::new();
    let mut seq = 0;
    for r in trace.requests() {
        queue.push(Reverse((r.arrival, 1, seq, r.id)));
        seq += 1;
    }
    while let Some(Reverse((time, kind, _, id))) = queue.pop() {
        if kind == 0 {
            if !live.contains_key(&id) {
                continue;
            }
            live.remove(&id);
            state.release(id).map_err(|e| e.to_string())?;
        } else {
            let req = by_id[&id];
            let d = state.admit(req).map_err(|e| e.to_string())?;
            match &d {
                Decision::Blocked { .. } => counts.blocked[req.class] += 1,
                _ => {
                    for v in d.victims() {
                        let (_, class, _, _) = live.remove(v).ok_or(format!("victim {v} not live"))?;
                        counts.preempted[class] += 1;
                    }
                    state.apply(req, &d).map_err(|e| e.to_string())?;
                    live.insert(id, (id, req.class, req.bandwidth.tenths(), time.millis()));
                    counts.granted[req.class] += 1;
                    queue.push(Reverse((time + req.holding, 0, seq, id)));
                    seq += 1;
                }
            }
        }
        after_event(&state, &live)?;
    }
    Ok(counts)
}

/// Traces of up to `max_len` requests on a three-class link; gaps may be
/// zero so simultaneous arrivals and departures occur.
pub fn arb_trace(max_len: usize, max_tenths: i64) -> impl Strategy<Value = WorkloadTrace> {
    prop::collection::vec(
        (
            prop_oneof![Just(0i64), 0i64..4_000],
            0usize..3,
            1i64..=max_tenths,
            prop_oneof![Just(1_000i64), 1i64..20_000],
        ),
        0..=max_len,
    )
    .prop_map(|rows| {
        let mut t = 0;
        let reqs = rows
            .into_iter()
            .enumerate()
            .map(|(i, (gap, class, b, hold))| {
                t += gap;
                LspRequest::new(
                    i as u64,
                    class,
                    Bandwidth::from_tenths(b),
                    SimTime::from_millis(t),
                    SimTime::from_millis(hold),
                )
            })
            .collect();
        WorkloadTrace::from_requests(7, reqs).unwrap()
    })
}

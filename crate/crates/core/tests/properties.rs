mod common;

use std::collections::BTreeMap;

use bamsim::cli::{read_events, read_summary, read_timeseries, write_events, write_summary, write_timeseries};
use bamsim::model::{
    alloctc_admit, compute_loans, rdm_admit, ClassConfig, Decision, LinkState, LoadKind, LspRequest, Model,
};
use bamsim::scenario::preset;
use bamsim::sim::{run, summarize, EventKind, Outcome};
use bamsim::units::{Bandwidth, SimTime};
use bamsim::workload::{class_arrivals, generate_trace, read_trace, write_trace, WorkloadTrace};
use common::{arb_trace, toy_config};
use proptest::prelude::*;

/// A state reached by replaying random admissions under `model`.
fn arb_state(model: Model) -> impl Strategy<Value = (LinkState, u64)> {
    prop::collection::vec((0usize..3, 1i64..=3000), 0..40).prop_map(move |reqs| {
        let cfg = ClassConfig::stm4_three_class();
        let mut state = LinkState::new(model, cfg).unwrap();
        for (i, (class, tenths)) in reqs.iter().enumerate() {
            let req = LspRequest::new(
                i as u64,
                *class,
                Bandwidth::from_tenths(*tenths),
                SimTime::from_secs(i as i64),
                SimTime::from_secs(1),
            );
            let d = state.admit(&req).unwrap();
            if d.is_admitted() {
                state.apply(&req, &d).unwrap();
            }
        }
        (state, reqs.len() as u64)
    })
}

fn request(id: u64, class: usize, tenths: i64) -> LspRequest {
    LspRequest::new(
        id,
        class,
        Bandwidth::from_tenths(tenths),
        SimTime::from_secs(id as i64),
        SimTime::from_secs(1),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn stored_split_is_canonical((state, _) in arb_state(Model::AllocTc)) {
        let acc = compute_loans(state.lsps(), state.config());
        prop_assert_eq!(acc.native, state.native_load().to_vec());
        prop_assert_eq!(acc.loan, state.loan_load().to_vec());
        for l in state.lsps() {
            prop_assert_eq!(acc.splits[&l.id()], (l.native, l.loan));
        }
    }

    #[test]
    fn alloctc_admits_whatever_rdm_admits_without_preemption(
        (state, next) in arb_state(Model::Rdm),
        class in 0usize..3,
        tenths in 1i64..=3000,
    ) {
        // an RDM state has no loans, so it is also a valid AllocTC admitted set
        let reqs = state.lsps().map(|l| l.request.clone());
        let shared = LinkState::from_admitted(Model::AllocTc, state.config().clone(), reqs).unwrap();
        prop_assert!(shared.loan_load().iter().all(|l| *l == Bandwidth::ZERO));
        let req = request(next, class, tenths);
        let cfg = state.config();
        if let Decision::Admitted { .. } = rdm_admit(&state, &req, cfg).unwrap() {
            let ours = alloctc_admit(&shared, &req, cfg).unwrap();
            prop_assert!(matches!(ours, Decision::Admitted { .. }), "{:?}", ours);
        }
    }

    #[test]
    fn rdm_own_doll_blocks(
        (state, next) in arb_state(Model::Rdm),
        class in 0usize..3,
        tenths in 1i64..=3000,
    ) {
        let req = request(next, class, tenths);
        let cfg = state.config();
        if state.cumulative_load(class, LoadKind::All) + req.bandwidth > cfg.bc[class] {
            let d = rdm_admit(&state, &req, cfg).unwrap();
            prop_assert_eq!(d, Decision::Blocked { reason: bamsim::model::BlockReason::OwnDoll { class } });
        }
    }

    #[test]
    fn admission_is_deterministic(
        (state, next) in arb_state(Model::AllocTc),
        class in 0usize..3,
        tenths in 1i64..=3000,
    ) {
        let req = request(next, class, tenths);
        for model in Model::ALL {
            let a = model.admit(&state, &req, state.config());
            let b = model.admit(&state.clone(), &req, state.config());
            prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        }
    }

    #[test]
    fn preemption_victims_free_enough(
        (state, next) in arb_state(Model::AllocTc),
        class in 0usize..3,
        tenths in 1i64..=3000,
    ) {
        let req = request(next, class, tenths);
        let d = alloctc_admit(&state, &req, state.config()).unwrap();
        if let Decision::AdmittedWithPreemption { victims, loan, .. } = &d {
            prop_assert!(!victims.is_empty());
            prop_assert_eq!(*loan, Bandwidth::ZERO);
            let freed: Bandwidth = victims.iter().map(|v| state.get(*v).unwrap().bandwidth()).sum();
            prop_assert!(state.free() + freed >= req.bandwidth);
            let after = state.with_admitted(&req, &d).unwrap();
            prop_assert!(after.total_load() <= state.config().link_capacity);
        }
    }

    #[test]
    fn release_then_readmit_restores_the_state((state, _) in arb_state(Model::AllocTc), pick in any::<prop::sample::Index>()) {
        prop_assume!(!state.is_empty());
        let lsp = state.lsps().nth(pick.index(state.len())).unwrap().clone();
        let released = state.with_released(lsp.id()).unwrap();
        let rebuilt = LinkState::from_admitted(
            Model::AllocTc,
            state.config().clone(),
            released.lsps().map(|l| l.request.clone()).chain([lsp.request.clone()]),
        ).unwrap();
        prop_assert_eq!(rebuilt, state);
    }

    #[test]
    fn mam_never_preempts(trace in arb_trace(60, 80)) {
        let m = run(&trace, Model::Mam, &toy_config()).unwrap();
        prop_assert_eq!(m.preempted(), 0);
    }

    #[test]
    fn replay_is_deterministic_and_conserves_load(trace in arb_trace(60, 80)) {
        let cfg = toy_config();
        for model in Model::ALL {
            let m = run(&trace, model, &cfg).unwrap();
            prop_assert_eq!(&run(&trace, model, &cfg).unwrap(), &m);

            // rebuild the live set from the event log alone
            let mut live: BTreeMap<u64, (usize, Bandwidth)> = BTreeMap::new();
            prop_assert_eq!(m.events.len(), m.samples.len());
            for (e, s) in m.events.iter().zip(&m.samples) {
                match (e.kind, e.outcome) {
                    (EventKind::Arrival, Outcome::Blocked) => {}
                    (EventKind::Arrival, _) => {
                        for v in &e.victims {
                            prop_assert!(live.remove(v).is_some());
                        }
                        live.insert(e.lsp_id, (e.class, e.bandwidth));
                    }
                    (EventKind::Departure, _) => {
                        prop_assert!(live.remove(&e.lsp_id).is_some());
                    }
                }
                let total: Bandwidth = live.values().map(|(_, b)| *b).sum();
                prop_assert_eq!(s.total_load, total);
                for c in 0..3 {
                    let per: Bandwidth = live.values().filter(|(k, _)| *k == c).map(|(_, b)| *b).sum();
                    prop_assert_eq!(s.load[c], per);
                }
                prop_assert!(s.total_load <= cfg.link_capacity);
            }
            prop_assert!(live.is_empty());
        }
    }

    #[test]
    fn trace_text_round_trip(trace in arb_trace(50, 2000)) {
        prop_assume!(!trace.is_empty());
        let mut text = Vec::new();
        write_trace(&trace, &mut text).unwrap();
        let back = read_trace(text.as_slice()).unwrap();
        prop_assert_eq!(&back, &trace);
        prop_assert_eq!(back.fingerprint(), trace.fingerprint());
        let mut again = Vec::new();
        write_trace(&back, &mut again).unwrap();
        prop_assert_eq!(again, text);
    }

    #[test]
    fn csv_artifacts_round_trip(trace in arb_trace(40, 80)) {
        let dir = tempfile::tempdir().unwrap();
        let m = run(&trace, Model::AllocTc, &toy_config()).unwrap();
        let summary = summarize(&m);
        let (ts, ev, su) = (dir.path().join("ts.csv"), dir.path().join("ev.csv"), dir.path().join("su.csv"));
        write_timeseries(&ts, 3, &m.samples).unwrap();
        write_events(&ev, &m.events).unwrap();
        write_summary(&su, &summary.rows).unwrap();

        prop_assert_eq!(read_timeseries(&ts).unwrap(), m.samples.clone());
        prop_assert_eq!(read_events(&ev).unwrap(), m.events.clone());
        let rows = read_summary(&su).unwrap();
        prop_assert_eq!(rows.len(), summary.rows.len());
        for (a, b) in rows.iter().zip(&summary.rows) {
            prop_assert_eq!((a.scope, a.granted, a.blocked, a.preempted), (b.scope, b.granted, b.blocked, b.preempted));
            prop_assert!((a.mean_load - b.mean_load).abs() <= 0.0005);
        }
        // written again from what was read, every file is byte-identical
        let su2 = dir.path().join("su2.csv");
        write_summary(&su2, &rows).unwrap();
        prop_assert_eq!(std::fs::read(&su).unwrap(), std::fs::read(&su2).unwrap());
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>()) {
        let spec = preset("scenario02").unwrap().spec.with_seed(seed);
        let a = generate_trace(&spec).unwrap();
        prop_assert_eq!(a.fingerprint(), generate_trace(&spec).unwrap().fingerprint());
        prop_assert_eq!(a.len(), spec.total_lsps);
        prop_assert!(a.requests().windows(2).all(|w| w[0].arrival <= w[1].arrival));
    }

    #[test]
    fn class_streams_are_independent(seed in any::<u64>(), dropped in 0usize..3) {
        let full = preset("scenario01").unwrap().spec.with_seed(seed);
        let mut reduced = full.clone();
        reduced.generators.remove(dropped);

        let per_class = |t: &WorkloadTrace, c: usize| -> Vec<(SimTime, Bandwidth, SimTime)> {
            t.requests().iter().filter(|r| r.class == c).map(|r| (r.arrival, r.bandwidth, r.holding)).collect()
        };
        let (a, b) = (generate_trace(&full).unwrap(), generate_trace(&reduced).unwrap());
        for g in &reduced.generators {
            let (x, y) = (per_class(&a, g.class), per_class(&b, g.class));
            // both are truncations of one stream
            let n = x.len().min(y.len());
            prop_assert_eq!(&x[..n], &y[..n]);
            let unmerged: Vec<_> = class_arrivals(g, seed).take(n).collect();
            prop_assert_eq!(&x[..n], &unmerged[..]);
        }
    }
}

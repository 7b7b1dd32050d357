//! Runs every example's entry point so the examples keep compiling and
//! working.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }
    };
}

example!(mam_admission);
example!(rdm_preemption);
example!(alloctc_loans);
example!(generate_trace);
example!(custom_scenario);
example!(paired_comparison);
example!(export_csv);

#[test]
fn mam_admission_runs() {
    mam_admission::run_example().unwrap();
}

#[test]
fn rdm_preemption_runs() {
    rdm_preemption::run_example().unwrap();
}

#[test]
fn alloctc_loans_runs() {
    alloctc_loans::run_example().unwrap();
}

#[test]
fn generate_trace_runs() {
    generate_trace::run_example(3).unwrap();
}

#[test]
fn custom_scenario_runs() {
    custom_scenario::run_example().unwrap();
}

#[test]
fn paired_comparison_runs() {
    paired_comparison::run_example("scenario02", 1, 1).unwrap();
}

#[test]
fn export_csv_runs() {
    let dir = tempfile::tempdir().unwrap();
    export_csv::run_example(dir.path()).unwrap();
}

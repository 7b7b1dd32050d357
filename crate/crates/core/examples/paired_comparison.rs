// Replays the same trace under every model for a range of seeds and prints
// grants, blocks, preemptions and granted traffic side by side.
//
// ```text
// cargo run --release --example paired_comparison -- scenario02 1 10
// ```

use bamsim::model::Model;
use bamsim::scenario::load_scenario;
use bamsim::sim::run;
use bamsim::workload::generate_trace;

pub fn run_example(scenario: &str, first: u64, last: u64) -> Result<(), Box<dyn std::error::Error>> {
    let scenario = load_scenario(scenario)?;

    println!(
        "{:>5} {:>8} {:>8} {:>8} {:>8} {:>12}",
        "seed", "model", "granted", "blocked", "preempt", "traffic_mbps"
    );
    for seed in first..=last {
        let trace = generate_trace(&scenario.spec.clone().with_seed(seed))?;
        for model in Model::ALL {
            let m = run(&trace, model, scenario.class_config())?;
            println!(
                "{:>5} {:>8} {:>8} {:>8} {:>8} {:>12}",
                seed,
                model,
                m.granted(),
                m.blocked(),
                m.preempted(),
                m.granted_traffic
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let scenario = args.next().unwrap_or_else(|| "scenario01".into());
    let first: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let last: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(first + 4);
    run_example(&scenario, first, last)
}

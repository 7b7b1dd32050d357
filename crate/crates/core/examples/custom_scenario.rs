// Loading a scenario from JSON text, and what validation errors look like.
//
// ```text
// cargo run --example custom_scenario
// ```

use bamsim::model::Model;
use bamsim::scenario::parse_scenario;
use bamsim::sim::{run, summarize};
use bamsim::workload::generate_trace;

const TWO_CLASSES: &str = r#"{
  "name": "two-class",
  "link": { "capacity_mbps": 100.0 },
  "classes": [
    { "class": 0, "bc_mbps": 100.0 },
    { "class": 1, "bc_mbps": 30.0 }
  ],
  "generators": [
    { "class": 0, "mean_interarrival_s": 1.0, "bandwidth_min_mbps": 1.0,
      "bandwidth_max_mbps": 5.0, "mean_holding_s": 40.0 },
    { "class": 1, "mean_interarrival_s": 0.5, "start_delay_s": 20.0,
      "bandwidth_min_mbps": 1.0, "bandwidth_max_mbps": 5.0, "mean_holding_s": 40.0 }
  ],
  "simulation": { "total_lsps": 400, "seed": 11 },
  "models": ["rdm", "alloctc"]
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = parse_scenario(TWO_CLASSES)?;
    let trace = generate_trace(&scenario.spec)?;
    for model in [Model::Rdm, Model::AllocTc] {
        let t = summarize(&run(&trace, model, scenario.class_config())?).total().clone();
        println!(
            "{model:<8} granted {:>3} blocked {:>3} preempted {:>3} mean load {:.1}",
            t.granted, t.blocked, t.preempted, t.mean_load
        );
    }

    let broken = TWO_CLASSES.replace(r#""bc_mbps": 30.0"#, r#""bc_mbps": 130.0"#);
    match parse_scenario(&broken) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("BC_1 > BC_0 is not nested"),
    }
    let broken = TWO_CLASSES.replace(r#""seed": 11"#, r#""seed": -1"#);
    if let Err(e) = parse_scenario(&broken) {
        println!("rejected: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

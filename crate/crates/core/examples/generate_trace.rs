// Generates the scenario01 workload, prints its first arrivals and its
// fingerprint, and checks that a round trip through the text format is
// lossless.
//
// ```text
// cargo run --example generate_trace -- 7
// ```

use bamsim::scenario::preset;
use bamsim::workload::{generate_trace, read_trace, write_trace};

pub fn run_example(seed: u64) -> Result<(), Box<dyn std::error::Error>> {
    let scenario = preset("scenario01").expect("bundled preset");
    let trace = generate_trace(&scenario.spec.with_seed(seed))?;

    let mut text = Vec::new();
    write_trace(&trace, &mut text)?;
    for line in String::from_utf8(text.clone())?.lines().take(6) {
        println!("{line}");
    }
    println!("...");

    let per_class = (0..3)
        .map(|c| trace.requests().iter().filter(|r| r.class == c).count())
        .collect::<Vec<_>>();
    println!("{} requests, per class {per_class:?}", trace.len());
    println!("fingerprint {}", trace.fingerprint());

    let back = read_trace(text.as_slice())?;
    assert_eq!(back, trace);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    run_example(seed)
}

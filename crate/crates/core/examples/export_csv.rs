// Writes the CSV artifacts of a paired run into a directory and reads
// them back.
//
// ```text
// cargo run --example export_csv -- /tmp/bamsim-out
// ```

use std::path::Path;

use bamsim::cli::{cmd_compare, read_compare, read_events, read_timeseries, RunConfig};

pub fn run_example(out: &Path) -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::new("scenario01", out)
        .with_models("rdm,alloctc".parse()?)
        .with_seed(2);
    let (report, _) = cmd_compare(&cfg)?;
    let dir = &report.repetitions[0].dir;

    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.file_name()))
        .collect::<Result<_, _>>()?;
    files.sort();
    println!("{}: {:?}", dir.display(), files);

    let series = read_timeseries(&dir.join("timeseries_alloctc.csv"))?;
    let events = read_events(&dir.join("events_alloctc.csv"))?;
    println!("alloctc: {} samples, {} events", series.len(), events.len());
    for row in read_compare(&dir.join("compare.csv"))?
        .iter()
        .filter(|r| r.model.to_string() == "alloctc")
    {
        println!(
            "  {:<5} granted {:>4} ({:+})  preempted {:>4} ({:+})",
            row.row.scope.to_string(),
            row.row.granted,
            row.delta_granted,
            row.row.preempted,
            row.delta_preempted
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "bamsim-out".into());
    run_example(Path::new(&out))
}

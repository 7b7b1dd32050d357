// Maximum Allocation Model on the three-class STM-4 link: each class is
// capped by its own constraint and nothing is ever preempted.
//
// ```text
// cargo run --example mam_admission
// ```

use bamsim::model::{ClassConfig, Decision, LinkState, LspRequest, Model};
use bamsim::units::{Bandwidth, SimTime};

pub fn run_example() -> bamsim::Result<()> {
    let cfg = ClassConfig::stm4_three_class();
    let mut link = LinkState::new(Model::Mam, cfg)?;

    // class 2 may hold at most 248.8 Mbps, however idle the link is
    let requests = [(2, "200.0"), (2, "48.8"), (2, "0.1"), (1, "100.0")];
    for (id, (class, mbps)) in requests.into_iter().enumerate() {
        let req = LspRequest::new(
            id as u64,
            class,
            mbps.parse::<Bandwidth>().expect("literal bandwidth"),
            SimTime::from_secs(id as i64),
            SimTime::from_secs(60),
        );
        let decision = link.admit(&req)?;
        match &decision {
            Decision::Blocked { reason } => println!("lsp {id} class {class} {mbps:>6} Mbps: blocked ({reason})"),
            _ => {
                link.apply(&req, &decision)?;
                println!("lsp {id} class {class} {mbps:>6} Mbps: admitted");
            }
        }
    }
    let loads: Vec<String> = link.load().iter().map(ToString::to_string).collect();
    println!("per-class load: [{}], free {}", loads.join(", "), link.free());
    Ok(())
}

#[allow(dead_code)]
fn main() -> bamsim::Result<()> {
    run_example()
}

// Russian Dolls Model: lower classes may use idle higher-class bandwidth,
// and are preempted once a higher class needs it back.
//
// ```text
// cargo run --example rdm_preemption
// ```

use bamsim::model::{rdm_admit, ClassConfig, Decision, LinkState, LspRequest, Model};
use bamsim::units::{Bandwidth, SimTime};

fn lsp(id: u64, class: usize, mbps: i64) -> LspRequest {
    LspRequest::new(
        id,
        class,
        Bandwidth::from_mbps(mbps),
        SimTime::from_secs(id as i64),
        SimTime::from_secs(100),
    )
}

pub fn run_example() -> bamsim::Result<()> {
    let cfg = ClassConfig::stm4_three_class();
    // class 0 fills the link with six LSPs
    let mut link = LinkState::from_admitted(Model::Rdm, cfg.clone(), (0..6).map(|i| lsp(i, 0, 100)))?;
    println!("class-0 load {} of {}", link.total_load(), cfg.link_capacity);

    // a class-2 request fits its own doll but breaks BC_0 = M
    let req = lsp(10, 2, 100);
    let decision = rdm_admit(&link, &req, &cfg)?;
    println!("class-2 request of 100 Mbps: victims {:?}", decision.victims());
    link.apply(&req, &decision)?;
    println!(
        "after preemption: load {:?}",
        link.load().iter().map(ToString::to_string).collect::<Vec<_>>()
    );

    // its own doll is the one limit preemption cannot lift
    let mut id = 11;
    loop {
        let req = lsp(id, 2, 20);
        let decision = link.admit(&req)?;
        if let Decision::Blocked { reason } = &decision {
            println!("class-2 request {id} blocked: {reason}");
            break;
        }
        link.apply(&req, &decision)?;
        id += 1;
    }
    println!("class-2 load {} (BC_2 = {})", link.load()[2], cfg.bc[2]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> bamsim::Result<()> {
    run_example()
}

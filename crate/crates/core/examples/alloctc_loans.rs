// AllocTC-Sharing: a high class borrows idle low-class bandwidth as a
// loan, and the low class takes it back when it needs it.
//
// ```text
// cargo run --example alloctc_loans
// ```

use bamsim::model::{alloctc_admit, compute_loans, ClassConfig, LinkState, LspRequest, Model};
use bamsim::units::{Bandwidth, SimTime};

fn lsp(id: u64, class: usize, tenths: i64) -> LspRequest {
    LspRequest::new(
        id,
        class,
        Bandwidth::from_tenths(tenths),
        SimTime::from_secs(id as i64),
        SimTime::from_secs(100),
    )
}

fn show(link: &LinkState) {
    for l in link.lsps() {
        println!(
            "  lsp {:>2} class {}  native {:>5}  loan {:>5}",
            l.id(),
            l.class(),
            l.native,
            l.loan
        );
    }
    println!("  total {} / free {}", link.total_load(), link.free());
}

pub fn run_example() -> bamsim::Result<()> {
    let cfg = ClassConfig::stm4_three_class();
    let mut link = LinkState::new(Model::AllocTc, cfg.clone())?;

    // class 2 alone on the link goes past BC_2 = 248.8
    for id in 0..4 {
        let req = lsp(id, 2, 1000);
        let d = alloctc_admit(&link, &req, &cfg)?;
        link.apply(&req, &d)?;
    }
    println!("class 2 after 4 x 100 Mbps:");
    show(&link);

    // the split is a pure function of the admitted set
    let acc = compute_loans(link.lsps(), &cfg);
    println!(
        "loans per class: {:?}",
        acc.loan.iter().map(ToString::to_string).collect::<Vec<_>>()
    );

    // class 0 fills the rest, then one more class-0 request reclaims a loan
    let req = lsp(10, 0, 2220);
    let d = alloctc_admit(&link, &req, &cfg)?;
    link.apply(&req, &d)?;
    let req = lsp(11, 0, 500);
    let d = alloctc_admit(&link, &req, &cfg)?;
    println!("class-0 request of 50 Mbps on a full link: victims {:?}", d.victims());
    link.apply(&req, &d)?;
    show(&link);
    Ok(())
}

#[allow(dead_code)]
fn main() -> bamsim::Result<()> {
    run_example()
}

//! The explicit four-valued LHV-LHS model: deterministic responses on A,
//! entangled two-qubit hidden states on BC.

use tribox::boxes::{family_box, Cut, FamilyParam};
use tribox::decomposition::{build_d4_model, conditional_box, verify_model};

pub fn run() -> tribox::Result<()> {
    let f = FamilyParam::mermin(0.5)?;
    let model = build_d4_model(&f, Cut::AvsBC)?;
    let report = verify_model(&model, &family_box(&f), 1e-12);
    println!("d = {}, weights {:?}, verified {} (residual {:.1e})", model.dimension(), model.weights, report.ok, report.max_residual);

    for (l, p) in model.pieces.iter().enumerate() {
        let q = conditional_box(l, 0.5)?;
        println!("  piece {l}: {}, correlators {:?}", p.kind.label(), q.correlators());
    }

    match build_d4_model(&FamilyParam::mermin(0.8)?, Cut::AvsBC) {
        Err(e) => println!("V = 0.8: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}

//! Super-bi-unsteerability: the untrusted party is a qubit, yet every
//! LHV-LHS model needs more than two hidden values.

use tribox::boxes::{family_box, Cut, FamilyParam};
use tribox::decomposition::{certify_genuine, certify_super_bi_unsteerable, QuantumRealization, SearchOptions};
use tribox::quantum::{paper_state, sigma_pair, PaperState};

pub fn run() -> tribox::Result<()> {
    let opts = SearchOptions::default();
    let v = 0.6;
    let bx = family_box(&FamilyParam::mermin(v)?);
    let witness = QuantumRealization {
        state: paper_state(PaperState::GhzMixed, v)?,
        dims: [2, 2, 2],
        measurements: [sigma_pair(), sigma_pair(), sigma_pair()],
    };
    let cert = certify_super_bi_unsteerable(&bx, Cut::AvsBC, 2, Some(&witness), &opts)?;
    println!("A|BC: {:?}", cert.conclusion);
    for verdict in &cert.verdicts {
        println!("  d = {}: {:?}", verdict.d, verdict.status);
    }

    for f in [FamilyParam::mermin(0.3)?, FamilyParam::svetlichny(0.5)?, FamilyParam::mermin(0.75)?] {
        let g = certify_genuine(&family_box(&f), [2, 2, 2], None, &opts)?;
        println!("{:?} V={}: {:?} (symmetry shortcut {})", f.kind(), f.v(), g.conclusion, g.symmetry_shortcut);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}

//! Assemblage prepared on BC when A measures one half of the noisy GHZ
//! state, and the assemblage of an explicit local-hidden-state ensemble.

use tribox::boxes::SingleBox;
use tribox::quantum::{
    assemblage, paper_state, sigma_pair, validate_assemblage, DensityMatrix, LhsEnsemble, PaperState,
};

pub fn run() -> tribox::Result<()> {
    let rho = paper_state(PaperState::GhzMixed, 0.6)?;
    let asm = assemblage(&rho, &sigma_pair(), [2, 4])?;
    let r = validate_assemblage(&asm, 1e-9);
    println!("GHZ assemblage: positive {}, no-signalling {}, trace {:.3}", r.positive, r.no_signalling, r.trace);

    let up = DensityMatrix::from_bloch([0.0, 0.0, 1.0])?;
    let down = DensityMatrix::from_bloch([0.0, 0.0, -1.0])?;
    let lhs = LhsEnsemble::new(vec![0.5, 0.5], vec![up, down], vec![SingleBox::deterministic(0, 0), SingleBox::deterministic(1, 1)])?;
    let r = validate_assemblage(&lhs.assemblage(), 1e-9);
    println!("LHS ensemble assemblage valid: {}", r.is_valid());
    assert!(r.is_valid());
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}

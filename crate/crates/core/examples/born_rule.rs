//! Reproduce noisy Mermin by measuring quantum states: the noisy GHZ state
//! with qubit observables, and a qutrit-qubit-qubit state where the first
//! party uses two three-outcome-space POVMs.

use tribox::boxes::{family_box, FamilyParam};
use tribox::quantum::{born_tripartite, paper_measurements, paper_state, sigma_pair, PaperMeasurements, PaperState};

pub fn run() -> tribox::Result<()> {
    let qubits = [sigma_pair(), sigma_pair(), sigma_pair()];
    let qutrit = [paper_measurements(PaperMeasurements::AppendixDPovm), sigma_pair(), sigma_pair()];
    for v in [0.2, 0.5, 0.7] {
        let target = family_box(&FamilyParam::mermin(v)?);
        let ghz = born_tripartite(&paper_state(PaperState::GhzMixed, v)?, &qubits)?;
        let q = born_tripartite(&paper_state(PaperState::QutritMixed, v)?, &qutrit)?;
        println!(
            "V={v}: GHZ deviation {:.1e}, qutrit deviation {:.1e}",
            ghz.max_abs_diff(&target),
            q.max_abs_diff(&target)
        );
        assert!(ghz.max_abs_diff(&target) < 1e-12 && q.max_abs_diff(&target) < 1e-12);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}

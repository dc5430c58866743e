//! How many hidden values does an LHV-LHS model for noisy Mermin need?
//! Prints the verdict per dimension and the cases refuted.

use tribox::boxes::{family_box, Cut, FamilyParam};
use tribox::decomposition::{search_dimension, SearchOptions};

pub fn run() -> tribox::Result<()> {
    let opts = SearchOptions::default();
    for v in [0.4, 0.6] {
        let bx = family_box(&FamilyParam::mermin(v)?);
        println!("noisy Mermin V = {v}");
        for d in 1..=4 {
            let verdict = search_dimension(&bx, Cut::AvsBC, d, &opts)?;
            println!("  d = {d}: {:?}", verdict.status);
            for case in verdict.trace.iter().take(3) {
                println!("      {}: {}", case.case, serde_json::to_string(&case.outcome).unwrap_or_default());
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}

//! Build the noisy Mermin and Svetlichny boxes, check them, and round-trip
//! them through the JSON wire format.

use tribox::boxes::{family_box, json, FamilyParam, Party};

pub fn run() -> tribox::Result<()> {
    for f in [FamilyParam::mermin(0.5)?, FamilyParam::svetlichny(0.5)?] {
        let bx = family_box(&f);
        let report = bx.validate(1e-12);
        println!("{}: valid = {}", bx.label().unwrap_or("?"), report.is_valid());

        // Every single-party marginal of both families is uniform.
        for party in [Party::A, Party::B, Party::C] {
            assert!(bx.single_marginal(party).is_uniform(1e-12));
        }

        let text = json::to_json(&bx);
        assert_eq!(json::parse_tripartite(&text)?, bx);
    }

    let m = family_box(&FamilyParam::mermin(1.0)?);
    println!("P(000|001) at V = 1: {}", m.get(0, 0, 1, 0, 0, 0));
    assert!(FamilyParam::mermin(1.2).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}

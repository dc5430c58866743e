//! Largest weight a single maximally violating vertex can carry in a
//! decomposition whose remainder satisfies every variant of the inequality.

use tribox::boxes::{family_box, FamilyParam};
use tribox::inequalities::{strength, StrengthKind};

pub fn run() -> tribox::Result<()> {
    for v in [0.1, 0.5, 0.9] {
        let r = strength(&family_box(&FamilyParam::mermin(v)?), StrengthKind::Mermin)?;
        println!("Mermin strength at V={v}: {:.6} via {}", r.p, r.dominant_vertex);
        assert!(r.p > 1e-6);
    }
    let r = strength(&family_box(&FamilyParam::svetlichny(0.9)?), StrengthKind::Svetlichny)?;
    println!("Svetlichny strength at V=0.9: {:.6} via {}", r.p, r.dominant_vertex);
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}

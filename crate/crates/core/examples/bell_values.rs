//! Mermin, Svetlichny and CHSH values, maximised over the variants related
//! by local relabelling.

use tribox::boxes::{family_box, pr_box, FamilyParam};
use tribox::inequalities::{chsh_value, mermin_value, mermin_variants, svetlichny_value, svetlichny_variants};

pub fn run() -> tribox::Result<()> {
    println!("{} Mermin variants, {} Svetlichny variants", mermin_variants().len(), svetlichny_variants().len());

    for v in [0.4, 0.5, 0.6, 0.75] {
        let r = mermin_value(&family_box(&FamilyParam::mermin(v)?), 1e-9);
        println!("Mermin  V={v:<4}  value {:.4} / {}  violated {:<5}  {}", r.value, r.bound, r.violated, r.variant);
        assert!((r.value - 4.0 * v).abs() < 1e-9);
    }

    for v in [0.7, 0.72] {
        let r = svetlichny_value(&family_box(&FamilyParam::svetlichny(v)?), 1e-9);
        println!("Svetlichny  V={v}  value {:.4} / {}  violated {}", r.value, r.bound, r.violated);
    }

    let pr = chsh_value(&pr_box(0, 0, 0), 1e-9);
    println!("CHSH of the PR box: {}", pr.value);
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}

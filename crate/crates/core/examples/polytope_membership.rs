//! Is a box a mixture of fully deterministic vertices, or of vertices with
//! a PR box on one pair? Solved as an LP feasibility problem.

use tribox::boxes::{family_box, svetlichny_vertex, FamilyParam};
use tribox::inequalities::{lp_membership, Polytope};

pub fn run() -> tribox::Result<()> {
    for v in [0.499, 0.501, 1.0] {
        let bx = family_box(&FamilyParam::mermin(v)?);
        let local = lp_membership(&bx, Polytope::FullyLocal, 1e-9)?;
        let two_way = lp_membership(&bx, Polytope::TwoWayLocal, 1e-9)?;
        println!(
            "Mermin V={v}: fully local {} (support {}), two-way local {}",
            local.feasible, local.support, two_way.feasible
        );
    }

    let sv = lp_membership(&svetlichny_vertex(0, 0, 0, 0), Polytope::TwoWayLocal, 1e-9)?;
    println!("Svetlichny box two-way local: {}", sv.feasible);
    assert!(!sv.feasible);
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}

use super::{Cut, TripartiteBox};

/// The six permutations of `{A, B, C}` as slot maps: `perm[i]` is where
/// party `i` is sent.
pub const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// `σ ∘ τ`: apply `tau` first, then `sigma`.
pub fn compose(sigma: [usize; 3], tau: [usize; 3]) -> [usize; 3] {
    [sigma[tau[0]], sigma[tau[1]], sigma[tau[2]]]
}

/// Moves party `i` (its setting and outcome together) to slot `perm[i]`.
pub fn permute_parties(bx: &TripartiteBox, perm: [usize; 3]) -> TripartiteBox {
    TripartiteBox::from_fn(|x, y, z, a, b, c| {
        // New table at slots (s0, s1, s2) reads the old party sitting in each slot.
        let new_s = [x, y, z];
        let new_o = [a, b, c];
        let mut s = [0; 3];
        let mut o = [0; 3];
        for i in 0..3 {
            s[i] = new_s[perm[i]];
            o[i] = new_o[perm[i]];
        }
        bx.get(s[0], s[1], s[2], o[0], o[1], o[2])
    })
}

/// Slot map that makes `cut`'s single party slot A, keeping the other two in
/// order. Feed it to [`permute_parties`].
pub fn canonical_perm(cut: Cut) -> [usize; 3] {
    let order = cut.to_canonical();
    let mut perm = [0; 3];
    for (slot, party) in order.iter().enumerate() {
        perm[party.index()] = slot;
    }
    perm
}

pub fn is_symmetric(bx: &TripartiteBox, tol: f64) -> bool {
    PERMUTATIONS.iter().all(|&p| permute_parties(bx, p).max_abs_diff(bx) <= tol)
}

/// True iff the box factorises as `P(single) · P(pair)` across `cut`.
pub fn is_product(bx: &TripartiteBox, cut: Cut, tol: f64) -> bool {
    let single = bx.single_marginal(cut.single());
    let pair = bx.pair_marginal(cut.pair(), 0);
    let k = cut.single().index();
    let (f, s) = cut.pair().parties();
    let (f, s) = (f.index(), s.index());
    bx.entries().iter().enumerate().all(|(i, &v)| {
        let co = super::tri_coords(i);
        let prod = single.get(co[k], co[3 + k]) * pair.get(co[f], co[s], co[3 + f], co[3 + s]);
        (v - prod).abs() <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{deterministic_box, family_box, two_way_vertex, DeterministicSpec, FamilyParam, Pair};

    #[test]
    fn group_action() {
        let bx = two_way_vertex(Pair::AB, [1, 0, 1], [0, 1]).mix(&deterministic_box(&DeterministicSpec::from_index(37)), 0.3);
        for s in PERMUTATIONS {
            for t in PERMUTATIONS {
                let lhs = permute_parties(&permute_parties(&bx, t), s);
                let rhs = permute_parties(&bx, compose(s, t));
                assert!(lhs.max_abs_diff(&rhs) < 1e-15, "{s:?} {t:?}");
            }
        }
    }

    #[test]
    fn mermin_is_symmetric() {
        assert!(is_symmetric(&family_box(&FamilyParam::mermin(0.6).unwrap()), 1e-12));
        assert!(is_symmetric(&TripartiteBox::uniform(), 0.0));
        assert!(!is_symmetric(&two_way_vertex(Pair::AB, [0, 0, 0], [0, 0]), 1e-9));
    }

    #[test]
    fn swap_a_c_moves_pr_box_to_bc() {
        for p in 0..8u8 {
            let pr = [(p >> 2) & 1, (p >> 1) & 1, p & 1];
            let v = two_way_vertex(Pair::AB, pr, [1, 0]);
            let swapped = permute_parties(&v, [2, 1, 0]);
            let expect = two_way_vertex(Pair::BC, [pr[1], pr[0], pr[2]], [1, 0]);
            assert_eq!(swapped.max_abs_diff(&expect), 0.0);
        }
    }

    #[test]
    fn canonical_perm_puts_single_party_first() {
        let d = deterministic_box(&DeterministicSpec::new(0, 0, 0, 1, 0, 0).unwrap());
        // b = 1 always; after moving B to slot A the first outcome is 1.
        let moved = permute_parties(&d, canonical_perm(Cut::BvsAC));
        assert_eq!(moved.get(0, 0, 0, 1, 0, 0), 1.0);
        // C|AB order is (C, A, B), so B lands in the last slot.
        let moved = permute_parties(&d, canonical_perm(Cut::CvsAB));
        assert_eq!(moved.get(1, 0, 1, 0, 0, 1), 1.0);
    }

    #[test]
    fn products() {
        for i in [0, 13, 63] {
            for cut in Cut::ALL {
                assert!(is_product(&deterministic_box(&DeterministicSpec::from_index(i)), cut, 1e-12));
                assert!(is_product(&TripartiteBox::uniform(), cut, 1e-12));
            }
        }
        let m = family_box(&FamilyParam::mermin(0.3).unwrap());
        for cut in Cut::ALL {
            assert!(!is_product(&m, cut, 1e-9));
        }
    }
}

//! Local-relabelling variants of the Mermin and Svetlichny expressions.

use crate::boxes::{CorrelatorSet, TripartiteBox};
use std::sync::OnceLock;

/// Coefficients `m[x][y][z] ∈ {-1, 0, 1}` of `Σ m_xyz ⟨A_xB_yC_z⟩`.
pub type Coefficients = [[[i8; 2]; 2]; 2];

/// `⟨A0B0C0⟩ − ⟨A0B1C1⟩ − ⟨A1B0C1⟩ − ⟨A1B1C0⟩`.
pub const MERMIN_BASE: Coefficients = [[[1, 0], [0, -1]], [[0, -1], [-1, 0]]];

pub const MERMIN_BOUND: f64 = 2.0;
pub const SVETLICHNY_BOUND: f64 = 4.0;

fn sgn(bits: usize) -> i8 {
    if bits & 1 == 0 {
        1
    } else {
        -1
    }
}

/// The 16 distinct Mermin expressions, base expression first.
///
/// Generated by flipping each party's input and relabelling its output by
/// `a → a ⊕ αx ⊕ β`, then deduplicating.
pub fn mermin_variants() -> &'static [Coefficients] {
    static CACHE: OnceLock<Vec<Coefficients>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out: Vec<Coefficients> = Vec::new();
        // Per party: input flip bit, then α, β of the output relabelling.
        for code in 0..(1usize << 9) {
            let party = |k: usize| ((code >> (3 * k + 2)) & 1, (code >> (3 * k + 1)) & 1, (code >> (3 * k)) & 1);
            let [(fa, aa, ba), (fb, ab, bb), (fc, ac, bc)] = [party(0), party(1), party(2)];
            let mut m = [[[0i8; 2]; 2]; 2];
            for x in 0..2 {
                for y in 0..2 {
                    for z in 0..2 {
                        let s = sgn((aa * x) ^ ba) * sgn((ab * y) ^ bb) * sgn((ac * z) ^ bc);
                        m[x ^ fa][y ^ fb][z ^ fc] = MERMIN_BASE[x][y][z] * s;
                    }
                }
            }
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    })
}

/// Svetlichny expression `S_{αβγε}` with index `8α + 4β + 2γ + ε`.
pub fn svetlichny_coefficients(index: usize) -> Coefficients {
    let (al, be, ga, ep) = ((index >> 3) & 1, (index >> 2) & 1, (index >> 1) & 1, index & 1);
    let mut m = [[[0i8; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                m[x][y][z] = sgn((x & y) ^ (x & z) ^ (y & z) ^ (al * x) ^ (be * y) ^ (ga * z) ^ ep);
            }
        }
    }
    m
}

pub fn svetlichny_variants() -> &'static [Coefficients] {
    static CACHE: OnceLock<Vec<Coefficients>> = OnceLock::new();
    CACHE.get_or_init(|| (0..16).map(svetlichny_coefficients).collect())
}

pub fn evaluate(m: &Coefficients, cs: &CorrelatorSet) -> f64 {
    let mut s = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                s += m[x][y][z] as f64 * cs.triples[x][y][z];
            }
        }
    }
    s
}

/// The box whose only nonzero correlators are the triples `m`; for a Mermin
/// variant it attains the algebraic maximum 4.
pub fn box_with_triples(m: &Coefficients) -> TripartiteBox {
    let mut cs = CorrelatorSet::default();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                cs.triples[x][y][z] = m[x][y][z] as f64;
            }
        }
    }
    cs.to_box(1e-12).expect("Mermin box is a valid box")
}

/// The 16 Mermin boxes, one per variant.
pub fn all_mermin_boxes() -> Vec<TripartiteBox> {
    mermin_variants().iter().map(box_with_triples).collect()
}

/// Renders a coefficient tensor as `+<A0B0C0> -<A0B1C1> ...`.
pub fn describe(m: &Coefficients) -> String {
    let mut parts = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                match m[x][y][z] {
                    1 => parts.push(format!("+<A{x}B{y}C{z}>")),
                    -1 => parts.push(format!("-<A{x}B{y}C{z}>")),
                    _ => {}
                }
            }
        }
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_mermin_variants() {
        let vs = mermin_variants();
        assert_eq!(vs.len(), 16);
        assert_eq!(vs[0], MERMIN_BASE);
        for v in vs {
            assert_eq!(v.iter().flatten().flatten().filter(|&&c| c != 0).count(), 4);
        }
        let target: Coefficients = [[[0, 1], [1, 0]], [[1, 0], [0, -1]]];
        assert!(vs.contains(&target));
    }

    #[test]
    fn mermin_boxes_reach_four() {
        for (k, m) in mermin_variants().iter().enumerate() {
            let bx = box_with_triples(m);
            assert!(bx.validate(1e-12).is_valid());
            assert_eq!(evaluate(m, &bx.correlators()), 4.0, "variant {k}");
        }
    }

    #[test]
    fn describe_labels() {
        assert_eq!(describe(&MERMIN_BASE), "+<A0B0C0> -<A0B1C1> -<A1B0C1> -<A1B1C0>");
    }
}

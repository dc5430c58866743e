//! Shared oracles, generators and property checks for the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use tribox::boxes::{
    all_deterministic, all_svetlichny, all_two_way, box_from_correlators, compose, family_box, json, permute_parties,
    BipartiteBox, Cut, FamilyParam, TripartiteBox, PERMUTATIONS,
};
use tribox::decomposition::{search_dimension, verify_model, SearchOptions};
use tribox::quantum::{born_tripartite, DensityMatrix, DichotomicMeasurement};

fn sign(bits: usize) -> f64 {
    if bits & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Two-party table with unbiased marginals and correlators `[c00, c01, c10, c11]`.
pub fn bi_from_correlators(c: [f64; 4]) -> BipartiteBox {
    BipartiteBox::from_fn(|y, z, b, c_| (1.0 + c[2 * y + z] * sign(b ^ c_)) / 4.0)
}

/// Noisy Mermin built from its triple correlators: `+V` on settings 001, 010
/// and 100, `-V` on 111, everything else zero.
pub fn mermin_from_correlators(v: f64) -> TripartiteBox {
    TripartiteBox::from_fn(|x, y, z, a, b, c| {
        let e = match (x, y, z) {
            (0, 0, 1) | (0, 1, 0) | (1, 0, 0) => v,
            (1, 1, 1) => -v,
            _ => 0.0,
        };
        (1.0 + e * sign(a ^ b ^ c)) / 8.0
    })
}

/// Sign of `⟨B_y C_z⟩` in the four hidden-state tables, rows `yz = 00, 01, 10, 11`.
pub const PIECE_SIGNS: [[f64; 4]; 4] = [[1.0, 1.0, 1.0, -1.0], [-1.0, -1.0, -1.0, 1.0], [-1.0, 1.0, 1.0, 1.0], [1.0, -1.0, -1.0, -1.0]];

pub fn expected_piece(lambda: usize, v: f64) -> BipartiteBox {
    bi_from_correlators(PIECE_SIGNS[lambda].map(|s| s * v))
}

/// The unique pieces when the first and third hidden states coincide:
/// the merged table, then the second and fourth.
pub fn expected_merged(v: f64) -> [BipartiteBox; 3] {
    [
        bi_from_correlators([0.0, v, v, 0.0]),
        bi_from_correlators([-2.0 * v, -v, -v, 2.0 * v]),
        bi_from_correlators([2.0 * v, -v, -v, -2.0 * v]),
    ]
}

/// `⟨A_x B_y C_z⟩` by direct summation over the table.
pub fn triple_correlator(bx: &TripartiteBox, x: usize, y: usize, z: usize) -> f64 {
    let mut s = 0.0;
    for o in 0..8 {
        let (a, b, c) = (o >> 2, (o >> 1) & 1, o & 1);
        s += sign(a ^ b ^ c) * bx.get(x, y, z, a, b, c);
    }
    s
}

/// The 16 Mermin-type expressions: for each setting class (`x⊕y⊕z` fixed)
/// every sign pattern on its four terms whose product is `-1`.
pub fn mermin_expressions() -> Vec<Vec<((usize, usize, usize), f64)>> {
    let mut out = Vec::new();
    for parity in 0..2 {
        let settings: Vec<(usize, usize, usize)> =
            (0..8).map(|s| (s >> 2, (s >> 1) & 1, s & 1)).filter(|&(x, y, z)| (x ^ y ^ z) == parity).collect();
        for pattern in 0..16u32 {
            if pattern.count_ones() % 2 == 1 {
                let terms = settings.iter().enumerate().map(|(k, &s)| (s, if pattern >> k & 1 == 1 { -1.0 } else { 1.0 })).collect();
                out.push(terms);
            }
        }
    }
    out
}

pub fn expression_value(terms: &[((usize, usize, usize), f64)], bx: &TripartiteBox) -> f64 {
    terms.iter().map(|&((x, y, z), s)| s * triple_correlator(bx, x, y, z)).sum()
}

pub fn mermin_oracle(bx: &TripartiteBox) -> f64 {
    mermin_expressions().iter().map(|t| expression_value(t, bx)).fold(f64::NEG_INFINITY, f64::max)
}

/// Largest `p` with `bx - p·vertex ≥ 0` and every Mermin expression of
/// `bx - p·vertex` at most `2(1 - p)`, over the 16 vertices that saturate an
/// expression at 4. The feasible set is an interval; its right end is found
/// on a 1e-4 grid and refined upward in steps of 1e-6 and 1e-8.
pub fn mermin_strength_oracle(bx: &TripartiteBox) -> f64 {
    let exprs = mermin_expressions();
    let mut best = 0.0f64;
    for terms in &exprs {
        let vertex = TripartiteBox::from_fn(|x, y, z, a, b, c| {
            let e = terms.iter().find(|t| t.0 == (x, y, z)).map_or(0.0, |t| t.1);
            (1.0 + e * sign(a ^ b ^ c)) / 8.0
        });
        let feasible = |p: f64| {
            let q: Vec<f64> = bx.entries().iter().zip(vertex.entries()).map(|(b, v)| b - p * v).collect();
            if q.iter().any(|&e| e < -1e-12) {
                return false;
            }
            let qb = TripartiteBox::from_entries(q).expect("64 entries");
            exprs.iter().all(|t| expression_value(t, &qb) <= 2.0 * (1.0 - p) + 1e-12)
        };
        let Some(mut lo) = (0..=10_000).map(|k| k as f64 * 1e-4).filter(|&p| feasible(p)).last() else {
            continue;
        };
        for step in [1e-6, 1e-8] {
            while lo + step <= 1.0 && feasible(lo + step) {
                lo += step;
            }
        }
        best = best.max(lo);
    }
    best
}

pub fn ket_state(re_im: &[f64]) -> DensityMatrix {
    let n = re_im.len() / 2;
    let mut ket: Vec<Complex64> = (0..n).map(|i| Complex64::new(re_im[2 * i], re_im[2 * i + 1])).collect();
    let norm = ket.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-6 {
        ket = vec![Complex64::new(0.0, 0.0); n];
        ket[0] = Complex64::new(1.0, 0.0);
    } else {
        ket.iter_mut().for_each(|c| *c /= norm);
    }
    DensityMatrix::pure(&ket).expect("normalised ket")
}

/// `G G† / Tr(G G†)` for `G` read from `2 n²` reals.
pub fn mixed_state(n: usize, re_im: &[f64]) -> DensityMatrix {
    let g = DMatrix::from_fn(n, n, |i, j| Complex64::new(re_im[2 * (i * n + j)], re_im[2 * (i * n + j) + 1]));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    if tr < 1e-9 {
        return DensityMatrix::maximally_mixed(n);
    }
    DensityMatrix::new(m.map(|z| z / tr), 1e-9).expect("G G† is a state")
}

pub fn axis_measurement(v: &[f64]) -> DichotomicMeasurement {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let n = if norm < 1e-6 { [0.0, 0.0, 1.0] } else { [v[0] / norm, v[1] / norm, v[2] / norm] };
    DichotomicMeasurement::qubit_axis(n).expect("unit axis")
}

/// Random no-signalling box: a convex mixture of up to five catalogue vertices.
pub fn arb_box() -> impl Strategy<Value = TripartiteBox> {
    prop::collection::vec((0usize..176, 0.01f64..1.0), 1..=5).prop_map(|picks| {
        let catalogue: Vec<TripartiteBox> =
            all_deterministic().into_iter().chain(all_two_way()).chain(all_svetlichny()).map(|(_, b)| b).collect();
        let total: f64 = picks.iter().map(|p| p.1).sum();
        let mut entries = vec![0.0; TripartiteBox::LEN];
        for (k, w) in picks {
            for (e, v) in entries.iter_mut().zip(catalogue[k].entries()) {
                *e += w / total * v;
            }
        }
        TripartiteBox::from_entries(entries).expect("64 entries")
    })
}

pub fn arb_family() -> impl Strategy<Value = FamilyParam> {
    (any::<bool>(), 0.001f64..=1.0).prop_map(|(m, v)| if m { FamilyParam::mermin(v) } else { FamilyParam::svetlichny(v) }.expect("v in range"))
}

pub fn arb_cut() -> impl Strategy<Value = Cut> {
    prop::sample::select(Cut::ALL.to_vec())
}

pub fn prop_round_trip(bx: TripartiteBox) -> Result<(), TestCaseError> {
    let back = json::parse_tripartite(&json::to_json(&bx)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, &bx);
    let cs = bx.correlators();
    let rebuilt = box_from_correlators(&cs, 1e-12).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(rebuilt.max_abs_diff(&bx) <= 1e-12, "box -> correlators -> box moved by {}", rebuilt.max_abs_diff(&bx));
    prop_assert!(rebuilt.correlators().max_abs_diff(&cs) <= 1e-12);
    prop_assert!(cs.values().all(|c| c.abs() <= 1.0 + 1e-12));
    Ok(())
}

pub fn prop_ns_exact(f: FamilyParam) -> Result<(), TestCaseError> {
    let bx = family_box(&f);
    let report = bx.validate(1e-12);
    prop_assert!(report.is_valid(), "{:?}", report.issues);
    let cs = bx.correlators();
    prop_assert!(cs.singles.iter().flatten().all(|c| c.abs() <= 1e-12));
    prop_assert!(cs.pairs.iter().flatten().flatten().all(|c| c.abs() <= 1e-12));
    if f.kind() == tribox::boxes::FamilyKind::Mermin {
        let nonzero: Vec<f64> = cs.triples.iter().flatten().flatten().copied().filter(|c| c.abs() > 1e-12).collect();
        prop_assert_eq!(nonzero.len(), 4);
        prop_assert!(nonzero.iter().all(|c| (c.abs() - f.v()).abs() <= 1e-12));
    }
    Ok(())
}

pub fn prop_group_action(bx: TripartiteBox) -> Result<(), TestCaseError> {
    for s in PERMUTATIONS {
        for t in PERMUTATIONS {
            let lhs = permute_parties(&permute_parties(&bx, t), s);
            let rhs = permute_parties(&bx, compose(s, t));
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-15, "{:?} after {:?}", s, t);
        }
    }
    let id = permute_parties(&bx, [0, 1, 2]);
    prop_assert_eq!(id.entries(), bx.entries());
    Ok(())
}

/// Feasible at `d` implies feasible at `d + 1`, and the lifted witness still
/// reproduces the box.
pub fn prop_monotone(bx: &TripartiteBox, cut: Cut) -> Result<(), TestCaseError> {
    let opts = SearchOptions::default();
    let run = |d| search_dimension(bx, cut, d, &opts).map_err(|e| TestCaseError::fail(e.to_string()));
    let mut prev = run(1)?;
    for d in 2..=4 {
        let next = run(d)?;
        if prev.status.is_feasible() {
            prop_assert!(next.status.is_feasible(), "d = {} feasible ({:?}) but d = {} is {:?}", d - 1, prev.status, d, next.status);
            let lifted = prev.witness.as_ref().expect("feasible verdicts carry a witness").lift();
            prop_assert_eq!(lifted.dimension(), d);
            let report = verify_model(&lifted, bx, 1e-9);
            prop_assert!(report.ok, "lifted witness: {:?}", report.problems);
        }
        prev = next;
    }
    Ok(())
}

/// Every feasible verdict's witness re-verifies, and infeasible verdicts list
/// the cases they refuted.
pub fn prop_witnesses_verify(bx: &TripartiteBox, cut: Cut) -> Result<(), TestCaseError> {
    let opts = SearchOptions::default();
    for d in 1..=4 {
        let v = search_dimension(bx, cut, d, &opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
        if v.status.is_feasible() {
            let w = v.witness.as_ref().expect("feasible verdicts carry a witness");
            prop_assert_eq!(w.dimension(), d);
            let report = verify_model(w, bx, 1e-9);
            prop_assert!(report.ok, "d = {}: {:?}", d, report.problems);
            prop_assert!(w.reconstruct().validate(1e-9).is_valid());
        }
        if v.status == tribox::decomposition::Status::Infeasible {
            prop_assert!(!v.trace.is_empty(), "d = {} infeasible without a trace", d);
        }
    }
    Ok(())
}

pub fn prop_born_valid(rho: &DensityMatrix, axes: &[f64]) -> Result<(), TestCaseError> {
    let m: Vec<DichotomicMeasurement> = axes.chunks(3).map(axis_measurement).collect();
    let meas = [[m[0].clone(), m[1].clone()], [m[2].clone(), m[3].clone()], [m[4].clone(), m[5].clone()]];
    let bx = born_tripartite(rho, &meas).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let report = bx.validate(1e-9);
    prop_assert!(report.is_valid(), "{:?}", report.issues);
    Ok(())
}

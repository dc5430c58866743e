//! Independent oracles for the decomposition search and the strength LP.

mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use tribox::boxes::{bi_index, family_box, Cut, FamilyParam, SingleBox, TripartiteBox};
use tribox::decomposition::{canonical_strategies, search_dimension, solve_conditionals, SearchOptions, Status};
use tribox::inequalities::{strength, StrengthKind};

/// Target as a 4 × 16 matrix: rows `(x, a)`, columns the pair table index.
fn target(bx: &TripartiteBox) -> DMatrix<f64> {
    DMatrix::from_fn(4, 16, |r, j| {
        let (x, a) = (r >> 1, r & 1);
        let (y, z, b, c) = (j >> 3, (j >> 2) & 1, (j >> 1) & 1, j & 1);
        bx.get(x, y, z, a, b, c)
    })
}

/// Smallest max-entry residual of `T ≈ c_0 q_0ᵀ + c_1 q_1ᵀ` over responders
/// with `P_λ(0|x)` on the 0.05 grid and arbitrary tables `q_λ` (weights are
/// absorbed into `q_λ`).
fn d2_grid_residual(bx: &TripartiteBox) -> f64 {
    let t = target(bx);
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 * 0.05).collect();
    let mut best = f64::INFINITY;
    for &p00 in &grid {
        for &p01 in &grid {
            for &p10 in &grid {
                for &p11 in &grid {
                    let c = DMatrix::from_row_slice(4, 2, &[p00, p10, 1.0 - p00, 1.0 - p10, p01, p11, 1.0 - p01, 1.0 - p11]);
                    let q = c.clone().svd(true, true).solve(&t, 1e-12).expect("svd solve");
                    let r = (&t - &c * q).amax();
                    best = best.min(r);
                }
            }
        }
    }
    best
}

#[test]
fn d2_grid_never_beats_the_case_analysis() {
    let opts = SearchOptions::default();
    for v in [0.1, 0.3, 0.5] {
        let bx = family_box(&FamilyParam::mermin(v).unwrap());
        let verdict = search_dimension(&bx, Cut::AvsBC, 2, &opts).unwrap();
        assert_eq!(verdict.status, Status::Infeasible);
        let r = d2_grid_residual(&bx);
        println!("V = {v}: best grid residual {r:.4}");
        assert!(r > tribox::tol::INCONSISTENT, "grid reconstructs V = {v} with residual {r:e}");
    }
}

#[test]
fn d2_grid_finds_a_two_valued_model_when_one_exists() {
    // Two deterministic responders each paired with its own table.
    let q0 = bi_from_correlators([0.3, 0.1, -0.2, 0.4]);
    let q1 = bi_from_correlators([-0.5, 0.2, 0.0, 0.1]);
    let r = [SingleBox::deterministic(0, 0), SingleBox::deterministic(0, 1)];
    let bx = TripartiteBox::from_fn(|x, y, z, a, b, c| {
        0.5 * r[0].get(x, a) * q0.get(y, z, b, c) + 0.5 * r[1].get(x, a) * q1.get(y, z, b, c)
    });
    assert!(d2_grid_residual(&bx) < 1e-12);
    let verdict = search_dimension(&bx, Cut::AvsBC, 2, &SearchOptions::default()).unwrap();
    assert!(verdict.status.is_feasible(), "{:?}", verdict.status);
}

/// Solves the merged system directly: unknowns are the three tables of the
/// groups {0, 2}, {1}, {3}, equations all 64 entries of the target.
fn merged_by_least_squares(v: f64) -> (Vec<[f64; 16]>, f64) {
    let bx = family_box(&FamilyParam::mermin(v).unwrap());
    let st = canonical_strategies();
    let group = [0, 1, 0, 2];
    let mut a = DMatrix::zeros(64, 48);
    let mut rhs = DVector::zeros(64);
    for x in 0..2 {
        for aa in 0..2 {
            for j in 0..16 {
                let row = (2 * x + aa) * 16 + j;
                rhs[row] = target(&bx)[(2 * x + aa, j)];
                for l in 0..4 {
                    a[(row, group[l] * 16 + j)] += 0.25 * st[l].get(x, aa);
                }
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10).count();
    let sol = svd.solve(&rhs, 1e-10).unwrap();
    let res = (&a * &sol - &rhs).amax();
    assert_eq!(rank, 48, "merged system should determine every table");
    let tables = (0..3).map(|g| std::array::from_fn(|j| sol[g * 16 + j])).collect();
    (tables, res)
}

#[test]
fn merged_tables_match_an_independent_solve() {
    for v in [0.05, 0.2, 0.4, 0.6] {
        let (tables, res) = merged_by_least_squares(v);
        assert!(res < 1e-12);
        let lib = solve_conditionals(
            &family_box(&FamilyParam::mermin(v).unwrap()),
            Cut::AvsBC,
            &canonical_strategies(),
            &[0.25; 4],
            &[(0, 2)],
            1e-7,
        )
        .unwrap();
        for (g, want) in expected_merged(v).iter().enumerate() {
            for y in 0..2 {
                for z in 0..2 {
                    for b in 0..2 {
                        for c in 0..2 {
                            let j = bi_index(y, z, b, c);
                            let w = want.get(y, z, b, c);
                            assert!((tables[g][j] - w).abs() < 1e-12, "V = {v}, group {g}, entry {j}");
                            assert!((lib.pieces[g].get(y, z, b, c) - w).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn strength_lp_matches_grid_search() {
    for k in 1..=10 {
        let v = k as f64 / 10.0;
        let bx = family_box(&FamilyParam::mermin(v).unwrap());
        let lp = strength(&bx, StrengthKind::Mermin).unwrap();
        let grid = mermin_strength_oracle(&bx);
        assert!((lp.p - grid).abs() <= 1e-6, "V = {v}: LP {} vs grid {grid}", lp.p);
        assert!(lp.decomposable);
    }
}

#[test]
fn mermin_value_matches_direct_summation() {
    for k in 1..=10 {
        let v = k as f64 / 10.0;
        let bx = family_box(&FamilyParam::mermin(v).unwrap());
        assert!((mermin_oracle(&bx) - 4.0 * v).abs() < 1e-12);
        assert!(bx.max_abs_diff(&mermin_from_correlators(v)) < 1e-15);
    }
}

//! Linear systems behind the LHV-LHS decompositions.
//!
//! A *problem* fixes the target table `T[(x, a)][j]`, where `j` runs over
//! the trusted side's entries, plus the linear constraints every piece must
//! satisfy on its own (normalisation, no-signalling).

use crate::boxes::{bi_index, single_index, BipartiteBox, SingleBox, TripartiteBox};
use crate::inequalities::simplex::{LinearProgram, LpStatus, Relation};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub(crate) struct Problem {
    /// `target[2x + a][j]`.
    pub target: Vec<Vec<f64>>,
    /// Entries per piece.
    pub m: usize,
    /// Rows `(coeffs, rhs)` constraining a single piece.
    pub piece_rows: Vec<(Vec<f64>, f64)>,
    /// Uniform value of a piece entry; solutions are minimum-norm around it.
    pub center: f64,
}

impl Problem {
    /// Trusted pair `BC` of a tripartite box in canonical orientation.
    pub fn tripartite(bx: &TripartiteBox) -> Self {
        let mut target = vec![vec![0.0; 16]; 4];
        for x in 0..2 {
            for a in 0..2 {
                for j in 0..16 {
                    let (y, z, b, c) = ((j >> 3) & 1, (j >> 2) & 1, (j >> 1) & 1, j & 1);
                    target[2 * x + a][j] = bx.get(x, y, z, a, b, c);
                }
            }
        }
        let mut rows = Vec::new();
        for y in 0..2 {
            for z in 0..2 {
                let mut r = vec![0.0; 16];
                for o in 0..4 {
                    r[bi_index(y, z, o >> 1, o & 1)] = 1.0;
                }
                rows.push((r, 1.0));
            }
        }
        for s in 0..2 {
            for o in 0..2 {
                let mut rb = vec![0.0; 16];
                let mut rc = vec![0.0; 16];
                for k in 0..2 {
                    rb[bi_index(s, 0, o, k)] += 1.0;
                    rb[bi_index(s, 1, o, k)] -= 1.0;
                    rc[bi_index(0, s, k, o)] += 1.0;
                    rc[bi_index(1, s, k, o)] -= 1.0;
                }
                rows.push((rb, 0.0));
                rows.push((rc, 0.0));
            }
        }
        Self { target, m: 16, piece_rows: rows, center: 0.25 }
    }

    /// Trusted second party of a bipartite box: `target[2y + b][(z, c)]`.
    pub fn bipartite(bx: &BipartiteBox) -> Self {
        let mut target = vec![vec![0.0; 4]; 4];
        for y in 0..2 {
            for b in 0..2 {
                for z in 0..2 {
                    for c in 0..2 {
                        target[2 * y + b][single_index(z, c)] = bx.get(y, z, b, c);
                    }
                }
            }
        }
        let rows = (0..2)
            .map(|z| {
                let mut r = vec![0.0; 4];
                r[single_index(z, 0)] = 1.0;
                r[single_index(z, 1)] = 1.0;
                (r, 1.0)
            })
            .collect();
        Self { target, m: 4, piece_rows: rows, center: 0.5 }
    }

    /// Untrusted marginal `P(a|x)` read off the target.
    pub fn untrusted_marginal(&self) -> SingleBox {
        // Any normalisation row sums a piece to one over a fixed setting.
        let norm = &self.piece_rows[0].0;
        SingleBox::from_fn(|x, a| self.target[2 * x + a].iter().zip(norm).map(|(t, n)| t * n).sum())
    }
}

/// Coefficient of group `g` in the equation for `(x, a)`.
fn group_coeff(strategies: &[SingleBox], weights: &[f64], group: &[usize], x: usize, a: usize) -> f64 {
    group.iter().map(|&l| weights[l] * strategies[l].get(x, a)).sum()
}

#[derive(Debug, Clone)]
pub(crate) struct GroupSolution {
    pub pieces: Vec<Vec<f64>>,
    pub residual: f64,
    pub nullity: usize,
}

fn system(p: &Problem, strategies: &[SingleBox], weights: &[f64], groups: &[Vec<usize>]) -> (DMatrix<f64>, DVector<f64>) {
    let g = groups.len();
    let n = g * p.m;
    let rows = 4 * p.m + g * p.piece_rows.len();
    let mut a = DMatrix::zeros(rows, n);
    let mut b = DVector::zeros(rows);
    let mut r = 0;
    for x in 0..2 {
        for o in 0..2 {
            for j in 0..p.m {
                for (k, grp) in groups.iter().enumerate() {
                    a[(r, k * p.m + j)] = group_coeff(strategies, weights, grp, x, o);
                }
                b[r] = p.target[2 * x + o][j];
                r += 1;
            }
        }
    }
    for k in 0..g {
        for (coef, rhs) in &p.piece_rows {
            for (j, c) in coef.iter().enumerate() {
                a[(r, k * p.m + j)] = *c;
            }
            b[r] = *rhs;
            r += 1;
        }
    }
    (a, b)
}

/// Minimum-norm (around `center`) least-squares solution for the pieces.
pub(crate) fn solve_groups(p: &Problem, strategies: &[SingleBox], weights: &[f64], groups: &[Vec<usize>]) -> GroupSolution {
    let (a, b) = system(p, strategies, weights, groups);
    let n = a.ncols();
    let x0 = DVector::from_element(n, p.center);
    let rhs = &b - &a * &x0;
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = 1e-10 * smax.max(1.0);
    let dy = svd.solve(&rhs, eps).expect("SVD with both factors");
    let x = x0 + dy;
    let residual = (&a * &x - &b).amax();
    let rank = svd.rank(eps);
    let pieces = (0..groups.len()).map(|k| x.as_slice()[k * p.m..(k + 1) * p.m].to_vec()).collect();
    GroupSolution { pieces, residual, nullity: n - rank }
}

/// Some nonnegative solution of the same system, if one exists.
pub(crate) fn lp_groups(p: &Problem, strategies: &[SingleBox], weights: &[f64], groups: &[Vec<usize>], tol: f64) -> Option<Vec<Vec<f64>>> {
    let (a, b) = system(p, strategies, weights, groups);
    let mut lp = LinearProgram::new(a.ncols());
    for i in 0..a.nrows() {
        lp.constrain(a.row(i).iter().copied().collect(), Relation::Eq, b[i]);
    }
    let sol = lp.solve(tol).ok()?;
    (sol.status != LpStatus::Infeasible)
        .then(|| (0..groups.len()).map(|k| sol.x[k * p.m..(k + 1) * p.m].to_vec()).collect())
}

/// Decomposition over the given deterministic strategies with free weights:
/// unknowns `S_λ = r_λ Q_λ ≥ 0`. Returns `(weights, pieces)` with zero-weight
/// strategies dropped from neither list.
pub(crate) fn lp_free_weights(p: &Problem, strategies: &[SingleBox], tol: f64) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let d = strategies.len();
    let n = d * p.m;
    let mut lp = LinearProgram::new(n);
    for x in 0..2 {
        for o in 0..2 {
            for j in 0..p.m {
                let mut row = vec![0.0; n];
                for (l, s) in strategies.iter().enumerate() {
                    row[l * p.m + j] = s.get(x, o);
                }
                lp.constrain(row, Relation::Eq, p.target[2 * x + o][j]);
            }
        }
    }
    let norm_rows: Vec<&Vec<f64>> = p.piece_rows.iter().filter(|r| r.1 != 0.0).map(|r| &r.0).collect();
    for l in 0..d {
        let embed = |coef: &[f64]| {
            let mut row = vec![0.0; n];
            row[l * p.m..(l + 1) * p.m].copy_from_slice(coef);
            row
        };
        for (coef, rhs) in &p.piece_rows {
            if *rhs == 0.0 {
                lp.constrain(embed(coef), Relation::Eq, 0.0);
            }
        }
        for nr in norm_rows.iter().skip(1) {
            let diff: Vec<f64> = nr.iter().zip(norm_rows[0]).map(|(a, b)| a - b).collect();
            lp.constrain(embed(&diff), Relation::Eq, 0.0);
        }
    }
    let sol = lp.solve(tol).ok()?;
    if sol.status == LpStatus::Infeasible {
        return None;
    }
    let mut weights = Vec::with_capacity(d);
    let mut pieces = Vec::with_capacity(d);
    for l in 0..d {
        let s = &sol.x[l * p.m..(l + 1) * p.m];
        let r: f64 = s.iter().zip(norm_rows[0]).map(|(v, n)| v * n).sum();
        weights.push(r);
        pieces.push(if r > 1e-12 { s.iter().map(|v| v / r).collect() } else { vec![p.center; p.m] });
    }
    Some((weights, pieces))
}

/// Numerical rank of the `4 × m` matrix `T[(x, a)][j]`. A model with `d`
/// hidden values has rank at most `d`.
pub(crate) fn target_rank(p: &Problem, tol: f64) -> (usize, Vec<f64>) {
    let t = DMatrix::from_fn(4, p.m, |i, j| p.target[i][j]);
    let sv: Vec<f64> = t.svd(false, false).singular_values.iter().copied().collect();
    (sv.iter().filter(|&&s| s > tol).count(), sv)
}

/// Weights on `strategies` reproducing the untrusted marginal, if unique and
/// consistent.
pub(crate) fn marginal_weights(marginal: &SingleBox, strategies: &[SingleBox], tol: f64) -> Option<Vec<f64>> {
    let k = strategies.len();
    let mut a = DMatrix::zeros(5, k);
    let mut b = DVector::zeros(5);
    for x in 0..2 {
        for o in 0..2 {
            for (l, s) in strategies.iter().enumerate() {
                a[(2 * x + o, l)] = s.get(x, o);
            }
            b[2 * x + o] = marginal.get(x, o);
        }
    }
    for l in 0..k {
        a[(4, l)] = 1.0;
    }
    b[4] = 1.0;
    let svd = a.clone().svd(true, true);
    if svd.rank(1e-10) < k {
        return None;
    }
    let w = svd.solve(&b, 1e-10).ok()?;
    let residual = (&a * &w - &b).amax();
    (residual <= tol).then(|| w.iter().copied().collect())
}

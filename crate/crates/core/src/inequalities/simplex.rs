//! Dense two-phase simplex with Bland's rule.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Sum of artificial variables left after phase one.
    pub infeasibility: f64,
    pub pivots: usize,
}

/// `maximize c·x` subject to the rows and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    n: usize,
    objective: Vec<f64>,
    rows: Vec<(Vec<f64>, Relation, f64)>,
    max_pivots: usize,
}

const PIVOT_EPS: f64 = 1e-10;
const COST_EPS: f64 = 1e-11;

impl LinearProgram {
    pub fn new(n: usize) -> Self {
        Self { n, objective: vec![0.0; n], rows: Vec::new(), max_pivots: 200_000 }
    }

    pub fn maximize(&mut self, c: Vec<f64>) -> &mut Self {
        assert_eq!(c.len(), self.n);
        self.objective = c;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.n);
        self.rows.push((coeffs, rel, rhs));
        self
    }

    pub fn with_max_pivots(mut self, k: usize) -> Self {
        self.max_pivots = k;
        self
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    /// `feas_tol` bounds the phase-one residual accepted as feasible.
    pub fn solve(&self, feas_tol: f64) -> Result<LpSolution> {
        let n = self.n;
        let m = self.rows.len();
        // Normalise to nonnegative right-hand sides.
        let rows: Vec<(Vec<f64>, Relation, f64)> = self
            .rows
            .iter()
            .map(|(a, r, b)| {
                if *b < 0.0 {
                    let flipped = match r {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (a.iter().map(|v| -v).collect(), flipped, -b)
                } else {
                    (a.clone(), *r, *b)
                }
            })
            .collect();
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let cols = n + n_slack + n_art;
        let rhs = cols;
        let mut t = vec![vec![0.0; cols + 1]; m];
        let mut basis = vec![0usize; m];
        let (mut s, mut a) = (n, n + n_slack);
        for (i, (coef, rel, b)) in rows.iter().enumerate() {
            t[i][..n].copy_from_slice(coef);
            t[i][rhs] = *b;
            match rel {
                Relation::Le => {
                    t[i][s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    t[i][s] = -1.0;
                    s += 1;
                    t[i][a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    t[i][a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
            }
        }
        let art_start = n + n_slack;
        let mut tab = Tableau { t, basis, z: vec![0.0; cols + 1], rhs, pivots: 0, max_pivots: self.max_pivots };

        // Phase one: maximise −Σ artificials.
        let mut c1 = vec![0.0; cols];
        for v in c1.iter_mut().skip(art_start) {
            *v = -1.0;
        }
        tab.set_objective(&c1);
        tab.run(cols)?;
        let infeasibility = tab.z[rhs].max(0.0);
        let scale = 1.0 + rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
        if infeasibility > feas_tol * scale {
            return Ok(LpSolution { status: LpStatus::Infeasible, x: tab.primal(n), objective: f64::NAN, infeasibility, pivots: tab.pivots });
        }

        // Drive artificials out of the basis; rows where that fails are redundant.
        let mut i = 0;
        while i < tab.t.len() {
            if tab.basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| tab.t[i][j].abs() > 1e-9) {
                    tab.pivot(i, j);
                    i += 1;
                } else {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }

        let mut c2 = vec![0.0; cols];
        c2[..n].copy_from_slice(&self.objective);
        tab.set_objective(&c2);
        let bounded = tab.run(art_start)?;
        let x = tab.primal(n);
        let objective = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution {
            status: if bounded { LpStatus::Optimal } else { LpStatus::Unbounded },
            x,
            objective,
            infeasibility,
            pivots: tab.pivots,
        })
    }
}

struct Tableau {
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Reduced costs; `z[rhs]` holds minus the objective value.
    z: Vec<f64>,
    rhs: usize,
    pivots: usize,
    max_pivots: usize,
}

impl Tableau {
    fn set_objective(&mut self, c: &[f64]) {
        let mut z = vec![0.0; self.rhs + 1];
        z[..c.len()].copy_from_slice(c);
        for (row, &b) in self.t.iter().zip(&self.basis) {
            let cb = c[b];
            if cb != 0.0 {
                for (zj, tj) in z.iter_mut().zip(row) {
                    *zj -= cb * tj;
                }
            }
        }
        self.z = z;
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.t[r][col];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pr = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r {
                let f = row[col];
                if f != 0.0 {
                    for (v, q) in row.iter_mut().zip(&pr) {
                        *v -= f * q;
                    }
                    row[col] = 0.0;
                }
            }
        }
        let f = self.z[col];
        if f != 0.0 {
            for (v, q) in self.z.iter_mut().zip(&pr) {
                *v -= f * q;
            }
            self.z[col] = 0.0;
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    /// Iterates with entering columns restricted to `0..allowed`. Returns
    /// `false` if the objective is unbounded.
    fn run(&mut self, allowed: usize) -> Result<bool> {
        loop {
            if self.pivots > self.max_pivots {
                return Err(Error::LpNonConvergence { iterations: self.pivots });
            }
            let Some(col) = (0..allowed).find(|&j| self.z[j] > COST_EPS) else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if row[col] > PIVOT_EPS {
                    let ratio = row[self.rhs].max(0.0) / row[col];
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-13 || (ratio <= br + 1e-13 && self.basis[i] < self.basis[bi]) {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return Ok(false),
            }
        }
    }

    fn primal(&self, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (row, &b) in self.t.iter().zip(&self.basis) {
            if b < n {
                x[b] = row[self.rhs].max(0.0);
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36.
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![3.0, 5.0])
            .constrain(vec![1.0, 0.0], Relation::Le, 4.0)
            .constrain(vec![0.0, 2.0], Relation::Le, 12.0)
            .constrain(vec![3.0, 2.0], Relation::Le, 18.0);
        let s = lp.solve(1e-9).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_ge_rows() {
        // max −x − y, x + y = 1, x ≥ 0.25, redundant 2x + 2y = 2.
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![-1.0, -2.0])
            .constrain(vec![1.0, 1.0], Relation::Eq, 1.0)
            .constrain(vec![2.0, 2.0], Relation::Eq, 2.0)
            .constrain(vec![1.0, 0.0], Relation::Ge, 0.25);
        let s = lp.solve(1e-9).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.constrain(vec![1.0], Relation::Le, 1.0).constrain(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(lp.solve(1e-9).unwrap().status, LpStatus::Infeasible);
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![1.0, 0.0]).constrain(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve(1e-9).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn negative_rhs_is_flipped() {
        let mut lp = LinearProgram::new(1);
        lp.maximize(vec![-1.0]).constrain(vec![-1.0], Relation::Le, -3.0);
        let s = lp.solve(1e-9).unwrap();
        assert!((s.x[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pivot_cap_is_reported() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(vec![1.0, 1.0]).constrain(vec![1.0, 1.0], Relation::Le, 1.0).constrain(vec![1.0, 0.0], Relation::Eq, 0.5);
        let lp = lp.with_max_pivots(0);
        assert!(matches!(lp.solve(1e-9), Err(Error::LpNonConvergence { .. })));
    }
}

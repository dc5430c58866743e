use super::{bi_index, single_index, tri_coords, tri_index, BipartiteBox, SingleBox, TripartiteBox};
use serde::Serialize;

/// Outcome of checking a table against the box axioms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub nonneg: bool,
    pub normalized: bool,
    pub no_signalling: bool,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.nonneg && self.normalized && self.no_signalling
    }
}

/// A single offending entry or marginal.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    /// Entry outside `[0, 1]`. `index` holds settings then outcomes.
    OutOfRange { index: Vec<usize>, value: f64 },
    Normalization { settings: Vec<usize>, sum: f64 },
    /// `marginal` names the parties kept (e.g. `"B"`, `"AC"`); `varies_with`
    /// names the parties whose setting changes it.
    Signalling { marginal: String, varies_with: String, settings: Vec<usize>, deviation: f64 },
}

const NAMES: [char; 3] = ['A', 'B', 'C'];

fn check_range(p: &[f64], tol: f64, coords: impl Fn(usize) -> Vec<usize>, issues: &mut Vec<Issue>) -> bool {
    let mut ok = true;
    for (i, &v) in p.iter().enumerate() {
        if !(v >= -tol && v <= 1.0 + tol) {
            ok = false;
            issues.push(Issue::OutOfRange { index: coords(i), value: v });
        }
    }
    ok
}

pub(super) fn validate_tripartite(bx: &TripartiteBox, tol: f64) -> ValidationReport {
    let p = bx.entries();
    let mut issues = Vec::new();
    let nonneg = check_range(p, tol, |i| tri_coords(i).to_vec(), &mut issues);

    let mut normalized = true;
    for s in 0..8 {
        let (x, y, z) = (s >> 2, (s >> 1) & 1, s & 1);
        let sum: f64 = (0..8).map(|o| p[tri_index(x, y, z, o >> 2, (o >> 1) & 1, o & 1)]).sum();
        if (sum - 1.0).abs() > tol {
            normalized = false;
            issues.push(Issue::Normalization { settings: vec![x, y, z], sum });
        }
    }

    // Every proper non-empty subset of parties must have a marginal that is
    // blind to the complement's settings.
    let mut no_signalling = true;
    for mask in 1u8..7 {
        let kept: Vec<usize> = (0..3).filter(|k| mask & (1 << k) != 0).collect();
        let dropped: Vec<usize> = (0..3).filter(|k| mask & (1 << k) == 0).collect();
        // marginal[(settings of all parties, outcomes of kept)]
        let mut marg = std::collections::HashMap::<(usize, usize, usize, Vec<usize>), f64>::new();
        for (i, &v) in p.iter().enumerate() {
            let co = tri_coords(i);
            let outs: Vec<usize> = kept.iter().map(|&k| co[3 + k]).collect();
            *marg.entry((co[0], co[1], co[2], outs)).or_insert(0.0) += v;
        }
        let mut worst: Option<(f64, Vec<usize>)> = None;
        for ((x, y, z, outs), v) in &marg {
            let mut reference = [*x, *y, *z];
            for &d in &dropped {
                reference[d] = 0;
            }
            let r = marg[&(reference[0], reference[1], reference[2], outs.clone())];
            let dev = (v - r).abs();
            if dev > tol && worst.as_ref().is_none_or(|(w, _)| dev > *w) {
                worst = Some((dev, vec![*x, *y, *z]));
            }
        }
        if let Some((deviation, settings)) = worst {
            no_signalling = false;
            issues.push(Issue::Signalling {
                marginal: kept.iter().map(|&k| NAMES[k]).collect(),
                varies_with: dropped.iter().map(|&k| NAMES[k]).collect(),
                settings,
                deviation,
            });
        }
    }

    ValidationReport { nonneg, normalized, no_signalling, issues }
}

pub(super) fn validate_bipartite(bx: &BipartiteBox, tol: f64) -> ValidationReport {
    let p = bx.entries();
    let mut issues = Vec::new();
    let nonneg = check_range(p, tol, |i| vec![(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1], &mut issues);

    let mut normalized = true;
    for y in 0..2 {
        for z in 0..2 {
            let sum: f64 = (0..4).map(|o| p[bi_index(y, z, o >> 1, o & 1)]).sum();
            if (sum - 1.0).abs() > tol {
                normalized = false;
                issues.push(Issue::Normalization { settings: vec![y, z], sum });
            }
        }
    }

    let mut no_signalling = true;
    for y in 0..2 {
        for b in 0..2 {
            let m = |z: usize| p[bi_index(y, z, b, 0)] + p[bi_index(y, z, b, 1)];
            let dev = (m(0) - m(1)).abs();
            if dev > tol {
                no_signalling = false;
                issues.push(Issue::Signalling {
                    marginal: "first".into(),
                    varies_with: "second".into(),
                    settings: vec![y, 1],
                    deviation: dev,
                });
            }
        }
    }
    for z in 0..2 {
        for c in 0..2 {
            let m = |y: usize| p[bi_index(y, z, 0, c)] + p[bi_index(y, z, 1, c)];
            let dev = (m(0) - m(1)).abs();
            if dev > tol {
                no_signalling = false;
                issues.push(Issue::Signalling {
                    marginal: "second".into(),
                    varies_with: "first".into(),
                    settings: vec![1, z],
                    deviation: dev,
                });
            }
        }
    }
    ValidationReport { nonneg, normalized, no_signalling, issues }
}

pub(super) fn validate_single(bx: &SingleBox, tol: f64) -> ValidationReport {
    let p = bx.entries();
    let mut issues = Vec::new();
    let nonneg = check_range(p, tol, |i| vec![i >> 1, i & 1], &mut issues);
    let mut normalized = true;
    for x in 0..2 {
        let sum = p[single_index(x, 0)] + p[single_index(x, 1)];
        if (sum - 1.0).abs() > tol {
            normalized = false;
            issues.push(Issue::Normalization { settings: vec![x], sum });
        }
    }
    ValidationReport { nonneg, normalized, no_signalling: true, issues }
}

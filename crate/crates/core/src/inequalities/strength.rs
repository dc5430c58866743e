use super::simplex::{LinearProgram, LpStatus, Relation};
use super::variants::{all_mermin_boxes, mermin_variants, svetlichny_variants, Coefficients, MERMIN_BOUND, SVETLICHNY_BOUND};
use crate::boxes::{all_svetlichny, tri_coords, TripartiteBox, VertexId};
use crate::error::Result;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrengthKind {
    Svetlichny,
    Mermin,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrengthResult {
    pub kind: StrengthKind,
    pub p: f64,
    /// False when no fraction of any vertex leaves an admissible residual,
    /// e.g. for a PR box shared by two parties times a deterministic third.
    /// `p` is then 0 and there is no residual.
    pub decomposable: bool,
    pub dominant_vertex: VertexId,
    /// `(box − p·vertex)/(1 − p)`; absent when `p = 1`.
    #[serde(skip)]
    pub residual_box: Option<TripartiteBox>,
    /// `max |box − p·vertex − (1 − p)·residual|`.
    pub reconstruction_error: f64,
}

/// Row of `Σ_i coeff_i Q_i` giving the expression `m` evaluated on a table `Q`.
fn expression_row(m: &Coefficients) -> Vec<f64> {
    (0..TripartiteBox::LEN)
        .map(|i| {
            let [x, y, z, a, b, c] = tri_coords(i);
            let s = if (a ^ b ^ c) & 1 == 0 { 1.0 } else { -1.0 };
            m[x][y][z] as f64 * s
        })
        .collect()
}

/// Largest `p` with `box = p·vertex + Q`, `Q ≥ 0` and `Q` respecting every
/// expression at `bound·(1 − p)`.
pub fn max_fraction(bx: &TripartiteBox, vertex: &TripartiteBox, exprs: &[Coefficients], bound: f64) -> Result<Option<f64>> {
    let n = TripartiteBox::LEN + 1;
    let pi = TripartiteBox::LEN;
    let mut lp = LinearProgram::new(n);
    let mut obj = vec![0.0; n];
    obj[pi] = 1.0;
    lp.maximize(obj);
    for i in 0..TripartiteBox::LEN {
        let mut row = vec![0.0; n];
        row[i] = 1.0;
        row[pi] = vertex.entries()[i];
        lp.constrain(row, Relation::Eq, bx.entries()[i]);
    }
    for m in exprs {
        let mut row = expression_row(m);
        row.push(bound);
        lp.constrain(row, Relation::Le, bound);
    }
    let mut cap = vec![0.0; n];
    cap[pi] = 1.0;
    lp.constrain(cap, Relation::Le, 1.0);
    let sol = lp.solve(crate::tol::LP)?;
    Ok(match sol.status {
        LpStatus::Optimal => Some(sol.x[pi]),
        _ => None,
    })
}

/// Maximal dominant-vertex fraction over the 16 Svetlichny or Mermin boxes.
pub fn strength(bx: &TripartiteBox, kind: StrengthKind) -> Result<StrengthResult> {
    let (verts, exprs, bound): (Vec<(VertexId, TripartiteBox)>, &[Coefficients], f64) = match kind {
        StrengthKind::Svetlichny => (all_svetlichny(), svetlichny_variants(), SVETLICHNY_BOUND),
        StrengthKind::Mermin => (
            all_mermin_boxes().into_iter().enumerate().map(|(k, b)| (VertexId::Mermin { variant: k }, b)).collect(),
            mermin_variants(),
            MERMIN_BOUND,
        ),
    };
    let mut best: Option<(usize, f64)> = None;
    for (k, (_, v)) in verts.iter().enumerate() {
        if let Some(p) = max_fraction(bx, v, exprs, bound)? {
            if best.is_none_or(|(_, bp)| p > bp + 1e-12) {
                best = Some((k, p));
            }
        }
    }
    let Some((k, p)) = best else {
        return Ok(StrengthResult {
            kind,
            p: 0.0,
            decomposable: false,
            dominant_vertex: verts[0].0,
            residual_box: None,
            reconstruction_error: f64::NAN,
        });
    };
    let vertex = &verts[k].1;
    let q: Vec<f64> = bx.entries().iter().zip(vertex.entries()).map(|(b, v)| b - p * v).collect();
    let (residual_box, reconstruction_error) = if p < 1.0 - 1e-12 {
        let r = TripartiteBox::from_entries(q.iter().map(|x| x / (1.0 - p)).collect())?;
        let err = bx.max_abs_diff(&vertex.mix(&r, p));
        (Some(r), err)
    } else {
        (None, q.iter().map(|x| x.abs()).fold(0.0, f64::max))
    };
    Ok(StrengthResult { kind, p, decomposable: true, dominant_vertex: verts[k].0, residual_box, reconstruction_error })
}

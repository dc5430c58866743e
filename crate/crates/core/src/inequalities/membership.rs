use super::simplex::{LinearProgram, LpStatus, Relation};
use crate::boxes::{all_deterministic, all_two_way, TripartiteBox, VertexId};
use crate::error::Result;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polytope {
    /// Mixtures of the 64 deterministic boxes.
    FullyLocal,
    /// Mixtures of deterministic and PR-sharing vertices.
    TwoWayLocal,
}

impl std::str::FromStr for Polytope {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fully_local" | "local" | "fully-local" => Ok(Polytope::FullyLocal),
            "two_way_local" | "two-way" | "two-way-local" => Ok(Polytope::TwoWayLocal),
            other => Err(crate::Error::Input(format!("unknown polytope `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipResult {
    pub polytope: Polytope,
    pub feasible: bool,
    /// One convex weight per vertex when feasible, empty otherwise.
    pub weights: Vec<(VertexId, f64)>,
    /// Number of weights above 1e-12.
    pub support: usize,
    pub max_residual: f64,
    pub vertices_considered: usize,
}

pub fn vertices(polytope: Polytope) -> Vec<(VertexId, TripartiteBox)> {
    let mut v = all_deterministic();
    if polytope == Polytope::TwoWayLocal {
        v.extend(all_two_way());
    }
    v
}

/// Decides whether `bx` is a convex mixture of the polytope's vertices.
pub fn lp_membership(bx: &TripartiteBox, polytope: Polytope, tol: f64) -> Result<MembershipResult> {
    let verts = vertices(polytope);
    let k = verts.len();
    let mut lp = LinearProgram::new(k);
    for i in 0..TripartiteBox::LEN {
        lp.constrain(verts.iter().map(|(_, v)| v.entries()[i]).collect(), Relation::Eq, bx.entries()[i]);
    }
    lp.constrain(vec![1.0; k], Relation::Eq, 1.0);
    let sol = lp.solve(tol)?;
    let feasible = sol.status != LpStatus::Infeasible;
    let mut mixture = vec![0.0; TripartiteBox::LEN];
    for ((_, v), w) in verts.iter().zip(&sol.x) {
        for (m, e) in mixture.iter_mut().zip(v.entries()) {
            *m += w * e;
        }
    }
    let max_residual = mixture.iter().zip(bx.entries()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let weights = if feasible {
        verts.iter().zip(&sol.x).map(|((id, _), &w)| (*id, w)).collect()
    } else {
        Vec::new()
    };
    let support = weights.iter().filter(|w: &&(VertexId, f64)| w.1 > 1e-12).count();
    Ok(MembershipResult { polytope, feasible, weights, support, max_residual, vertices_considered: k })
}

use super::linear::{solve_groups, Problem};
use super::model::{realize_pair, LhvLhsModel, Piece, PieceKind, QubitLhsModel, Realization};
use super::{canonical_strategies, SearchOptions};
use crate::boxes::{canonical_perm, family_box, permute_parties, BipartiteBox, Cut, FamilyKind, FamilyParam, SingleBox};
use crate::error::{Error, Result};
use crate::quantum::{born_bipartite, born_single, paper_state, sigma_pair, PaperState, LHS_PAIR_PHASES, SIGMA_PAIR_ANGLES};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

fn pair_range(v: f64) -> Result<()> {
    if v > 0.0 && v <= FRAC_1_SQRT_2 * (1.0 + 1e-15) {
        Ok(())
    } else {
        Err(Error::VisibilityRange { v, bound: "sin 2θ = √2 V requires 0 < V <= 1/√2".into() })
    }
}

/// Four-valued LHV-LHS model of a family box across `cut`: deterministic
/// responders `a = αx ⊕ β`, weights 1/4, two-qubit hidden states measured
/// with `σ_y`, `-σ_x`.
///
/// Mermin pieces are the closed-form states `lhs_pair(λ)`. Svetlichny pieces
/// are fitted from the canonical conditional tables; any piece that does not
/// fit is kept as an abstract table so the model still reconstructs.
pub fn build_d4_model(family: &FamilyParam, cut: Cut) -> Result<LhvLhsModel> {
    let v = family.v();
    pair_range(v)?;
    let measurements = [sigma_pair(), sigma_pair()];
    let pieces = match family.kind() {
        FamilyKind::Mermin => (0..4)
            .map(|lambda| {
                let state = paper_state(PaperState::LhsPair { lambda }, v)?;
                let table = born_bipartite(&state, &measurements)?;
                Ok(Piece { table, kind: PieceKind::Quantum { state, measurements: measurements.clone() } })
            })
            .collect::<Result<Vec<_>>>()?,
        FamilyKind::Svetlichny => {
            let canonical = permute_parties(&family_box(family), canonical_perm(cut));
            let p = Problem::tripartite(&canonical);
            let groups: Vec<Vec<usize>> = (0..4).map(|l| vec![l]).collect();
            let sol = solve_groups(&p, &canonical_strategies(), &[0.25; 4], &groups);
            let opts = SearchOptions::default();
            sol.pieces
                .into_iter()
                .map(|vals| {
                    let table = BipartiteBox::from_entries(vals)?;
                    let kind = match realize_pair(&table, opts.pair_angles, crate::tol::PROB) {
                        Realization::Piece(k) => k,
                        Realization::NotRealizable(reason) => PieceKind::Abstract { reason },
                    };
                    Ok(Piece { table, kind })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(LhvLhsModel { cut: Some(cut), weights: vec![0.25; 4], responders: canonical_strategies(), pieces })
}

/// The conditional two-party table `Q_λ` of the four-valued Mermin model,
/// `(1 ± √2 V cos(φ_λ − α_y − α_z)) / 4`.
pub fn conditional_box(lambda: usize, v: f64) -> Result<BipartiteBox> {
    let phi = *LHS_PAIR_PHASES.get(lambda).ok_or_else(|| Error::Input(format!("λ = {lambda} not in 0..4")))?;
    if !(v > 0.0 && v <= 1.0) {
        return Err(Error::VisibilityRange { v, bound: "0 < V <= 1".into() });
    }
    let al = SIGMA_PAIR_ANGLES;
    Ok(BipartiteBox::from_fn(|y, z, b, c| {
        let corr = SQRT_2 * v * (phi - al[y] - al[z]).cos();
        let s = if b ^ c == 0 { 1.0 } else { -1.0 };
        (1.0 + s * corr) / 4.0
    }))
}

/// Four-valued LHV-LHS model of `Q_0` with single-qubit hidden states
/// `lhs_qubit(μ)` measured with `σ_y`, `-σ_x`. Needs `V <= 1/2`.
pub fn build_d4_qubit_model(v: f64) -> Result<QubitLhsModel> {
    let meas = sigma_pair();
    let pieces = (0..4)
        .map(|lambda| {
            let state = paper_state(PaperState::LhsQubit { lambda }, v)?;
            let table: SingleBox = born_single(&state, &meas)?;
            Ok(Piece { table, kind: PieceKind::Quantum { state, measurements: meas.clone() } })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QubitLhsModel { cut: None, weights: vec![0.25; 4], responders: canonical_strategies(), pieces })
}

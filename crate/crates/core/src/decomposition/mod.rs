//! LHV-LHS decompositions with a bounded number of hidden values, the
//! explicit constructions that realise them, and certificates built on top.

mod certify;
mod construct;
mod linear;
mod model;
mod search;

pub use certify::{
    certify_genuine, certify_genuine_all_cuts, certify_super_bi_unsteerable, certify_super_unsteerable, BipartiteCertificate,
    BipartiteRealization, Conclusion, GenuineCertificate, GenuineConclusion, QuantumRealization, SuperCertificate,
    TripartiteCertificate,
};
pub use construct::{build_d4_model, build_d4_qubit_model, conditional_box};
pub use model::{
    fit_equatorial_pair, realize_pair, realize_qubit, verify_model, verify_qubit_model, LhvLhsModel, Model, PairAngles,
    Piece, PieceKind, PieceTable, QubitLhsModel, Realization, VerifyReport,
};
pub use search::{
    bipartite_search_dimension, search_dimension, solve_conditionals, CaseOutcome, CaseTrace, ConditionalSolution,
    DimensionVerdict, SearchOptions, Status,
};

use crate::boxes::SingleBox;

/// The four deterministic single-party strategies `a = αx ⊕ β`, indexed by
/// `λ = 2α + β`.
pub fn canonical_strategies() -> Vec<SingleBox> {
    (0..4u8).map(|l| SingleBox::deterministic(l >> 1, l & 1)).collect()
}

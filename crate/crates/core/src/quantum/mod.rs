//! Density matrices, dichotomic measurements, the Born rule, assemblages and
//! the arcsine realizability test.

mod assemblage;
mod born;
pub mod linalg;
mod measurement;
mod state;
mod tlm;

pub use assemblage::{assemblage, validate_assemblage, Assemblage, AssemblageReport, LhsEnsemble};
pub use born::{born_bipartite, born_single, born_tripartite, MeasurementPair};
pub use linalg::{dagger, partial_trace, permute_subsystems, tensor, CMat};
pub use measurement::{
    mutually_unbiased, paper_measurements, sigma_pair, DichotomicMeasurement, MeasurementKind, PaperMeasurements,
    SIGMA_PAIR_ANGLES,
};
pub use state::{cq_state, paper_state, phased_ket, DensityMatrix, DensityMatrixJson, PaperState, LHS_PAIR_PHASES, LHS_QUBIT_PHASES};
pub use tlm::{tlm_margin, tlm_realizable, TlmVerdict};

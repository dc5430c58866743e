//! Bell-type inequalities, polytope membership and dominant-vertex strength.

mod membership;
pub mod simplex;
mod strength;
mod values;
pub mod variants;

pub use membership::{lp_membership, vertices, MembershipResult, Polytope};
pub use strength::{max_fraction, strength, StrengthKind, StrengthResult};
pub use values::{
    chsh_sign, chsh_value, mermin_value, steering_chsh_value, svetlichny_value, InequalityResult, STEERING_CHSH_FORMULA,
};
pub use variants::{all_mermin_boxes, mermin_variants, svetlichny_variants};

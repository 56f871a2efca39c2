//! Centralized fuzzy-system building blocks.

mod antecedent;
mod fcm;
mod hidden;
mod icr;
mod solve;

pub use antecedent::{
    firing_strengths, gaussian_mf, ts_predict, Antecedent, ConsequentWeights, SIGMA_MIN,
};
pub use fcm::{
    fcm_fit, fcm_objective, fcm_step, fuzzy_sigmas, update_centers, update_memberships, FcmConfig,
    FcmFit, MembershipMatrix, SINGULAR_DISTANCE,
};
pub(crate) use fcm::{
    initial_centers, sigmas_from, validate_fuzziness, weighted_sums,
};
pub use hidden::{hidden_matrix, hidden_row, hidden_row_into};
pub use icr::{icr_augment, icr_matrix, icr_matrix_with_pool, IcrBatch};
pub use solve::{cholesky_solve, csfr_solve, gram, ridge_solve, Cholesky};

pub(crate) use solve::add_diagonal;

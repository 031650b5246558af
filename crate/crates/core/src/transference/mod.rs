//! Both sides of the transference identity between the torus and `ℝⁿ`,
//! and the weighted `L_σ` integral.

mod heat;
mod lsigma;
mod pairing;
mod rn;

pub use lsigma::{lsigma_norm, LSigmaNorm};
pub use pairing::{transference_rhs, verify_transference, ErrorBudget, TransferenceConfig, TransferenceReport};
pub use rn::{frac_laplacian_rn_gaussian, frac_laplacian_rn_with, RnRoute};

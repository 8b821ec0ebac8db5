//! Analytic functions on the disk, the outer function `φ` of a weight, the
//! factorization `f = B·S·φ^{2/p}·F`, weighted norms and the isometries
//! onto the classical Hardy spaces.

mod analytic;
mod context;
mod factors;
mod norms;
pub(crate) mod series;

pub use analytic::{blaschke_value, singular_value, AnalyticFunction, Factorization, SingularAtom};
pub use context::{context_from_phi, context_from_weight, sgn, HardyContext};
pub use factors::{
    blaschke, compose_factorization, is_outer, outer_from_modulus, recover_outer_part,
    singular_inner, RecoveredOuter,
};
pub use norms::{
    hp_norm, lp_norm_weighted, membership, transfer_from_classical, transfer_lp,
    transfer_to_classical, weighted_norm, MembershipReport, Transfer,
};

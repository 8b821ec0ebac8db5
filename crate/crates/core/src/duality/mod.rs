//! Linear functionals on `H^p_u`, annihilators, the predual pairing and the
//! extremal problems `Λ(g) = Γ(g)` with a numerical duality certificate.
//!
//! Integrals use the normalized measure `dν = dθ/2π`, so `L_G` is `1/2π`
//! times its `dθ` counterpart.

mod extremal;
mod functional;

pub use extremal::{
    dual_extremal, duality_certificate, primal_extremal, Diagnostics, DualSolution,
    ExtremalSolution, PrimalSolution, SolverOptions, WEAK_DUALITY_TOL,
};
pub use functional::{
    annihilator_check, conjugate_exponent, functional_lg, lambda_functional, predual_pairing,
    AnnihilatorReport, BoundaryFunctional, FunctionalValue, PredualPairing,
};

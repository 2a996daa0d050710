//! Steady-state analysis of the learned three-species model.
//!
//! The learned system's right-hand side has the template
//!
//! ```text
//! C' = θ₁C + θ₂I + θ₃C² + θ₄CH + θ₅CI
//! H' = φ₁H + φ₂C² + φ₃CH + φ₄H²
//! I' = λ₁I + λ₂C² + λ₃CH + λ₄CI
//! ```
//!
//! Setting the right-hand sides to zero and eliminating I and H reduces the
//! equilibrium condition (away from C = 0) to a quartic in C; admissible
//! equilibria are recovered from its positive real roots, and the linear
//! response of the steady cancer density to the initial immune density is
//! fit and inverted for treatment targets.

mod fit;
mod quartic;
mod reduced;
mod steady;

pub use fit::{fit_line, invert_target, LinearFit};
pub use quartic::{solve_quartic, QuarticRoot};
pub use reduced::{extract_coefficients, quartic_coefficients, QuarticCoefficients, ReducedCoefficients};
pub use steady::{steady_states, SteadyState, SteadyStateScan, DEFAULT_RESIDUAL_TOL};

use thiserror::Error;

/// Errors raised by the equilibrium analysis.
#[derive(Debug, Error)]
pub enum EquilibriumError {
    #[error("model must have exactly 3 species, got {0}")]
    WrongSpeciesCount(usize),
    #[error("model RHS contains monomials outside the reduced template: {0}")]
    ExtraMonomials(String),
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("root iteration failed to converge")]
    RootsDiverged,
    #[error("need at least 2 points with distinct abscissae")]
    DegenerateFit,
    #[error("cannot invert a fit with zero slope")]
    ZeroSlope,
}

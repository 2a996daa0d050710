//! Deterministic integration of reaction-system ODEs.
//!
//! Two integrators are provided: a fixed-step classic Runge–Kutta 4 and an
//! adaptive Dormand–Prince 5(4) embedded pair. States are clipped at zero
//! (mass-action dynamics preserve non-negativity; clipping only absorbs
//! round-off), with a diagnostic counter for clips beyond `CLIP_TOL`.

mod solver;

pub use solver::{integrate, OdeProblem, Solution, SolverConfig, CLIP_TOL};

use thiserror::Error;

use crate::learning::SeriesData;

/// Errors raised while setting up or running an integration.
#[derive(Debug, Error)]
pub enum OdeError {
    #[error("time span must satisfy t1 > t0, got [{0}, {1}]")]
    BadSpan(f64, f64),
    #[error("initial state must be non-negative and finite")]
    BadInitialState,
    #[error("initial state has {got} components, system has {expected} species")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("solver step/tolerance must be positive, got {0}")]
    BadConfig(f64),
    #[error("solution diverged (non-finite state) at t = {0}")]
    Diverged(f64),
    #[error("adaptive step underflow at t = {0} (step {1:.3e})")]
    StepUnderflow(f64, f64),
    #[error("time {0} is outside the solution span [{1}, {2}]")]
    OutsideSpan(f64, f64, f64),
    #[error("series and solution disagree on species count: {0} vs {1}")]
    SpeciesMismatch(usize, usize),
}

/// Per-species root-mean-square deviation between a solution and a series,
/// evaluated at the series' time points.
///
/// The solution must cover the series' grid; values between solver steps are
/// linearly interpolated (exact at matched steps).
pub fn compare(solution: &Solution, series: &SeriesData) -> Result<Vec<f64>, OdeError> {
    let n_species = solution.n_species();
    if series.n_species() != n_species {
        return Err(OdeError::SpeciesMismatch(series.n_species(), n_species));
    }
    let n = series.n_samples();
    let mut sums = vec![0.0_f64; n_species];
    for (t_idx, &t) in series.times.iter().enumerate() {
        let state = solution.sample(t)?;
        for (s, sum) in sums.iter_mut().enumerate() {
            let d = state[s] - series.values[s][t_idx];
            *sum += d * d;
        }
    }
    Ok(sums.into_iter().map(|s| (s / n as f64).sqrt()).collect())
}

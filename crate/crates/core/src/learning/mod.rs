//! Sparse reaction-model learning from time-series data.
//!
//! The inverse problem is linear in the rate constants: stacking the
//! estimated per-species derivatives gives a target vector, evaluating each
//! library reaction's ν-weighted unit propensity along the data gives a
//! design matrix column, and non-negative least squares selects a sparse
//! non-negative rate vector. Fits across scenarios are merged by taking the
//! union of supports and refitting the union's rates per scenario.

mod derivatives;
mod design;
mod model;
mod nnls;

pub use derivatives::{central_difference, estimate_derivatives, kalman_derivative};
pub use design::{build_design_matrix, DesignMatrix};
pub use model::{
    learn_model, refit, score_model, union_model, LearnedModel, RefitModel, UnionModel,
};
pub use nnls::{solve_nnls, solve_nnls_with, NnlsOptions, NnlsSolution};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abm::EnsembleSeries;

/// Errors raised by the learning stages.
#[derive(Debug, Error)]
pub enum LearnError {
    #[error("derivative estimation needs at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("time grid is not uniform (spacing varies by {0:.3e})")]
    NonUniformGrid(f64),
    #[error("stride must be at least 1")]
    BadStride,
    #[error("series has {got} species, expected {expected}")]
    SpeciesMismatch { expected: usize, got: usize },
    #[error("series length mismatch: {0}")]
    RaggedSeries(String),
    #[error("NNLS iteration cap of {cap} exceeded (best residual {residual:.6e})")]
    IterationCap { cap: usize, residual: f64, best: Vec<f64> },
    #[error("models must share one library to take a union")]
    MixedLibraries,
    #[error("at least one model is required")]
    NoModels,
    #[error("union support is empty")]
    EmptyUnion,
    #[error(transparent)]
    Reaction(#[from] crate::reactions::ReactionError),
    #[error(transparent)]
    Ode(#[from] crate::ode::OdeError),
}

/// Derivative estimator selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeMethod {
    /// Second-order central differences, one-sided second-order stencils at
    /// the ends.
    Central,
    /// Constant-acceleration Kalman filter with RTS smoothing; the velocity
    /// component is the derivative estimate.
    Kalman,
}

impl std::fmt::Display for DerivativeMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Central => write!(f, "central"),
            Self::Kalman => write!(f, "kalman"),
        }
    }
}

/// Knobs for a single learning run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearningConfig {
    /// Keep every `stride`-th sample (1 keeps all).
    pub stride: usize,
    pub derivative: DerivativeMethod,
    /// Process/measurement noise variance ratio of the Kalman smoother.
    pub kalman_noise_ratio: f64,
    /// Rates below `prune_threshold × max(K)` count as absent.
    pub prune_threshold: f64,
}

impl Default for LearningConfig {
    fn default() -> Self {
        Self {
            stride: 10,
            derivative: DerivativeMethod::Central,
            kalman_noise_ratio: 1e3,
            prune_threshold: 1e-6,
        }
    }
}

/// Per-species time series on a shared grid; the learning stages are
/// agnostic to where the data came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesData {
    pub times: Vec<f64>,
    /// `values[s][t]` is species `s` at time index `t`.
    pub values: Vec<Vec<f64>>,
}

impl SeriesData {
    pub fn n_species(&self) -> usize {
        self.values.len()
    }

    pub fn n_samples(&self) -> usize {
        self.times.len()
    }

    /// Uniform grid spacing; errors when the grid is not uniform.
    pub fn dt(&self) -> Result<f64, LearnError> {
        grid_spacing(&self.times)
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        for v in &self.values {
            if v.len() != self.times.len() {
                return Err(LearnError::RaggedSeries(format!(
                    "{} values against {} times",
                    v.len(),
                    self.times.len()
                )));
            }
        }
        Ok(())
    }

    /// Keeps samples `0, stride, 2·stride, …`, thinning the grid identically.
    pub fn subsample(&self, stride: usize) -> Result<SeriesData, LearnError> {
        if stride == 0 {
            return Err(LearnError::BadStride);
        }
        let pick = |xs: &[f64]| xs.iter().copied().step_by(stride).collect::<Vec<f64>>();
        Ok(SeriesData {
            times: pick(&self.times),
            values: self.values.iter().map(|v| pick(v)).collect(),
        })
    }

    /// State vector at the first sample.
    pub fn initial_state(&self) -> Vec<f64> {
        self.values.iter().map(|v| v[0]).collect()
    }
}

impl From<&EnsembleSeries> for SeriesData {
    fn from(series: &EnsembleSeries) -> Self {
        SeriesData {
            times: series.times.clone(),
            values: vec![series.cancer.clone(), series.healthy.clone(), series.immune.clone()],
        }
    }
}

pub(crate) fn grid_spacing(times: &[f64]) -> Result<f64, LearnError> {
    if times.len() < 2 {
        return Err(LearnError::TooFewSamples(times.len()));
    }
    let dt = times[1] - times[0];
    let mut worst = 0.0_f64;
    for w in times.windows(2) {
        worst = worst.max(((w[1] - w[0]) - dt).abs());
    }
    if worst > 1e-9 * dt.abs().max(1e-300) {
        return Err(LearnError::NonUniformGrid(worst));
    }
    Ok(dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(n: usize) -> SeriesData {
        let times: Vec<f64> = (0..n).map(|i| i as f64 * 0.01).collect();
        let values = vec![times.iter().map(|t| t * t).collect()];
        SeriesData { times, values }
    }

    #[test]
    fn subsample_keeps_every_stride_th() {
        let s = series(2001);
        assert_eq!(s.subsample(1).unwrap(), s);
        assert_eq!(s.subsample(10).unwrap().n_samples(), 201);
        assert_eq!(s.subsample(50).unwrap().n_samples(), 41);
        let sub = s.subsample(10).unwrap();
        assert_eq!(sub.times[1], s.times[10]);
        assert_eq!(sub.values[0][2], s.values[0][20]);
        assert!(s.subsample(0).is_err());
    }

    #[test]
    fn dt_checks_uniformity() {
        let s = series(5);
        assert!((s.dt().unwrap() - 0.01).abs() < 1e-15);
        let bad = SeriesData { times: vec![0.0, 0.01, 0.03], values: vec![vec![0.0; 3]] };
        assert!(matches!(bad.dt(), Err(LearnError::NonUniformGrid(_))));
    }
}

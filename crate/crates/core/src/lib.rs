//! Three-species lattice tumor simulation, sparse reaction-model learning,
//! and steady-state analysis of the learned surrogate.
//!
//! The crate is organised as a pipeline:
//!
//! 1. [`abm`] — stochastic agent-based tumor model on a 2-D lattice
//!    (cancer / healthy / immune cells plus ECM obstacles), producing
//!    ensemble-mean concentration trajectories.
//! 2. [`reactions`] — species, mass-action reactions, and constrained
//!    reaction-library generation.
//! 3. [`learning`] — derivative estimation, design-matrix assembly, and
//!    non-negative least squares to select a sparse reaction model from a
//!    library; union models over scenario fits and per-scenario refits.
//! 4. [`ode`] — integration of learned reaction systems for validation.
//! 5. [`equilibrium`] — reduction of the learned three-species system to a
//!    quartic in the cancer concentration, steady-state recovery, and the
//!    linear response of steady-state cancer density to the initial immune
//!    density.
//! 6. [`pipeline`] — reproducible batch orchestration with persisted
//!    artifacts and a run manifest.

pub mod abm;
pub mod equilibrium;
pub mod learning;
pub mod ode;
pub mod pipeline;
pub mod reactions;
pub mod seeds;

pub use abm::{AbmParams, EnsembleSeries, GridConfig, ScenarioConfig, TrajectoryRecord};
pub use learning::{
    DerivativeMethod, LearnedModel, LearningConfig, SeriesData, UnionModel,
};
pub use reactions::{
    GenerationRule, LibrarySpec, Reaction, ReactionSystem, SpeciesSet, StateVector,
};

//! Species, mass-action reactions, reaction systems, and reaction libraries.
//!
//! A [`ReactionSystem`] couples an ordered [`SpeciesSet`] with a list of
//! [`Reaction`]s (reactant/product multisets plus a non-negative rate) and
//! evaluates the mass-action right-hand side `y' = Σ_j ν_j a_j(y)`.
//! Libraries of candidate reactions are either curated presets or generated
//! from a constrained enumeration rule ([`LibrarySpec`]).

mod library;
mod presets;
mod reaction;
mod species;
mod system;

pub use library::{
    constrain_library, generate_library, reactant_multiset, GenerationRule, LibrarySpec,
};
pub use presets::{
    curated_preset, forbidden_immune_reactants, preset_ids, PRESET_CONSTRAINED_DEFAULT,
    PRESET_GENERATED_DEFAULT, PRESET_TWO_SPECIES_17, PRESET_UNION_12,
};
pub use reaction::Reaction;
pub use species::SpeciesSet;
pub use system::{ReactionSystem, StateVector};

use thiserror::Error;

/// Errors raised while constructing or evaluating reactions and systems.
#[derive(Debug, Error)]
pub enum ReactionError {
    #[error("species labels must be unique and non-empty, got {0:?}")]
    InvalidSpecies(Vec<String>),
    #[error("reaction spans {got} species but the system has {expected}")]
    SpeciesCountMismatch { expected: usize, got: usize },
    #[error("total reactant count {0} exceeds the bimolecular cap of 2")]
    OrderTooHigh(u32),
    #[error("rate must be finite and non-negative, got {0}")]
    InvalidRate(f64),
    #[error("reaction has zero net change (products equal reactants)")]
    ZeroStoichiometry,
    #[error("duplicate reaction: {0}")]
    DuplicateReaction(String),
    #[error("state vector has {got} components, system has {expected} species")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state vector entries must be finite and non-negative, got {0}")]
    NegativeConcentration(f64),
    #[error("unknown curated preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown species label `{0}`")]
    UnknownSpecies(String),
    #[error("rate vector has {got} entries, system has {expected} reactions")]
    RateCountMismatch { expected: usize, got: usize },
    #[error("reaction index {index} out of range for {len} reactions")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("generation rule is invalid: {0}")]
    InvalidRule(String),
}

use std::collections::BTreeMap;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Reaction, ReactionError, SpeciesSet};

/// Non-negative concentrations ordered like a [`SpeciesSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<f64>);

impl StateVector {
    pub fn new(values: Vec<f64>) -> Result<Self, ReactionError> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(ReactionError::NegativeConcentration(bad));
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl AsRef<[f64]> for StateVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// An ordered list of reactions over a shared species set.
///
/// Duplicate `(reactants, products)` pairs are rejected; reactions that are
/// distinct but collinear under mass action (for example `2C -> 0` and
/// `2C -> C` in the two-species library) are permitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemDto", into = "SystemDto")]
pub struct ReactionSystem {
    species: SpeciesSet,
    reactions: Vec<Reaction>,
}

impl ReactionSystem {
    pub fn new(species: SpeciesSet, reactions: Vec<Reaction>) -> Result<Self, ReactionError> {
        let mut seen: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
        for r in &reactions {
            if r.reactants().len() != species.len() {
                return Err(ReactionError::SpeciesCountMismatch {
                    expected: species.len(),
                    got: r.reactants().len(),
                });
            }
            if !seen.insert((r.reactants().to_vec(), r.products().to_vec())) {
                return Err(ReactionError::DuplicateReaction(r.label(&species)));
            }
        }
        Ok(Self { species, reactions })
    }

    /// A system with no reactions.
    pub fn empty(species: SpeciesSet) -> Self {
        Self { species, reactions: Vec::new() }
    }

    pub fn species(&self) -> &SpeciesSet {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn len(&self) -> usize {
        self.reactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reactions.is_empty()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.reactions.iter().map(Reaction::rate).collect()
    }

    /// Copy of the system with the given rate vector.
    pub fn with_rates(&self, rates: &[f64]) -> Result<Self, ReactionError> {
        if rates.len() != self.reactions.len() {
            return Err(ReactionError::RateCountMismatch {
                expected: self.reactions.len(),
                got: rates.len(),
            });
        }
        let mut out = self.clone();
        for (r, &k) in out.reactions.iter_mut().zip(rates) {
            r.set_rate(k)?;
        }
        Ok(out)
    }

    /// Sub-system keeping the reactions at `indices`, in the given order.
    pub fn subsystem(&self, indices: &[usize]) -> Result<Self, ReactionError> {
        let mut reactions = Vec::with_capacity(indices.len());
        for &i in indices {
            let r = self
                .reactions
                .get(i)
                .ok_or(ReactionError::IndexOutOfRange { index: i, len: self.reactions.len() })?;
            reactions.push(r.clone());
        }
        Self::new(self.species.clone(), reactions)
    }

    /// True when both systems share species labels and the same ordered list
    /// of `(reactants, products)` pairs, ignoring rates.
    pub fn structure_eq(&self, other: &Self) -> bool {
        self.species == other.species
            && self.reactions.len() == other.reactions.len()
            && self
                .reactions
                .iter()
                .zip(&other.reactions)
                .all(|(a, b)| a.reactants() == b.reactants() && a.products() == b.products())
    }

    /// Position of a reaction with the given `(reactants, products)` pair.
    pub fn position_of(&self, reactants: &[u32], products: &[u32]) -> Option<usize> {
        self.reactions
            .iter()
            .position(|r| r.reactants() == reactants && r.products() == products)
    }

    pub fn reaction_label(&self, index: usize) -> String {
        self.reactions[index].label(&self.species)
    }

    /// Mass-action right-hand side `Σ_j ν_j a_j(y)`.
    pub fn mass_action_rhs(&self, y: &[f64]) -> Result<Vec<f64>, ReactionError> {
        if y.len() != self.species.len() {
            return Err(ReactionError::DimensionMismatch {
                expected: self.species.len(),
                got: y.len(),
            });
        }
        let mut out = vec![0.0; y.len()];
        self.rhs_into(y, &mut out);
        Ok(out)
    }

    /// RHS evaluation into a caller-provided buffer (hot path for solvers).
    pub(crate) fn rhs_into(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.species.len());
        debug_assert_eq!(out.len(), self.species.len());
        out.fill(0.0);
        for r in &self.reactions {
            let a = r.propensity(y);
            if a == 0.0 {
                continue;
            }
            for (i, (&l, &p)) in r.reactants().iter().zip(r.products()).enumerate() {
                let nu = f64::from(p) - f64::from(l);
                if nu != 0.0 {
                    out[i] += nu * a;
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ReactionDto {
    reactants: BTreeMap<String, u32>,
    products: BTreeMap<String, u32>,
    rate: f64,
}

#[derive(Serialize, Deserialize)]
struct SystemDto {
    species: Vec<String>,
    reactions: Vec<ReactionDto>,
}

fn counts_to_map(counts: &[u32], species: &SpeciesSet) -> BTreeMap<String, u32> {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (species.label(i).to_string(), c))
        .collect()
}

fn map_to_counts(
    map: &BTreeMap<String, u32>,
    species: &SpeciesSet,
) -> Result<Vec<u32>, ReactionError> {
    let mut counts = vec![0_u32; species.len()];
    for (label, &c) in map {
        let idx = species
            .index_of(label)
            .ok_or_else(|| ReactionError::UnknownSpecies(label.clone()))?;
        counts[idx] = c;
    }
    Ok(counts)
}

impl From<ReactionSystem> for SystemDto {
    fn from(sys: ReactionSystem) -> Self {
        let reactions = sys
            .reactions
            .iter()
            .map(|r| ReactionDto {
                reactants: counts_to_map(r.reactants(), &sys.species),
                products: counts_to_map(r.products(), &sys.species),
                rate: r.rate(),
            })
            .collect();
        SystemDto { species: sys.species.names().to_vec(), reactions }
    }
}

impl TryFrom<SystemDto> for ReactionSystem {
    type Error = ReactionError;

    fn try_from(dto: SystemDto) -> Result<Self, Self::Error> {
        let species = SpeciesSet::new(dto.species)?;
        let mut reactions = Vec::with_capacity(dto.reactions.len());
        for r in &dto.reactions {
            reactions.push(Reaction::new(
                map_to_counts(&r.reactants, &species)?,
                map_to_counts(&r.products, &species)?,
                r.rate,
            )?);
        }
        Self::new(species, reactions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi() -> SpeciesSet {
        SpeciesSet::cancer_healthy_immune()
    }

    #[test]
    fn empty_system_has_zero_rhs() {
        let sys = ReactionSystem::empty(chi());
        assert_eq!(sys.mass_action_rhs(&[1.0, 2.0, 3.0]).unwrap(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn single_reaction_rhs() {
        // C + H -> 0 with k=2 at (1,3,0): both consumed at rate 6
        let r = Reaction::new(vec![1, 1, 0], vec![0, 0, 0], 2.0).unwrap();
        let sys = ReactionSystem::new(chi(), vec![r]).unwrap();
        assert_eq!(sys.mass_action_rhs(&[1.0, 3.0, 0.0]).unwrap(), vec![-6.0, -6.0, 0.0]);
    }

    #[test]
    fn rhs_rejects_dimension_mismatch() {
        let sys = ReactionSystem::empty(chi());
        assert!(matches!(
            sys.mass_action_rhs(&[1.0, 2.0]),
            Err(ReactionError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn duplicate_pairs_rejected_collinear_kept() {
        let a = Reaction::new(vec![2, 0], vec![0, 0], 0.0).unwrap(); // 2C -> 0
        let b = Reaction::new(vec![2, 0], vec![1, 0], 0.0).unwrap(); // 2C -> C (collinear, allowed)
        let dup = Reaction::new(vec![2, 0], vec![0, 0], 1.0).unwrap();
        let two = SpeciesSet::cancer_healthy();
        assert!(ReactionSystem::new(two.clone(), vec![a.clone(), b]).is_ok());
        assert!(matches!(
            ReactionSystem::new(two, vec![a, dup]),
            Err(ReactionError::DuplicateReaction(_))
        ));
    }

    #[test]
    fn json_round_trip_matches_declared_format() {
        let r = Reaction::new(vec![2, 0, 0], vec![1, 1, 0], 0.0).unwrap();
        let sys = ReactionSystem::new(chi(), vec![r]).unwrap();
        let json = serde_json::to_string(&sys).unwrap();
        assert!(json.contains(r#""species":["C","H","I"]"#));
        assert!(json.contains(r#""reactants":{"C":2}"#));
        assert!(json.contains(r#""products":{"C":1,"H":1}"#));
        let back: ReactionSystem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn state_vector_rejects_negatives() {
        assert!(StateVector::new(vec![0.0, 1.0]).is_ok());
        assert!(StateVector::new(vec![-0.1, 1.0]).is_err());
        assert!(StateVector::new(vec![f64::NAN]).is_err());
    }
}

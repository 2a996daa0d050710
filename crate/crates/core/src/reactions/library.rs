use serde::{Deserialize, Serialize};

use super::{curated_preset, Reaction, ReactionError, ReactionSystem, SpeciesSet};

/// Enumeration rule for generated reaction libraries.
///
/// The default rule admits unimolecular and bimolecular reactants, caps the
/// per-species net change at one and the total absolute change at two, and
/// excludes nothing. For three species it yields 27 unimolecular and 66
/// bimolecular reactions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationRule {
    /// Admissible total reactant counts.
    pub reactant_orders: Vec<u32>,
    /// Cap on `|ν_i|` for every species `i`.
    pub max_change_per_species: u32,
    /// Cap on `Σ_i |ν_i|`.
    pub max_total_change: u32,
    /// Reactant multisets (as per-species counts) to skip.
    pub forbidden_reactants: Vec<Vec<u32>>,
    /// Stoichiometric change vectors to skip.
    pub forbidden_stoich: Vec<Vec<i64>>,
}

impl Default for GenerationRule {
    fn default() -> Self {
        Self {
            reactant_orders: vec![1, 2],
            max_change_per_species: 1,
            max_total_change: 2,
            forbidden_reactants: Vec::new(),
            forbidden_stoich: Vec::new(),
        }
    }
}

/// A reaction library: either a curated preset or a generated enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum LibrarySpec {
    Curated { preset: String },
    Generated { species: SpeciesSet, rule: GenerationRule },
}

impl LibrarySpec {
    pub fn curated(preset: &str) -> Self {
        Self::Curated { preset: preset.to_string() }
    }

    pub fn generated_default(species: SpeciesSet) -> Self {
        Self::Generated { species, rule: GenerationRule::default() }
    }
}

/// Materialises a library. Curated presets are returned verbatim; generated
/// libraries enumerate every reaction satisfying the rule in canonical order
/// (reactant multiset ascending by order then species index, then ν
/// lexicographic), deduplicated, with all rates zero.
pub fn generate_library(spec: &LibrarySpec) -> Result<ReactionSystem, ReactionError> {
    match spec {
        LibrarySpec::Curated { preset } => curated_preset(preset),
        LibrarySpec::Generated { species, rule } => enumerate(species, rule),
    }
}

/// Removes every reaction whose reactant multiset appears in `forbidden`,
/// preserving the order of the survivors.
pub fn constrain_library(sys: &ReactionSystem, forbidden: &[Vec<u32>]) -> ReactionSystem {
    let kept: Vec<Reaction> = sys
        .reactions()
        .iter()
        .filter(|r| !forbidden.iter().any(|f| f.as_slice() == r.reactants()))
        .cloned()
        .collect();
    ReactionSystem::new(sys.species().clone(), kept)
        .expect("filtering a valid system keeps it valid")
}

/// Parses a reactant multiset from species labels, e.g. `["I", "I"]`.
pub fn reactant_multiset(
    species: &SpeciesSet,
    labels: &[&str],
) -> Result<Vec<u32>, ReactionError> {
    let mut counts = vec![0_u32; species.len()];
    for label in labels {
        let idx = species
            .index_of(label)
            .ok_or_else(|| ReactionError::UnknownSpecies((*label).to_string()))?;
        counts[idx] += 1;
    }
    Ok(counts)
}

fn enumerate(species: &SpeciesSet, rule: &GenerationRule) -> Result<ReactionSystem, ReactionError> {
    let n = species.len();
    if rule.reactant_orders.iter().any(|&o| o > 2) {
        return Err(ReactionError::InvalidRule(
            "reactant orders above 2 are not supported".into(),
        ));
    }
    if rule.forbidden_reactants.iter().any(|f| f.len() != n)
        || rule.forbidden_stoich.iter().any(|f| f.len() != n)
    {
        return Err(ReactionError::InvalidRule(
            "exclusion patterns must span the species set".into(),
        ));
    }
    let mut orders: Vec<u32> = rule.reactant_orders.clone();
    orders.sort_unstable();
    orders.dedup();

    let mut reactions = Vec::new();
    for order in orders {
        for reactants in multisets(n, order) {
            if rule.forbidden_reactants.iter().any(|f| *f == reactants) {
                continue;
            }
            for nu in change_vectors(&reactants, rule) {
                if rule.forbidden_stoich.iter().any(|f| *f == nu) {
                    continue;
                }
                let products: Vec<u32> = reactants
                    .iter()
                    .zip(&nu)
                    .map(|(&l, &d)| (i64::from(l) + d) as u32)
                    .collect();
                reactions.push(Reaction::new(reactants.clone(), products, 0.0)?);
            }
        }
    }
    ReactionSystem::new(species.clone(), reactions)
}

/// Multisets of `order` species indices as count vectors, in nondecreasing
/// index-tuple order: C, H, I, then 2C, C+H, C+I, 2H, H+I, 2I.
fn multisets(n_species: usize, order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    match order {
        0 => out.push(vec![0; n_species]),
        1 => {
            for i in 0..n_species {
                let mut c = vec![0; n_species];
                c[i] = 1;
                out.push(c);
            }
        }
        2 => {
            for i in 0..n_species {
                for j in i..n_species {
                    let mut c = vec![0; n_species];
                    c[i] += 1;
                    c[j] += 1;
                    out.push(c);
                }
            }
        }
        _ => unreachable!("orders validated by caller"),
    }
    out
}

/// All ν vectors for a reactant multiset, lexicographically ascending.
/// Component `i` ranges over `max(-l_i, -cap) ..= cap`; the zero vector and
/// vectors breaching the total-change cap are dropped.
fn change_vectors(reactants: &[u32], rule: &GenerationRule) -> Vec<Vec<i64>> {
    let cap = i64::from(rule.max_change_per_species);
    let total = i64::from(rule.max_total_change);
    let n = reactants.len();
    let lows: Vec<i64> = reactants.iter().map(|&l| (-i64::from(l)).max(-cap)).collect();
    let mut out = Vec::new();
    let mut current = lows.clone();
    loop {
        let sum_abs: i64 = current.iter().map(|d| d.abs()).sum();
        if sum_abs > 0 && sum_abs <= total {
            out.push(current.clone());
        }
        // odometer increment, rightmost component fastest, so the output is
        // ascending in lexicographic order
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if current[pos] < cap {
                current[pos] += 1;
                for (k, slot) in current.iter_mut().enumerate().skip(pos + 1) {
                    *slot = lows[k];
                }
                break;
            }
            current[pos] = lows[pos];
        }
    }
}

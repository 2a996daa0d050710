use super::{ReactionError, SpeciesSet};

/// A unimolecular or bimolecular reaction `l·S -> r·S` with rate constant `k`.
///
/// Reactants and products are multisets stored as per-species counts, ordered
/// like the owning system's [`SpeciesSet`]. The total reactant count is at
/// most two; the net change `ν = products − reactants` is never all zero.
///
/// Mass-action propensities follow the combinatorial convention: order 0
/// gives `k`, a unimolecular `X` gives `k·x`, a heterodimer `X+Y` gives
/// `k·x·y`, and a homodimer `2X` gives `k·x²/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    reactants: Vec<u32>,
    products: Vec<u32>,
    rate: f64,
}

impl Reaction {
    /// Builds a reaction from per-species reactant/product counts.
    pub fn new(reactants: Vec<u32>, products: Vec<u32>, rate: f64) -> Result<Self, ReactionError> {
        if reactants.len() != products.len() {
            return Err(ReactionError::SpeciesCountMismatch {
                expected: reactants.len(),
                got: products.len(),
            });
        }
        let order: u32 = reactants.iter().sum();
        if order > 2 {
            return Err(ReactionError::OrderTooHigh(order));
        }
        if !rate.is_finite() || rate < 0.0 {
            return Err(ReactionError::InvalidRate(rate));
        }
        if reactants == products {
            return Err(ReactionError::ZeroStoichiometry);
        }
        Ok(Self { reactants, products, rate })
    }

    /// Total reactant count (0, 1, or 2).
    pub fn order(&self) -> u32 {
        self.reactants.iter().sum()
    }

    pub fn reactants(&self) -> &[u32] {
        &self.reactants
    }

    pub fn products(&self) -> &[u32] {
        &self.products
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn set_rate(&mut self, rate: f64) -> Result<(), ReactionError> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(ReactionError::InvalidRate(rate));
        }
        self.rate = rate;
        Ok(())
    }

    pub fn with_rate(mut self, rate: f64) -> Result<Self, ReactionError> {
        self.set_rate(rate)?;
        Ok(self)
    }

    /// Stoichiometric change vector `ν_i = r_i − l_i`.
    pub fn stoich_vector(&self) -> Vec<i64> {
        self.reactants
            .iter()
            .zip(&self.products)
            .map(|(&l, &r)| i64::from(r) - i64::from(l))
            .collect()
    }

    /// Mass-action propensity `a(y)` at concentrations `y`.
    pub fn propensity(&self, y: &[f64]) -> f64 {
        self.rate * self.unit_propensity(y)
    }

    /// Propensity with the rate constant factored out, i.e. `a(y)/k`.
    ///
    /// This is the design-matrix entry for the reaction's column.
    pub fn unit_propensity(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.reactants.len());
        let mut first: Option<usize> = None;
        let mut second: Option<usize> = None;
        for (i, &l) in self.reactants.iter().enumerate() {
            match l {
                0 => {}
                1 => {
                    if first.is_none() {
                        first = Some(i);
                    } else {
                        second = Some(i);
                    }
                }
                2 => {
                    first = Some(i);
                    second = Some(i);
                }
                _ => unreachable!("order capped at construction"),
            }
        }
        match (first, second) {
            (None, None) => 1.0,
            (Some(i), None) => y[i],
            (Some(i), Some(j)) if i == j => 0.5 * y[i] * y[i],
            (Some(i), Some(j)) => y[i] * y[j],
            (None, Some(_)) => unreachable!(),
        }
    }

    /// Human-readable form such as `2C -> C + H` or `C + H -> 0`.
    pub fn label(&self, species: &SpeciesSet) -> String {
        fn side(counts: &[u32], species: &SpeciesSet) -> String {
            let parts: Vec<String> = counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| {
                    if c == 1 {
                        species.label(i).to_string()
                    } else {
                        format!("{c}{}", species.label(i))
                    }
                })
                .collect();
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            }
        }
        format!("{} -> {}", side(&self.reactants, species), side(&self.products, species))
    }
}

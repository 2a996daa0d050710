use super::library::{constrain_library, generate_library, reactant_multiset, LibrarySpec};
use super::{Reaction, ReactionError, ReactionSystem, SpeciesSet};

/// Two-species (C, H) library of 8 unimolecular and 9 bimolecular reactions,
/// k1..k17. Includes the collinear pair `2C -> 0` / `2C -> C`.
pub const PRESET_TWO_SPECIES_17: &str = "two_species_17";
/// Twelve-reaction three-species model, k0..k11, that every scenario fit is
/// refit against.
pub const PRESET_UNION_12: &str = "three_species_union_12";
/// Full generated three-species library under the default rule (93 reactions:
/// 27 unimolecular, 66 bimolecular).
pub const PRESET_GENERATED_DEFAULT: &str = "three_species_generated_default";
/// Generated library minus `I+I -> *` and `H+I -> *` reactants (71 reactions).
pub const PRESET_CONSTRAINED_DEFAULT: &str = "three_species_constrained_default";

/// All curated preset identifiers.
pub fn preset_ids() -> [&'static str; 4] {
    [
        PRESET_TWO_SPECIES_17,
        PRESET_UNION_12,
        PRESET_GENERATED_DEFAULT,
        PRESET_CONSTRAINED_DEFAULT,
    ]
}

/// Reactant multisets `{I,I}` and `{H,I}` over (C, H, I); immune cells only
/// interact with cancer cells.
pub fn forbidden_immune_reactants() -> Vec<Vec<u32>> {
    let chi = SpeciesSet::cancer_healthy_immune();
    vec![
        reactant_multiset(&chi, &["I", "I"]).expect("static labels"),
        reactant_multiset(&chi, &["H", "I"]).expect("static labels"),
    ]
}

/// Looks up a curated preset by identifier.
pub fn curated_preset(id: &str) -> Result<ReactionSystem, ReactionError> {
    match id {
        PRESET_TWO_SPECIES_17 => two_species_17(),
        PRESET_UNION_12 => three_species_union_12(),
        PRESET_GENERATED_DEFAULT => generate_library(&LibrarySpec::generated_default(
            SpeciesSet::cancer_healthy_immune(),
        )),
        PRESET_CONSTRAINED_DEFAULT => {
            let full = generate_library(&LibrarySpec::generated_default(
                SpeciesSet::cancer_healthy_immune(),
            ))?;
            Ok(constrain_library(&full, &forbidden_immune_reactants()))
        }
        other => Err(ReactionError::UnknownPreset(other.to_string())),
    }
}

fn build(
    species: SpeciesSet,
    pairs: &[(&[u32], &[u32])],
) -> Result<ReactionSystem, ReactionError> {
    let reactions: Result<Vec<Reaction>, ReactionError> = pairs
        .iter()
        .map(|(l, r)| Reaction::new(l.to_vec(), r.to_vec(), 0.0))
        .collect();
    ReactionSystem::new(species, reactions?)
}

fn two_species_17() -> Result<ReactionSystem, ReactionError> {
    build(
        SpeciesSet::cancer_healthy(),
        &[
            (&[1, 0], &[0, 0]), // k1:  C -> 0
            (&[0, 1], &[0, 0]), // k2:  H -> 0
            (&[1, 0], &[0, 1]), // k3:  C -> H
            (&[0, 1], &[1, 0]), // k4:  H -> C
            (&[1, 0], &[2, 0]), // k5:  C -> 2C
            (&[1, 0], &[1, 1]), // k6:  C -> C + H
            (&[0, 1], &[0, 2]), // k7:  H -> 2H
            (&[0, 1], &[1, 1]), // k8:  H -> C + H
            (&[2, 0], &[0, 0]), // k9:  2C -> 0
            (&[0, 2], &[0, 0]), // k10: 2H -> 0
            (&[2, 0], &[1, 0]), // k11: 2C -> C
            (&[2, 0], &[0, 1]), // k12: 2C -> H
            (&[0, 2], &[0, 1]), // k13: 2H -> H
            (&[0, 2], &[1, 0]), // k14: 2H -> C
            (&[1, 1], &[0, 0]), // k15: C + H -> 0
            (&[1, 1], &[1, 0]), // k16: C + H -> C
            (&[1, 1], &[0, 1]), // k17: C + H -> H
        ],
    )
}

fn three_species_union_12() -> Result<ReactionSystem, ReactionError> {
    build(
        SpeciesSet::cancer_healthy_immune(),
        &[
            (&[1, 0, 0], &[2, 0, 0]), // k0:  C -> 2C
            (&[0, 1, 0], &[0, 2, 0]), // k1:  H -> 2H
            (&[0, 0, 1], &[1, 0, 0]), // k2:  I -> C
            (&[0, 0, 1], &[1, 0, 1]), // k3:  I -> I + C
            (&[2, 0, 0], &[1, 0, 0]), // k4:  2C -> C
            (&[2, 0, 0], &[1, 1, 0]), // k5:  2C -> C + H
            (&[2, 0, 0], &[1, 0, 1]), // k6:  2C -> C + I
            (&[1, 1, 0], &[0, 2, 0]), // k7:  C + H -> 2H
            (&[1, 1, 0], &[1, 1, 1]), // k8:  C + H -> C + H + I
            (&[1, 1, 0], &[0, 0, 0]), // k9:  C + H -> 0
            (&[1, 0, 1], &[2, 0, 0]), // k10: C + I -> 2C
            (&[0, 2, 0], &[0, 1, 0]), // k11: 2H -> H
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_sizes() {
        assert_eq!(curated_preset(PRESET_TWO_SPECIES_17).unwrap().len(), 17);
        assert_eq!(curated_preset(PRESET_UNION_12).unwrap().len(), 12);
        assert_eq!(curated_preset(PRESET_GENERATED_DEFAULT).unwrap().len(), 93);
        assert_eq!(curated_preset(PRESET_CONSTRAINED_DEFAULT).unwrap().len(), 71);
    }

    #[test]
    fn unknown_preset_errors() {
        assert!(matches!(
            curated_preset("nope"),
            Err(ReactionError::UnknownPreset(_))
        ));
    }

    #[test]
    fn union_rhs_with_unit_rates() {
        // Hand evaluation of the twelve-reaction model with every k = 1 at
        // (c,h,i) = (1,1,1):
        //   c' = 1 + 2 − 3/2 − 2 + 1 = 0.5
        //   h' = 1 + 1/2 + 0 − 1/2  = 1.0
        //   i' = −1 + 1/2 + 1 − 1   = −0.5
        let sys = curated_preset(PRESET_UNION_12).unwrap();
        let sys = sys.with_rates(&vec![1.0; 12]).unwrap();
        let rhs = sys.mass_action_rhs(&[1.0, 1.0, 1.0]).unwrap();
        assert!((rhs[0] - 0.5).abs() < 1e-12);
        assert!((rhs[1] - 1.0).abs() < 1e-12);
        assert!((rhs[2] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_species_17_contains_the_collinear_pair() {
        let sys = curated_preset(PRESET_TWO_SPECIES_17).unwrap();
        assert!(sys.position_of(&[2, 0], &[0, 0]).is_some());
        assert!(sys.position_of(&[2, 0], &[1, 0]).is_some());
    }
}

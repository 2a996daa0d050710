use serde::{Deserialize, Serialize};

use super::ReactionError;

/// Ordered set of species labels.
///
/// The order is fixed at construction and defines the component layout of
/// every state vector, stoichiometric vector, and ODE built on the set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct SpeciesSet {
    names: Vec<String>,
}

impl SpeciesSet {
    /// Builds a species set from ordered labels. Labels must be unique and
    /// non-empty.
    pub fn new<I, S>(names: I) -> Result<Self, ReactionError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        if names.is_empty() || names.iter().any(|n| n.is_empty() || !seen.insert(n.clone())) {
            return Err(ReactionError::InvalidSpecies(names));
        }
        Ok(Self { names })
    }

    /// The two-species set `C, H` (cancer, healthy).
    pub fn cancer_healthy() -> Self {
        Self::new(["C", "H"]).expect("static labels")
    }

    /// The three-species set `C, H, I` (cancer, healthy, immune).
    pub fn cancer_healthy_immune() -> Self {
        Self::new(["C", "H", "I"]).expect("static labels")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, index: usize) -> &str {
        &self.names[index]
    }

    /// Index of a label, or `None` when absent.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.names.iter().position(|n| n == label)
    }
}

impl TryFrom<Vec<String>> for SpeciesSet {
    type Error = ReactionError;

    fn try_from(names: Vec<String>) -> Result<Self, Self::Error> {
        Self::new(names)
    }
}

impl From<SpeciesSet> for Vec<String> {
    fn from(set: SpeciesSet) -> Self {
        set.names
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_labels() {
        assert!(SpeciesSet::new(["C", "C"]).is_err());
        assert!(SpeciesSet::new(Vec::<String>::new()).is_err());
        assert!(SpeciesSet::new(["C", ""]).is_err());
    }

    #[test]
    fn index_lookup_follows_order() {
        let s = SpeciesSet::cancer_healthy_immune();
        assert_eq!(s.index_of("C"), Some(0));
        assert_eq!(s.index_of("H"), Some(1));
        assert_eq!(s.index_of("I"), Some(2));
        assert_eq!(s.index_of("X"), None);
        assert_eq!(s.label(2), "I");
    }
}

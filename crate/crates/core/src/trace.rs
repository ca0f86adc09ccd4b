//! World states, demonstrations and the sub-goal membership predicate.

use alloc::vec::Vec;

use crate::wordgen::Symbol;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("feature value {value} at position {index} is not finite")]
    NonFinite { index: usize, value: f64 },
    #[error("state has {found} features, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("demonstration has no states")]
    EmptyDemonstration,
    #[error("feature index {index} out of range for {len} features")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("feature subset is empty")]
    EmptySubset,
    #[error("feature subset indices must be strictly increasing")]
    UnsortedSubset,
    #[error("sub-goal radius {0} must be positive and finite")]
    BadRadius(f64),
    #[error("sub-goal center has {found} coordinates, subset has {expected}")]
    CenterDimension { expected: usize, found: usize },
}

/// One observation of the world: `None` marks an undetected feature.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    values: Vec<Option<f64>>,
}

impl WorldState {
    pub fn new(values: Vec<Option<f64>>) -> Result<Self, ModelError> {
        for (index, v) in values.iter().enumerate() {
            if let Some(value) = *v {
                if !value.is_finite() {
                    return Err(ModelError::NonFinite { index, value });
                }
            }
        }
        Ok(Self { values })
    }

    /// A state with every feature defined.
    pub fn defined(values: Vec<f64>) -> Result<Self, ModelError> {
        Self::new(values.into_iter().map(Some).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.values.get(index).copied().flatten()
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Demonstration {
    states: Vec<WorldState>,
}

impl Demonstration {
    pub fn new(states: Vec<WorldState>) -> Result<Self, ModelError> {
        let first = states.first().ok_or(ModelError::EmptyDemonstration)?;
        let expected = first.len();
        if let Some(bad) = states.iter().find(|s| s.len() != expected) {
            return Err(ModelError::DimensionMismatch { expected, found: bad.len() });
        }
        Ok(Self { states })
    }

    pub fn states(&self) -> &[WorldState] {
        &self.states
    }

    pub fn initial(&self) -> &WorldState {
        &self.states[0]
    }

    pub fn num_features(&self) -> usize {
        self.states[0].len()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// A set of demonstrations sharing one feature dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    num_features: usize,
    demos: Vec<Demonstration>,
}

impl Corpus {
    pub fn new(num_features: usize, demos: Vec<Demonstration>) -> Result<Self, ModelError> {
        if let Some(bad) = demos.iter().find(|d| d.num_features() != num_features) {
            return Err(ModelError::DimensionMismatch { expected: num_features, found: bad.num_features() });
        }
        Ok(Self { num_features, demos })
    }

    pub fn num_features(&self) -> usize {
        self.num_features
    }

    pub fn demos(&self) -> &[Demonstration] {
        &self.demos
    }

    pub fn len(&self) -> usize {
        self.demos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demos.is_empty()
    }

    pub fn total_states(&self) -> usize {
        self.demos.iter().map(Demonstration::len).sum()
    }
}

/// A candidate subspace: strictly increasing feature positions plus its
/// ordinal among the candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureSubset {
    id: usize,
    indices: Vec<usize>,
}

impl FeatureSubset {
    pub fn new(id: usize, indices: Vec<usize>) -> Result<Self, ModelError> {
        if indices.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::UnsortedSubset);
        }
        Ok(Self { id, indices })
    }

    /// The subset covering every feature.
    pub fn full(id: usize, num_features: usize) -> Result<Self, ModelError> {
        Self::new(id, (0..num_features).collect())
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn check(&self, num_features: usize) -> Result<(), ModelError> {
        match self.indices.last() {
            Some(&index) if index >= num_features => Err(ModelError::IndexOutOfRange { index, len: num_features }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialState {
    pub subset_id: usize,
    pub values: Vec<f64>,
}

/// Selects the subset's features from `state`, in subset order.
///
/// Returns `Ok(None)` when any selected feature is undefined.
pub fn project(subset: &FeatureSubset, state: &WorldState) -> Result<Option<PartialState>, ModelError> {
    subset.check(state.len())?;
    let values: Option<Vec<f64>> = subset.indices.iter().map(|&i| state.values[i]).collect();
    Ok(values.map(|values| PartialState { subset_id: subset.id, values }))
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// A closed ball in the subspace of `subset`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubGoal {
    pub symbol: Symbol,
    pub subset: FeatureSubset,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl SubGoal {
    pub fn new(symbol: Symbol, subset: FeatureSubset, center: Vec<f64>, radius: f64) -> Result<Self, ModelError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(ModelError::BadRadius(radius));
        }
        if center.len() != subset.dim() {
            return Err(ModelError::CenterDimension { expected: subset.dim(), found: center.len() });
        }
        if let Some((index, &value)) = center.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(ModelError::NonFinite { index, value });
        }
        Ok(Self { symbol, subset, center, radius })
    }

    /// Membership with the sub-goal's own radius.
    pub fn contains(&self, state: &WorldState) -> bool {
        self.contains_within(state, self.radius)
    }

    /// Membership with `radius` in place of the sub-goal's own.
    pub fn contains_within(&self, state: &WorldState, radius: f64) -> bool {
        match project(&self.subset, state) {
            Ok(Some(p)) => euclidean(&p.values, &self.center) <= radius,
            _ => false,
        }
    }
}

/// True iff the state's projection is defined and lies in the closed ball.
pub fn satisfies(goal: &SubGoal, state: &WorldState) -> bool {
    goal.contains(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn goal(center: Vec<f64>, indices: Vec<usize>, radius: f64) -> SubGoal {
        SubGoal::new(Symbol(0), FeatureSubset::new(0, indices).unwrap(), center, radius).unwrap()
    }

    #[test]
    fn project_selects_in_subset_order() {
        let s = WorldState::defined(vec![1.0, 5.0, 3.0]).unwrap();
        let sub = FeatureSubset::new(0, vec![0, 2]).unwrap();
        assert_eq!(project(&sub, &s).unwrap().unwrap().values, vec![1.0, 3.0]);
    }

    #[test]
    fn project_undefined_propagates() {
        let s = WorldState::new(vec![Some(1.0), None, Some(3.0)]).unwrap();
        let sub = FeatureSubset::new(0, vec![1]).unwrap();
        assert_eq!(project(&sub, &s).unwrap(), None);
        // unaffected subspaces still project
        let other = FeatureSubset::new(1, vec![0, 2]).unwrap();
        assert!(project(&other, &s).unwrap().is_some());
    }

    #[test]
    fn project_full_subset_is_identity() {
        let s = WorldState::defined(vec![0.5, -2.0, 7.25]).unwrap();
        let full = FeatureSubset::full(0, 3).unwrap();
        let p = project(&full, &s).unwrap().unwrap();
        assert_eq!(p.values, vec![0.5, -2.0, 7.25]);
        let again = WorldState::defined(p.values.clone()).unwrap();
        assert_eq!(project(&full, &again).unwrap().unwrap(), p);
    }

    #[test]
    fn project_out_of_range_is_error() {
        let s = WorldState::defined(vec![1.0, 2.0]).unwrap();
        let sub = FeatureSubset::new(0, vec![0, 2]).unwrap();
        assert_eq!(project(&sub, &s), Err(ModelError::IndexOutOfRange { index: 2, len: 2 }));
    }

    #[test]
    fn satisfies_closed_ball() {
        let g = goal(vec![0.0, 0.0], vec![0, 1], 1.0);
        let at = |x: f64, y: f64| WorldState::defined(vec![x, y]).unwrap();
        assert!(satisfies(&g, &at(0.0, 0.0)));
        assert!(satisfies(&g, &at(1.0, 0.0)));
        // sqrt(0.64 + 0.64) = 1.1314 > 1
        assert!(!satisfies(&g, &at(0.8, 0.8)));
    }

    #[test]
    fn satisfies_undefined_is_false() {
        let g = goal(vec![0.0], vec![1], 1.0);
        let s = WorldState::new(vec![Some(0.0), None]).unwrap();
        assert!(!satisfies(&g, &s));
    }

    #[test]
    fn rejects_nan_and_bad_subsets() {
        assert!(matches!(WorldState::defined(vec![f64::NAN]), Err(ModelError::NonFinite { .. })));
        assert!(WorldState::defined(vec![f64::INFINITY]).is_err());
        assert_eq!(FeatureSubset::new(0, vec![]), Err(ModelError::EmptySubset));
        assert_eq!(FeatureSubset::new(0, vec![2, 1]), Err(ModelError::UnsortedSubset));
        assert_eq!(FeatureSubset::new(0, vec![1, 1]), Err(ModelError::UnsortedSubset));
        let sub = FeatureSubset::new(0, vec![0]).unwrap();
        assert_eq!(SubGoal::new(Symbol(0), sub.clone(), vec![0.0], 0.0), Err(ModelError::BadRadius(0.0)));
        assert!(SubGoal::new(Symbol(0), sub, vec![0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn demonstration_and_corpus_dimensions() {
        assert_eq!(Demonstration::new(vec![]), Err(ModelError::EmptyDemonstration));
        let a = WorldState::defined(vec![1.0]).unwrap();
        let b = WorldState::defined(vec![1.0, 2.0]).unwrap();
        assert!(Demonstration::new(vec![a.clone(), b.clone()]).is_err());
        let d = Demonstration::new(vec![a]).unwrap();
        assert!(Corpus::new(2, vec![d.clone()]).is_err());
        assert_eq!(Corpus::new(1, vec![d]).unwrap().total_states(), 1);
    }
}

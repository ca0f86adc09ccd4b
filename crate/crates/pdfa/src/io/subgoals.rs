use pdfa_core::{FeatureBounds, FeatureSubset, SubGoal, SubGoalSet, Symbol};
use serde::{Deserialize, Serialize};

use super::Error;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    bounds: Bounds,
    #[serde(default, rename = "subgoal")]
    subgoals: Vec<Entry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Bounds {
    min: Vec<f64>,
    max: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct Entry {
    pub symbol: usize,
    pub subset_id: usize,
    pub subset: Vec<usize>,
    /// Raw units.
    pub center: Vec<f64>,
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<usize>,
}

impl Entry {
    pub(super) fn from_goal(goal: &SubGoal, members: Option<usize>) -> Self {
        Self {
            symbol: goal.symbol.0,
            subset_id: goal.subset.id(),
            subset: goal.subset.indices().to_vec(),
            center: goal.center.clone(),
            radius: goal.radius,
            members,
        }
    }

    pub(super) fn to_goal(&self) -> Result<SubGoal, Error> {
        let err = |e: pdfa_core::ModelError| Error::invalid(format!("sub-goal {}: {e}", self.symbol));
        let subset = FeatureSubset::new(self.subset_id, self.subset.clone()).map_err(err)?;
        SubGoal::new(Symbol(self.symbol), subset, self.center.clone(), self.radius).map_err(err)
    }
}

/// Sub-goal set as TOML: normalization bounds, then one table per sub-goal
/// with its symbol, subset, center, radius and member count.
pub fn format_subgoals(set: &SubGoalSet) -> String {
    let file = File {
        bounds: Bounds { min: set.bounds.min().to_vec(), max: set.bounds.max().to_vec() },
        subgoals: set.goals.iter().zip(&set.member_counts).map(|(g, &m)| Entry::from_goal(g, Some(m))).collect(),
    };
    toml::to_string(&file).expect("sub-goals serialize")
}

pub fn parse_subgoals(text: &str) -> Result<SubGoalSet, Error> {
    let file: File = toml::from_str(text)?;
    if file.bounds.min.len() != file.bounds.max.len() {
        return Err(Error::invalid("bounds.min and bounds.max differ in length"));
    }
    let n = file.bounds.min.len();
    let mut goals = Vec::new();
    let mut member_counts = Vec::new();
    for (i, e) in file.subgoals.iter().enumerate() {
        if e.symbol != i {
            return Err(Error::invalid(format!("sub-goal {i} has symbol {}", e.symbol)));
        }
        let g = e.to_goal()?;
        g.subset.check(n).map_err(|err| Error::invalid(format!("sub-goal {i}: {err}")))?;
        goals.push(g);
        member_counts.push(e.members.unwrap_or(0));
    }
    Ok(SubGoalSet { goals, member_counts, bounds: FeatureBounds::new(file.bounds.min, file.bounds.max) })
}

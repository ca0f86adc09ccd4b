//! Sub-goal discovery: cluster partial states per candidate subspace and keep
//! the dense regions no demonstration starts in.
//!
//! Clustering runs on min-max normalized features so that one `eps` applies
//! across mixed units. Centers and radii are reported in raw units.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dbscan::{dbscan, DbscanParams, Label};
use crate::trace::{euclidean, project, Corpus, FeatureSubset, ModelError, SubGoal, WorldState};
use crate::wordgen::Symbol;

/// Per-feature minimum and maximum over a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureBounds {
    min: Vec<f64>,
    max: Vec<f64>,
}

impl FeatureBounds {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Self {
        assert_eq!(min.len(), max.len(), "bounds length mismatch");
        Self { min, max }
    }

    /// Features that are never defined get the degenerate range `[0, 0]`.
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let n = corpus.num_features();
        let mut min = alloc::vec![f64::INFINITY; n];
        let mut max = alloc::vec![f64::NEG_INFINITY; n];
        for state in corpus.demos().iter().flat_map(|d| d.states()) {
            for (i, v) in state.values().iter().enumerate() {
                if let Some(v) = *v {
                    min[i] = min[i].min(v);
                    max[i] = max[i].max(v);
                }
            }
        }
        for i in 0..n {
            if min[i] > max[i] {
                min[i] = 0.0;
                max[i] = 0.0;
            }
        }
        Self { min, max }
    }

    pub fn min(&self) -> &[f64] {
        &self.min
    }

    pub fn max(&self) -> &[f64] {
        &self.max
    }

    pub fn span(&self, feature: usize) -> f64 {
        self.max[feature] - self.min[feature]
    }

    /// Maps a raw value into `[0, 1]`; constant features map to 0.
    pub fn normalize(&self, feature: usize, value: f64) -> f64 {
        let span = self.span(feature);
        if span > 0.0 {
            (value - self.min[feature]) / span
        } else {
            0.0
        }
    }
}

/// Partial states of every demonstrated state projected onto one subset.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialDataset {
    pub subset: FeatureSubset,
    pub points: Vec<Vec<f64>>,
    /// `(demo_index, time_index)` of each point.
    pub provenance: Vec<(usize, usize)>,
}

impl PartialDataset {
    pub fn subset_id(&self) -> usize {
        self.subset.id()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One dataset per candidate subset. States whose projection is undefined
/// are left out.
pub fn build_partial_datasets(
    corpus: &Corpus,
    candidates: &[FeatureSubset],
) -> Result<Vec<PartialDataset>, ModelError> {
    candidates
        .iter()
        .map(|subset| {
            subset.check(corpus.num_features())?;
            let mut points = Vec::new();
            let mut provenance = Vec::new();
            for (d, demo) in corpus.demos().iter().enumerate() {
                for (t, state) in demo.states().iter().enumerate() {
                    if let Some(p) = project(subset, state)? {
                        points.push(p.values);
                        provenance.push((d, t));
                    }
                }
            }
            Ok(PartialDataset { subset: subset.clone(), points, provenance })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusPolicy {
    /// Every sub-goal gets the same radius, in raw units.
    Fixed(f64),
    /// Largest distance from the center to a member, floored at `eps`
    /// converted to raw units.
    MaxMember,
}

impl RadiusPolicy {
    pub const DEFAULT_RADIUS: f64 = 0.03;
}

impl Default for RadiusPolicy {
    fn default() -> Self {
        RadiusPolicy::Fixed(Self::DEFAULT_RADIUS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgoalConfig {
    pub dbscan: DbscanParams,
    pub radius: RadiusPolicy,
}

impl SubgoalConfig {
    pub fn for_corpus(corpus: &Corpus) -> Self {
        Self { dbscan: DbscanParams::for_corpus(corpus.len()), radius: RadiusPolicy::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub subset: FeatureSubset,
    /// Indices into the source dataset.
    pub members: Vec<usize>,
    /// Member mean, raw units.
    pub center: Vec<f64>,
    /// Largest center-to-member distance.
    pub spread: f64,
    /// Lower bound on the radius under [`RadiusPolicy::MaxMember`].
    pub floor: f64,
    pub radius: f64,
}

impl Cluster {
    /// Builds a cluster from `members`, indices into `points`. Panics on an
    /// empty member list.
    pub fn from_members(
        subset: FeatureSubset,
        members: Vec<usize>,
        points: &[Vec<f64>],
        floor: f64,
        policy: RadiusPolicy,
    ) -> Self {
        assert!(!members.is_empty(), "cluster without members");
        let dim = subset.dim();
        let mut center = alloc::vec![0.0; dim];
        for &m in &members {
            for (c, v) in center.iter_mut().zip(&points[m]) {
                *c += v;
            }
        }
        let count = members.len() as f64;
        center.iter_mut().for_each(|c| *c /= count);
        let spread = members.iter().map(|&m| euclidean(&center, &points[m])).fold(0.0, f64::max);
        let mut cluster = Self { subset, members, center, spread, floor, radius: 0.0 };
        cluster.radius = cluster.radius_under(policy);
        cluster
    }

    pub fn radius_under(&self, policy: RadiusPolicy) -> f64 {
        match policy {
            RadiusPolicy::Fixed(r) => r,
            RadiusPolicy::MaxMember => self.spread.max(self.floor),
        }
    }

    /// Closed-ball membership of a full state.
    pub fn contains(&self, state: &WorldState) -> bool {
        match project(&self.subset, state) {
            Ok(Some(p)) => euclidean(&p.values, &self.center) <= self.radius,
            _ => false,
        }
    }
}

/// Runs DBSCAN on one dataset in normalized units and returns its clusters
/// in cluster-id order.
pub fn cluster_subspace(dataset: &PartialDataset, bounds: &FeatureBounds, config: &SubgoalConfig) -> Vec<Cluster> {
    let indices = dataset.subset.indices();
    let normalized: Vec<Vec<f64>> =
        dataset.points.iter().map(|p| p.iter().zip(indices).map(|(&v, &f)| bounds.normalize(f, v)).collect()).collect();
    let labels = dbscan(&normalized, config.dbscan);

    let count = labels.iter().filter_map(|l| l.cluster()).max().map_or(0, |c| c + 1);
    let mut groups: Vec<Vec<usize>> = alloc::vec![Vec::new(); count];
    for (i, label) in labels.iter().enumerate() {
        if let Label::Cluster(c) = label {
            groups[*c].push(i);
        }
    }

    let max_span = indices.iter().map(|&f| bounds.span(f)).fold(0.0, f64::max);
    let eps = config.dbscan.eps();
    let floor = if max_span > 0.0 { eps * max_span } else { eps };
    groups
        .into_iter()
        .map(|members| Cluster::from_members(dataset.subset.clone(), members, &dataset.points, floor, config.radius))
        .collect()
}

/// Drops every cluster whose ball holds some demonstration's first state.
pub fn filter_initial(clusters: Vec<Cluster>, corpus: &Corpus) -> Vec<Cluster> {
    clusters.into_iter().filter(|c| !corpus.demos().iter().any(|d| c.contains(d.initial()))).collect()
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// The discovered sub-goals; `goals[i].symbol == Symbol(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubGoalSet {
    pub goals: Vec<SubGoal>,
    /// Cluster size behind each sub-goal.
    pub member_counts: Vec<usize>,
    /// Normalization used while clustering.
    pub bounds: FeatureBounds,
}

impl SubGoalSet {
    pub fn len(&self) -> usize {
        self.goals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }
}

/// Assigns symbols ordered by subset id, then lexicographic center.
pub fn clusters_to_subgoals(
    clusters: &[Cluster],
    policy: RadiusPolicy,
    bounds: FeatureBounds,
) -> Result<SubGoalSet, ModelError> {
    let mut order: Vec<&Cluster> = clusters.iter().collect();
    order.sort_by(|a, b| a.subset.id().cmp(&b.subset.id()).then_with(|| lexicographic(&a.center, &b.center)));
    let mut goals = Vec::with_capacity(order.len());
    let mut member_counts = Vec::with_capacity(order.len());
    for (i, c) in order.into_iter().enumerate() {
        goals.push(SubGoal::new(Symbol(i), c.subset.clone(), c.center.clone(), c.radius_under(policy))?);
        member_counts.push(c.members.len());
    }
    Ok(SubGoalSet { goals, member_counts, bounds })
}

/// Full sub-goal discovery, one subspace after another.
pub fn infer_subgoals(
    corpus: &Corpus,
    candidates: &[FeatureSubset],
    config: &SubgoalConfig,
) -> Result<SubGoalSet, ModelError> {
    let bounds = FeatureBounds::from_corpus(corpus);
    let datasets = build_partial_datasets(corpus, candidates)?;
    let clusters: Vec<Cluster> = datasets.iter().flat_map(|ds| cluster_subspace(ds, &bounds, config)).collect();
    let kept = filter_initial(clusters, corpus);
    clusters_to_subgoals(&kept, config.radius, bounds)
}

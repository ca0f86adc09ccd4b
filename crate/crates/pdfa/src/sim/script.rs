use std::collections::BTreeSet;
use std::path::Path;

use pdfa_core::{Corpus, DbscanParams, FeatureSubset, SubGoal, SubgoalConfig, Symbol};
use serde::{Deserialize, Serialize};

use super::world::{BlockWorld, Position, Schedule, Window, FEATURES_PER_OBJECT};
use crate::io::{self, DbscanSection, RunConfig};

/// Linear extensions beyond this many are refused.
pub const EXTENSION_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScriptError {
    #[error("invalid task script: {0}")]
    Invalid(String),
    #[error("the constraints admit more than {EXTENSION_CAP} orderings")]
    TooManyExtensions,
    #[error("every ordering has weight zero")]
    NoWeight,
    #[error("enumeration needs integer weights, ordering {order:?} has {weight}")]
    FractionalWeight { order: Vec<usize>, weight: f64 },
}

fn invalid(msg: impl Into<String>) -> ScriptError {
    ScriptError::Invalid(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    pub name: String,
    pub start: Position,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub object: usize,
    pub position: Position,
    #[serde(default = "default_radius")]
    pub radius: f64,
}

fn default_radius() -> f64 {
    pdfa_core::RadiusPolicy::DEFAULT_RADIUS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub order: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Noise {
    /// Standard deviation of the per-step jitter on every coordinate.
    pub sigma: f64,
    /// Probability that an object goes undetected in a given step.
    pub dropout: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Motion {
    /// Distance covered per step.
    pub step: f64,
    /// Steps spent inside each target ball, arrival included.
    pub dwell: usize,
    /// Resting steps before the first move.
    pub settle: usize,
    /// Box the intermediate via point is drawn from.
    pub via_low: Position,
    pub via_high: Position,
    /// Minimum distance, in radii, kept from targets still to come.
    pub clearance: f64,
}

impl Default for Motion {
    fn default() -> Self {
        Self { step: 0.1, dwell: 3, settle: 3, via_low: [-0.5, -0.5, 0.3], via_high: [0.5, 0.5, 0.5], clearance: 2.0 }
    }
}

fn one() -> f64 {
    1.0
}

/// A manipulation task: objects, the target ball each sub-goal puts an
/// object into, ordering constraints between targets, preferences over
/// the admissible orderings, sensor noise and kinematics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskScript {
    pub objects: Vec<ObjectSpec>,
    pub targets: Vec<TargetSpec>,
    /// Pairs `[a, b]`: target `a` is reached before target `b`.
    #[serde(default)]
    pub constraints: Vec<[usize; 2]>,
    /// Weight of every ordering not listed in `weights`.
    #[serde(default = "one")]
    pub default_weight: f64,
    #[serde(default)]
    pub weights: Vec<WeightSpec>,
    #[serde(default)]
    pub noise: Noise,
    #[serde(default)]
    pub motion: Motion,
    /// Candidate feature subsets; one x, y, z subset per object if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<Vec<usize>>>,
    /// DBSCAN density threshold as points per demonstration, for tasks
    /// whose transit motion is denser than the default allows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_pts_per_demo: Option<f64>,
    #[serde(default)]
    pub schedule: Vec<Window>,
}

impl TaskScript {
    pub fn parse(text: &str) -> Result<Self, io::Error> {
        let script: TaskScript = toml::from_str(text)?;
        script.validate().map_err(|e| io::Error::invalid(e.to_string()))?;
        Ok(script)
    }

    pub fn load(path: &Path) -> Result<Self, io::Error> {
        io::load_with(path, Self::parse)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("script serializes")
    }

    pub fn num_features(&self) -> usize {
        self.objects.len() * FEATURES_PER_OBJECT
    }

    pub fn validate(&self) -> Result<(), ScriptError> {
        if self.objects.is_empty() {
            return Err(invalid("no objects"));
        }
        let finite = |p: &Position| p.iter().all(|v| v.is_finite());
        if !self.objects.iter().all(|o| finite(&o.start)) {
            return Err(invalid("object start positions must be finite"));
        }
        for (i, t) in self.targets.iter().enumerate() {
            if t.object >= self.objects.len() {
                return Err(invalid(format!("target {i} names unknown object {}", t.object)));
            }
            if !finite(&t.position) || !(t.radius.is_finite() && t.radius > 0.0) {
                return Err(invalid(format!("target {i} needs a finite position and positive radius")));
            }
        }
        if self.targets.len() > pdfa_core::SymbolSet::CAPACITY {
            return Err(invalid("more than 64 targets"));
        }
        for &[a, b] in &self.constraints {
            if a >= self.targets.len() || b >= self.targets.len() || a == b {
                return Err(invalid(format!("bad constraint [{a}, {b}]")));
            }
        }
        if !(self.default_weight.is_finite() && self.default_weight >= 0.0) {
            return Err(invalid("default_weight must be finite and nonnegative"));
        }
        let n = &self.noise;
        if !(n.sigma.is_finite() && n.sigma >= 0.0 && (0.0..1.0).contains(&n.dropout)) {
            return Err(invalid("noise needs sigma >= 0 and dropout in [0, 1)"));
        }
        let m = &self.motion;
        if !(m.step.is_finite() && m.step > 0.0 && m.dwell >= 1 && m.clearance >= 0.0)
            || !(0..3).all(|k| m.via_low[k].is_finite() && m.via_low[k] <= m.via_high[k] && m.via_high[k].is_finite())
        {
            return Err(invalid("motion needs step > 0, dwell >= 1 and an ordered via box"));
        }
        if self.min_pts_per_demo.is_some_and(|k| !(k.is_finite() && k > 0.0)) {
            return Err(invalid("min_pts_per_demo must be positive"));
        }
        if let Some(cands) = &self.candidates {
            for (id, c) in cands.iter().enumerate() {
                FeatureSubset::new(id, c.clone())
                    .and_then(|s| s.check(self.num_features()))
                    .map_err(|e| invalid(format!("candidate {id}: {e}")))?;
            }
        }
        for w in &self.schedule {
            if w.from > w.to || w.absent.iter().any(|&o| o >= self.objects.len()) {
                return Err(invalid(format!("bad schedule window {}..{}", w.from, w.to)));
            }
        }
        // a cycle would otherwise surface as "no ordering has weight"
        if !self.acyclic() {
            return Err(invalid("constraints contain a cycle"));
        }
        let exts: BTreeSet<Vec<usize>> = self.extensions()?.into_iter().collect();
        for w in &self.weights {
            if !exts.contains(&w.order) {
                return Err(invalid(format!("weighted order {:?} violates the constraints", w.order)));
            }
            if !(w.weight.is_finite() && w.weight >= 0.0) {
                return Err(invalid(format!("order {:?} has a negative weight", w.order)));
            }
        }
        self.weighted_extensions().map(|_| ())
    }

    fn acyclic(&self) -> bool {
        let n = self.targets.len();
        let mut indegree = vec![0; n];
        for &[_, b] in &self.constraints {
            indegree[b] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(a) = ready.pop() {
            seen += 1;
            for &[x, b] in &self.constraints {
                if x == a {
                    indegree[b] -= 1;
                    if indegree[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        seen == n
    }

    /// Every ordering of the targets compatible with the constraints, in
    /// lexicographic order.
    pub fn extensions(&self) -> Result<Vec<Vec<usize>>, ScriptError> {
        let n = self.targets.len();
        let mut before = vec![0u64; n];
        for &[a, b] in &self.constraints {
            before[b] |= 1 << a;
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(n);
        fn walk(
            n: usize,
            before: &[u64],
            done: u64,
            prefix: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) -> Result<(), ScriptError> {
            if prefix.len() == n {
                if out.len() == EXTENSION_CAP {
                    return Err(ScriptError::TooManyExtensions);
                }
                out.push(prefix.clone());
                return Ok(());
            }
            for t in 0..n {
                if done & (1 << t) == 0 && before[t] & !done == 0 {
                    prefix.push(t);
                    walk(n, before, done | (1 << t), prefix, out)?;
                    prefix.pop();
                }
            }
            Ok(())
        }
        walk(n, &before, 0, &mut prefix, &mut out)?;
        Ok(out)
    }

    /// Orderings with positive weight and their weights.
    pub fn weighted_extensions(&self) -> Result<Vec<(Vec<usize>, f64)>, ScriptError> {
        let out: Vec<(Vec<usize>, f64)> = self
            .extensions()?
            .into_iter()
            .map(|e| {
                let w = self.weights.iter().find(|w| w.order == e).map_or(self.default_weight, |w| w.weight);
                (e, w)
            })
            .filter(|(_, w)| *w > 0.0)
            .collect();
        if out.is_empty() {
            return Err(ScriptError::NoWeight);
        }
        Ok(out)
    }

    pub fn candidates(&self) -> Vec<FeatureSubset> {
        match &self.candidates {
            Some(c) => {
                c.iter().enumerate().map(|(id, idx)| FeatureSubset::new(id, idx.clone()).expect("validated")).collect()
            }
            None => (0..self.objects.len()).map(BlockWorld::object_subset).collect(),
        }
    }

    /// The subspace a target of `object` is expressed in: the first
    /// candidate lying entirely within the object's features.
    pub fn subset_for(&self, object: usize) -> FeatureSubset {
        let own = BlockWorld::object_subset(object);
        self.candidates().into_iter().find(|c| c.indices().iter().all(|f| own.indices().contains(f))).unwrap_or(own)
    }

    /// The scripted sub-goals, `Symbol(i)` for target `i`.
    pub fn ground_truth(&self) -> Vec<SubGoal> {
        self.targets
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let subset = self.subset_for(t.object);
                let center = project_position(&subset, &t.position);
                SubGoal::new(Symbol(i), subset, center, t.radius).expect("validated")
            })
            .collect()
    }

    pub fn initial_world(&self) -> BlockWorld {
        BlockWorld::new(self.objects.iter().map(|o| Some(o.start)).collect())
    }

    pub fn availability(&self) -> Schedule {
        Schedule::new(self.schedule.clone())
    }

    fn min_pts(&self, demos: usize) -> Option<usize> {
        self.min_pts_per_demo.map(|k| ((k * demos as f64).ceil() as usize).max(2))
    }

    /// Clustering settings for a corpus of this task.
    pub fn subgoal_config(&self, corpus: &Corpus) -> SubgoalConfig {
        let mut config = SubgoalConfig::for_corpus(corpus);
        if let Some(m) = self.min_pts(corpus.len()) {
            config.dbscan = DbscanParams::new(config.dbscan.eps(), m).expect("positive");
        }
        config
    }

    /// Sidecar for a generated file of `demos` demonstrations.
    pub fn run_config(&self, demos: usize, seed: Option<u64>) -> RunConfig {
        let features = self.objects.iter().flat_map(|o| ["x", "y", "z"].map(|a| format!("{}.{a}", o.name))).collect();
        RunConfig {
            features,
            candidates: self.candidates().iter().map(|s| s.indices().to_vec()).collect(),
            seed,
            dbscan: DbscanSection { eps: None, min_pts: self.min_pts(demos) },
            ..RunConfig::default()
        }
    }
}

fn project_position(subset: &FeatureSubset, p: &Position) -> Vec<f64> {
    subset.indices().iter().map(|f| p[f % FEATURES_PER_OBJECT]).collect()
}

/// Pairs each learned sub-goal with the scripted target it stands for: the
/// one on the same object whose position lies within the target radius of
/// the learned center. `None` unless this is a bijection.
pub fn match_targets(script: &TaskScript, learned: &[SubGoal]) -> Option<Vec<usize>> {
    if learned.len() != script.targets.len() {
        return None;
    }
    let mut taken = vec![false; script.targets.len()];
    let mut out = Vec::with_capacity(learned.len());
    for g in learned {
        let hit = script.targets.iter().enumerate().find(|(i, t)| {
            !taken[*i]
                && g.subset.indices() == script.subset_for(t.object).indices()
                && pdfa_core::euclidean(&g.center, &project_position(&g.subset, &t.position)) <= t.radius
        });
        let (i, _) = hit?;
        taken[i] = true;
        out.push(i);
    }
    Some(out)
}

//! Density-based clustering (DBSCAN) with a Euclidean metric.
//!
//! A point is *core* when at least `min_pts` points, itself included, lie
//! within distance `eps` (closed). Clusters are the connected components of
//! core points under the `eps` relation plus the non-core points adjacent to
//! them. Points are visited in input order, so cluster ids follow the order
//! of each component's lowest-index core point, and a border point adjacent
//! to several components goes to the one with the lowest id.
//!
//! Neighborhood queries are brute force, `O(n^2)` distance evaluations.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::trace::euclidean;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Noise,
    Cluster(usize),
}

impl Label {
    pub fn cluster(self) -> Option<usize> {
        match self {
            Label::Cluster(c) => Some(c),
            Label::Noise => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbscanParams {
    eps: f64,
    min_pts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("eps must be positive and finite, got {0}")]
    Eps(f64),
    #[error("min_pts must be at least 1")]
    MinPts,
}

impl DbscanParams {
    pub const DEFAULT_EPS: f64 = 0.05;

    pub fn new(eps: f64, min_pts: usize) -> Result<Self, ParamError> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(ParamError::Eps(eps));
        }
        if min_pts == 0 {
            return Err(ParamError::MinPts);
        }
        Ok(Self { eps, min_pts })
    }

    /// Default `min_pts` for a corpus of `num_demos` demonstrations: a region
    /// must be visited by roughly half of them.
    pub fn default_min_pts(num_demos: usize) -> usize {
        core::cmp::max(2, num_demos.div_ceil(2))
    }

    pub fn for_corpus(num_demos: usize) -> Self {
        Self { eps: Self::DEFAULT_EPS, min_pts: Self::default_min_pts(num_demos) }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn min_pts(&self) -> usize {
        self.min_pts
    }
}

fn region<P: AsRef<[f64]>>(points: &[P], i: usize, eps: f64) -> Vec<usize> {
    let p = points[i].as_ref();
    points.iter().enumerate().filter(|(_, q)| euclidean(p, q.as_ref()) <= eps).map(|(j, _)| j).collect()
}

/// Labels every point with its cluster id or [`Label::Noise`].
pub fn dbscan<P: AsRef<[f64]>>(points: &[P], params: DbscanParams) -> Vec<Label> {
    let mut labels: Vec<Option<Label>> = vec![None; points.len()];
    let mut next_cluster = 0;
    let mut queue = VecDeque::new();

    for i in 0..points.len() {
        if labels[i].is_some() {
            continue;
        }
        let seeds = region(points, i, params.eps);
        if seeds.len() < params.min_pts {
            labels[i] = Some(Label::Noise);
            continue;
        }
        let cluster = Label::Cluster(next_cluster);
        next_cluster += 1;
        labels[i] = Some(cluster);
        queue.extend(seeds);

        while let Some(j) = queue.pop_front() {
            match labels[j] {
                // noise is never core, so it only becomes a border point
                Some(Label::Noise) => labels[j] = Some(cluster),
                Some(Label::Cluster(_)) => {}
                None => {
                    labels[j] = Some(cluster);
                    let neighbors = region(points, j, params.eps);
                    if neighbors.len() >= params.min_pts {
                        queue.extend(neighbors);
                    }
                }
            }
        }
    }

    labels.into_iter().map(|l| l.unwrap_or(Label::Noise)).collect()
}

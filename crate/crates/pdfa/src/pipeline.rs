//! The full learning pipeline with sub-spaces clustered in parallel.

use pdfa_core::{
    build_partial_datasets, cluster_subspace, clusters_to_subgoals, corpus_to_words, filter_initial, Corpus,
    FeatureBounds, FeatureSubset, InferenceError, ModelError, Pdfa, SubGoalSet, SubgoalConfig, Word,
};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
}

/// Same result as [`pdfa_core::infer_subgoals`], one thread per subspace.
pub fn infer_subgoals(
    corpus: &Corpus,
    candidates: &[FeatureSubset],
    config: &SubgoalConfig,
) -> Result<SubGoalSet, ModelError> {
    let bounds = FeatureBounds::from_corpus(corpus);
    let datasets = build_partial_datasets(corpus, candidates)?;
    let clusters: Vec<_> = datasets
        .par_iter()
        .map(|ds| filter_initial(cluster_subspace(ds, &bounds, config), corpus))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    clusters_to_subgoals(&clusters, config.radius, bounds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Learned {
    pub subgoals: SubGoalSet,
    pub words: Vec<Word>,
    pub pdfa: Pdfa,
}

/// Demonstrations to sub-goals, words and automaton.
pub fn learn(corpus: &Corpus, candidates: &[FeatureSubset], config: &SubgoalConfig) -> Result<Learned, PipelineError> {
    let subgoals = infer_subgoals(corpus, candidates, config)?;
    let words = corpus_to_words(corpus, &subgoals.goals, None);
    let pdfa = Pdfa::learn(subgoals.len(), &words)?;
    Ok(Learned { subgoals, words, pdfa })
}

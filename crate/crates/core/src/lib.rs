//! Learning probabilistic task automata from positive demonstrations.
//!
//! The pipeline has four stages, each in its own module:
//!
//! 1. [`subgoal`] projects every demonstrated state onto candidate feature
//!    subspaces, clusters the partial states with [`dbscan`] and keeps the
//!    dense regions that do not contain an initial state. Each surviving
//!    cluster becomes a [`SubGoal`]: a closed ball in its subspace.
//! 2. [`wordgen`] turns each demonstration into a [`Word`] by recording the
//!    first time each sub-goal ball is entered.
//! 3. [`automaton`] builds a DFA whose states are the sets of completed
//!    sub-goals, counts transition frequencies, and derives a [`Pdfa`].
//! 4. [`planner`] follows the most probable admissible transitions and
//!    re-plans when sub-goals become unavailable.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the
//! simulator and the command-line front end live in the `pdfa` crate.

#![no_std]

extern crate alloc;

pub mod automaton;
pub mod dbscan;
pub mod planner;
pub mod subgoal;
pub mod trace;
pub mod wordgen;

pub use automaton::{
    enumerate_language, export_dot, infer_dfa, language_size, Dfa, DotOptions, FrequencyMap, InferenceError, Pdfa,
    StateId, SymbolSet,
};
pub use dbscan::{dbscan, DbscanParams, Label, ParamError};
pub use planner::{
    best_word, execute, greedy_plan, Availability, Environment, Event, ExecutionTrace, Plan, PlannerOptions, StopRule,
    Stuck, TraceEvent,
};
pub use subgoal::{
    build_partial_datasets, cluster_subspace, clusters_to_subgoals, filter_initial, infer_subgoals, Cluster,
    FeatureBounds, PartialDataset, RadiusPolicy, SubGoalSet, SubgoalConfig,
};
pub use trace::{
    euclidean, project, satisfies, Corpus, Demonstration, FeatureSubset, ModelError, PartialState, SubGoal, WorldState,
};
pub use wordgen::{corpus_to_words, demo_to_word, Symbol, Word};

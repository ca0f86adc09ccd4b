//! Scaling measurements for clustering and automaton inference.

use std::fmt::{self, Write};
use std::hint::black_box;
use std::str::FromStr;
use std::time::{Duration, Instant};

use pdfa_core::{corpus_to_words, Corpus, FeatureSubset, Pdfa, SubgoalConfig, Word};

use crate::pipeline;
use crate::sim::{self, ScriptError, TaskScript};

/// Corpus sizes for the axes that hold the corpus fixed. Clustering is
/// quadratic in the number of states, so it gets a small corpus. Automaton
/// inference takes nanoseconds per word; with few words its setup cost,
/// which grows with the number of states, would hide the per-word loop.
pub const FIXED_CLUSTERING_DEMOS: usize = 100;
pub const FIXED_PDFA_DEMOS: usize = 4800;

/// What one level of an axis measures.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    /// Noise is set to a tenth of the target radius.
    pub script: TaskScript,
    pub clustering_demos: usize,
    pub pdfa_demos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Number of demonstrations, four-block task.
    Demos,
    /// Number of sub-goals, stack and restack designs.
    Subgoals,
    /// Number of admissible orderings at a fixed corpus size.
    Language,
    /// Number of objects for a fixed five-placement task.
    Objects,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::Demos, Axis::Subgoals, Axis::Language, Axis::Objects];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Demos => "demos",
            Axis::Subgoals => "subgoals",
            Axis::Language => "language",
            Axis::Objects => "objects",
        }
    }

    pub fn default_levels(self) -> Vec<usize> {
        match self {
            Axis::Demos => vec![100, 200, 400, 800],
            Axis::Subgoals => vec![3, 6, 9, 12],
            Axis::Language => vec![1, 2, 6, 24],
            Axis::Objects => vec![2, 3, 4, 5],
        }
    }

    /// The task and corpus sizes measured at `level`.
    pub fn design(self, level: usize) -> Result<Design, BenchError> {
        let bad = || BenchError::BadLevel { axis: self, level };
        let script = match self {
            Axis::Demos if level > 0 => sim::four_blocks(),
            Axis::Demos => return Err(bad()),
            Axis::Subgoals => sim::stack_unstack(level).ok_or_else(bad)?,
            Axis::Language => sim::language_design(level).ok_or_else(bad)?,
            Axis::Objects => sim::objects_design(level).ok_or_else(bad)?,
        };
        let mut script = script;
        script.noise.sigma = script.targets[0].radius / 10.0;
        let (clustering_demos, pdfa_demos) = match self {
            Axis::Demos => (level, level),
            _ => (FIXED_CLUSTERING_DEMOS, FIXED_PDFA_DEMOS),
        };
        Ok(Design { script, clustering_demos, pdfa_demos })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown axis {s:?}; expected demos, subgoals, language or objects"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Clustering,
    Pdfa,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Clustering => "clustering",
            Stage::Pdfa => "pdfa",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "clustering" => Ok(Stage::Clustering),
            "pdfa" => Ok(Stage::Pdfa),
            _ => Err(format!("unknown stage {s:?}; expected clustering or pdfa")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub axis: Axis,
    pub levels: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub stages: Vec<Stage>,
    /// Inference takes microseconds, so one automaton sample repeats it
    /// until at least this much time has passed and reports the mean.
    pub pdfa_sample: Duration,
}

impl BenchConfig {
    pub fn new(axis: Axis) -> Self {
        Self {
            axis,
            levels: axis.default_levels(),
            reps: 5,
            seed: 0,
            stages: vec![Stage::Clustering, Stage::Pdfa],
            pdfa_sample: Duration::from_millis(50),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub level: usize,
    pub stage: Stage,
    /// Seconds.
    pub median: f64,
    /// Median absolute deviation, seconds.
    pub mad: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BenchError {
    #[error("no levels given")]
    NoLevels,
    #[error("levels must be strictly increasing")]
    NotMonotone,
    #[error("at least one repetition is required")]
    NoRepetitions,
    #[error("level {level} is not available on the {axis} axis")]
    BadLevel { axis: Axis, level: usize },
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error(transparent)]
    Pipeline(#[from] pipeline::PipelineError),
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn mad(xs: &[f64]) -> f64 {
    let m = median(xs);
    median(&xs.iter().map(|x| (x - m).abs()).collect::<Vec<_>>())
}

/// Times the requested stages at every level. Levels run one after
/// another, but repetitions are interleaved across levels so that a slow
/// spell of the machine does not land on a single level. Corpora depend
/// only on the seed, and the clustering corpus is a prefix of the automaton
/// corpus. Without the clustering stage, words come from the scripted
/// sub-goals.
pub fn scaling_bench(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    if config.levels.is_empty() {
        return Err(BenchError::NoLevels);
    }
    if config.levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::NotMonotone);
    }
    if config.reps == 0 {
        return Err(BenchError::NoRepetitions);
    }
    // fail on a bad level before spending time on the good ones
    for &level in &config.levels {
        config.axis.design(level)?;
    }
    let clustering = config.stages.contains(&Stage::Clustering);
    let automaton = config.stages.contains(&Stage::Pdfa);

    struct Prepared {
        corpus: Corpus,
        candidates: Vec<FeatureSubset>,
        subgoal_config: SubgoalConfig,
        alphabet: usize,
        words: Vec<Word>,
    }
    let mut prepared = Vec::with_capacity(config.levels.len());
    for &level in &config.levels {
        let design = config.axis.design(level)?;
        let script = &design.script;
        let size = if automaton { design.pdfa_demos.max(design.clustering_demos) } else { design.clustering_demos };
        let full = sim::generate_demos(script, size, config.seed)?;
        let corpus =
            if size == design.clustering_demos { full.clone() } else { prefix(&full, design.clustering_demos) };
        let candidates = script.candidates();
        let subgoal_config = script.subgoal_config(&corpus);
        let goals = if clustering {
            pipeline::infer_subgoals(&corpus, &candidates, &subgoal_config)
                .map_err(pipeline::PipelineError::from)?
                .goals
        } else {
            script.ground_truth()
        };
        let words =
            if automaton { corpus_to_words(&prefix(&full, design.pdfa_demos), &goals, None) } else { Vec::new() };
        prepared.push(Prepared { corpus, candidates, subgoal_config, alphabet: goals.len(), words });
    }

    let mut cluster_samples = vec![Vec::with_capacity(config.reps); prepared.len()];
    let mut pdfa_samples = vec![Vec::with_capacity(config.reps); prepared.len()];
    for _ in 0..config.reps {
        for (i, p) in prepared.iter().enumerate() {
            if clustering {
                let start = Instant::now();
                let set = pipeline::infer_subgoals(black_box(&p.corpus), &p.candidates, &p.subgoal_config)
                    .map_err(pipeline::PipelineError::from)?;
                cluster_samples[i].push(start.elapsed().as_secs_f64());
                black_box(set);
            }
            if automaton {
                let start = Instant::now();
                let mut runs = 0u32;
                let elapsed = loop {
                    let pdfa = Pdfa::learn(p.alphabet, black_box(&p.words)).map_err(pipeline::PipelineError::from)?;
                    black_box(pdfa);
                    runs += 1;
                    let elapsed = start.elapsed();
                    if elapsed >= config.pdfa_sample {
                        break elapsed;
                    }
                };
                pdfa_samples[i].push(elapsed.as_secs_f64() / f64::from(runs));
            }
        }
    }

    let mut rows = Vec::new();
    for (i, &level) in config.levels.iter().enumerate() {
        if clustering {
            rows.push(row(level, Stage::Clustering, &cluster_samples[i]));
        }
        if automaton {
            rows.push(row(level, Stage::Pdfa, &pdfa_samples[i]));
        }
    }
    Ok(rows)
}

fn prefix(corpus: &Corpus, demos: usize) -> Corpus {
    let demos = corpus.demos()[..demos.min(corpus.len())].to_vec();
    Corpus::new(corpus.num_features(), demos).expect("a prefix of a valid corpus")
}

fn row(level: usize, stage: Stage, samples: &[f64]) -> BenchRow {
    BenchRow { level, stage, median: median(samples), mad: mad(samples) }
}

/// Plot data: `axis level stage median_s mad_s`, tab-separated.
pub fn format_tsv(axis: Axis, rows: &[BenchRow]) -> String {
    let mut out = String::from("axis\tlevel\tstage\tmedian_s\tmad_s\n");
    for r in rows {
        let _ = writeln!(out, "{axis}\t{}\t{}\t{:.9}\t{:.9}", r.level, r.stage, r.median, r.mad);
    }
    out
}

/// Aligned table for the terminal, times in milliseconds.
pub fn format_table(axis: Axis, rows: &[BenchRow]) -> String {
    let mut out = format!("{:>10}  {:<10}  {:>12}  {:>10}\n", axis.name(), "stage", "median ms", "mad ms");
    for r in rows {
        let _ =
            writeln!(out, "{:>10}  {:<10}  {:>12.4}  {:>10.4}", r.level, r.stage.name(), r.median * 1e3, r.mad * 1e3);
    }
    out
}

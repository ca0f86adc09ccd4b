use std::collections::BTreeSet;
use std::path::Path;

use pdfa_core::{satisfies, Availability, Environment, FeatureSubset, SubGoal, Symbol, WorldState};
use serde::{Deserialize, Serialize};

use crate::io;

pub type Position = [f64; 3];

/// Each object contributes x, y and z, in that order.
pub const FEATURES_PER_OBJECT: usize = 3;

/// Object positions; an absent object has no position.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockWorld {
    positions: Vec<Option<Position>>,
}

impl BlockWorld {
    /// Panics on a non-finite coordinate.
    pub fn new(positions: Vec<Option<Position>>) -> Self {
        assert!(positions.iter().flatten().flatten().all(|v| v.is_finite()), "non-finite object position");
        Self { positions }
    }

    pub fn num_objects(&self) -> usize {
        self.positions.len()
    }

    pub fn position(&self, object: usize) -> Option<Position> {
        self.positions[object]
    }

    pub fn set_position(&mut self, object: usize, position: Option<Position>) {
        assert!(position.iter().flatten().all(|v| v.is_finite()), "non-finite object position");
        self.positions[object] = position;
    }

    /// Sets one coordinate, placing the object at the origin first if it
    /// was absent.
    pub fn set_feature(&mut self, feature: usize, value: f64) {
        let p = self.positions[feature / FEATURES_PER_OBJECT].get_or_insert([0.0; 3]);
        p[feature % FEATURES_PER_OBJECT] = value;
    }

    /// Absent objects yield undefined features.
    pub fn state(&self) -> WorldState {
        self.observe(&BTreeSet::new())
    }

    /// The state with the objects in `hidden` reported as absent too.
    pub fn observe(&self, hidden: &BTreeSet<usize>) -> WorldState {
        let values = self
            .positions
            .iter()
            .enumerate()
            .flat_map(|(i, p)| {
                let p = if hidden.contains(&i) { None } else { *p };
                (0..FEATURES_PER_OBJECT).map(move |k| p.map(|p| p[k]))
            })
            .collect();
        WorldState::new(values).expect("positions are finite")
    }

    /// The x, y, z subset of `object`, numbered by the object.
    pub fn object_subset(object: usize) -> FeatureSubset {
        let first = object * FEATURES_PER_OBJECT;
        FeatureSubset::new(object, (first..first + FEATURES_PER_OBJECT).collect()).expect("increasing")
    }
}

/// Steps `from..to` (commands issued) during which `absent` objects are not
/// detected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub from: usize,
    pub to: usize,
    pub absent: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    #[serde(default)]
    pub schedule: Vec<Window>,
}

impl Schedule {
    pub fn new(windows: Vec<Window>) -> Self {
        Self { schedule: windows }
    }

    pub fn absent_at(&self, step: usize) -> BTreeSet<usize> {
        self.schedule.iter().filter(|w| (w.from..w.to).contains(&step)).flat_map(|w| w.absent.iter().copied()).collect()
    }

    /// Reads the `[[schedule]]` tables of a TOML file; other keys are
    /// ignored, so a task script doubles as a schedule file.
    pub fn parse(text: &str) -> Result<Self, io::Error> {
        let s: Schedule = toml::from_str(text)?;
        if let Some(w) = s.schedule.iter().find(|w| w.from > w.to) {
            return Err(io::Error::invalid(format!("schedule window {}..{} is reversed", w.from, w.to)));
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, io::Error> {
        io::load_with(path, Self::parse)
    }
}

/// A sub-goal is unreachable exactly when it references a feature of an
/// absent object.
pub fn availability_oracle(goals: &[SubGoal], absent: &BTreeSet<usize>) -> Availability {
    Availability::unreachable(
        goals
            .iter()
            .filter(|g| g.subset.indices().iter().any(|f| absent.contains(&(f / FEATURES_PER_OBJECT))))
            .map(|g| g.symbol),
    )
}

/// Executes sub-goals by moving the referenced object into the ball
/// center. Availability follows the schedule, indexed by commands issued.
#[derive(Debug, Clone)]
pub struct SimEnvironment {
    world: BlockWorld,
    goals: Vec<SubGoal>,
    schedule: Schedule,
    step: usize,
}

impl SimEnvironment {
    /// `goals[i]` must be the sub-goal of `Symbol(i)`.
    pub fn new(world: BlockWorld, goals: Vec<SubGoal>, schedule: Schedule) -> Self {
        Self { world, goals, schedule, step: 0 }
    }

    /// A world large enough for every feature the goals mention, all
    /// objects at the origin.
    pub fn for_goals(goals: Vec<SubGoal>, schedule: Schedule) -> Self {
        let features = goals.iter().flat_map(|g| g.subset.indices().iter().copied()).max().map_or(0, |f| f + 1);
        let objects = features.div_ceil(FEATURES_PER_OBJECT);
        Self::new(BlockWorld::new(vec![Some([0.0; 3]); objects]), goals, schedule)
    }

    /// For automata without sub-goals: symbol `i` places object `i`, so a
    /// schedule written in object ids applies to symbols directly.
    pub fn for_symbols(symbols: usize, schedule: Schedule) -> Self {
        let goals = (0..symbols)
            .map(|i| {
                SubGoal::new(Symbol(i), BlockWorld::object_subset(i), vec![0.0, 0.0, 0.1], 0.03)
                    .expect("valid placeholder")
            })
            .collect();
        Self::for_goals(goals, schedule)
    }

    pub fn world(&self) -> &BlockWorld {
        &self.world
    }

    /// Commands issued so far.
    pub fn step(&self) -> usize {
        self.step
    }

    /// What a sensor sees right now.
    pub fn observed(&self) -> WorldState {
        self.world.observe(&self.schedule.absent_at(self.step))
    }
}

impl Environment for SimEnvironment {
    fn availability(&mut self) -> Availability {
        availability_oracle(&self.goals, &self.schedule.absent_at(self.step))
    }

    fn achieve(&mut self, symbol: Symbol) -> bool {
        let absent = self.schedule.absent_at(self.step);
        self.step += 1;
        let Some(goal) = self.goals.get(symbol.0) else {
            return false;
        };
        if availability_oracle(std::slice::from_ref(goal), &absent).is_unreachable(symbol) {
            return false;
        }
        for (&f, &v) in goal.subset.indices().iter().zip(&goal.center) {
            self.world.set_feature(f, v);
        }
        satisfies(goal, &self.world.state())
    }
}

//! Demonstration to word conversion.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::trace::{Corpus, Demonstration, SubGoal};

/// A sub-goal symbol. The id doubles as the sub-goal's index in its set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub usize);

impl Symbol {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite sequence of symbols, possibly empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        self.0.contains(&symbol)
    }
}

impl<const N: usize> From<[usize; N]> for Word {
    fn from(ids: [usize; N]) -> Self {
        Self(ids.into_iter().map(Symbol).collect())
    }
}

impl From<&[usize]> for Word {
    fn from(ids: &[usize]) -> Self {
        Self(ids.iter().copied().map(Symbol).collect())
    }
}

/// Space-separated symbol ids, `e` for the empty word.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Records each sub-goal the first time a state enters its ball.
///
/// States are scanned in order and sub-goals in symbol order. At most one
/// symbol is appended per state: once a sub-goal fires, the scan moves on to
/// the next state, so other sub-goals satisfied by the same state are picked
/// up later if they still hold. `radius_override` replaces every sub-goal's
/// radius when given.
pub fn demo_to_word(demo: &Demonstration, goals: &[SubGoal], radius_override: Option<f64>) -> Word {
    let mut order: Vec<&SubGoal> = goals.iter().collect();
    order.sort_by_key(|g| g.symbol);
    let mut done = vec![false; order.len()];
    let mut word = Word::empty();

    for state in demo.states() {
        for (slot, goal) in order.iter().enumerate() {
            if done[slot] {
                continue;
            }
            let radius = radius_override.unwrap_or(goal.radius);
            if goal.contains_within(state, radius) {
                word.0.push(goal.symbol);
                done[slot] = true;
                break;
            }
        }
    }
    word
}

/// One word per demonstration, in corpus order; repeats are kept.
pub fn corpus_to_words(corpus: &Corpus, goals: &[SubGoal], radius_override: Option<f64>) -> Vec<Word> {
    corpus.demos().iter().map(|d| demo_to_word(d, goals, radius_override)).collect()
}

//! DFA inference over completed-sub-goal sets.
//!
//! Every state stands for the set of sub-goals completed so far, so a word
//! and any reordering of it end in the same state. States are created the
//! first time a new set is reached; transitions the first time a
//! `(state, symbol)` pair is observed. Each symbol occurrence increments the
//! frequency of the transition it takes, and the state a word ends in
//! becomes accepting.

mod dot;
mod pdfa;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::wordgen::{Symbol, Word};

pub use dot::{export_dot, DotOptions};
pub use pdfa::Pdfa;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// A set of symbols as a bitmask; alphabets are limited to 64 symbols.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolSet(u64);

impl SymbolSet {
    pub const CAPACITY: usize = 64;
    pub const EMPTY: SymbolSet = SymbolSet(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, s: Symbol) -> bool {
        s.0 < Self::CAPACITY && self.0 & (1 << s.0) != 0
    }

    pub fn with(self, s: Symbol) -> Self {
        Self(self.0 | (1 << s.0))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Symbol> {
        (0..Self::CAPACITY).filter(move |&i| self.0 & (1 << i) != 0).map(Symbol)
    }
}

impl FromIterator<Symbol> for SymbolSet {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        iter.into_iter().fold(Self::EMPTY, SymbolSet::with)
    }
}

impl fmt::Display for SymbolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InferenceError {
    #[error("alphabet of {0} symbols exceeds the supported 64")]
    AlphabetTooLarge(usize),
    #[error("word {word} uses symbol {symbol} outside the alphabet")]
    UnknownSymbol { word: usize, symbol: usize },
    #[error("word {word} repeats symbol {symbol}")]
    RepeatedSymbol { word: usize, symbol: usize },
    #[error("no demonstrations: the corpus is empty")]
    EmptyCorpus,
    #[error("frequency map disagrees with transitions: {0}")]
    InconsistentCounts(&'static str),
    #[error("malformed automaton: {0}")]
    Malformed(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct StateData {
    completed: SymbolSet,
    accepting: bool,
    next: Vec<Option<StateId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet_size: usize,
    states: Vec<StateData>,
    by_subset: BTreeMap<SymbolSet, StateId>,
}

impl Dfa {
    fn with_alphabet(alphabet_size: usize) -> Result<Self, InferenceError> {
        if alphabet_size > SymbolSet::CAPACITY {
            return Err(InferenceError::AlphabetTooLarge(alphabet_size));
        }
        let mut dfa = Self { alphabet_size, states: Vec::new(), by_subset: BTreeMap::new() };
        dfa.add_state(SymbolSet::EMPTY);
        Ok(dfa)
    }

    fn add_state(&mut self, completed: SymbolSet) -> StateId {
        let id = StateId(self.states.len());
        self.states.push(StateData { completed, accepting: false, next: vec![None; self.alphabet_size] });
        self.by_subset.insert(completed, id);
        id
    }

    /// Rebuilds an automaton from its tables, checking that it has the
    /// completed-set structure inference produces: state 0 is the empty set,
    /// sets are distinct, and each transition on `s` adds exactly `s`.
    pub fn from_parts(
        alphabet_size: usize,
        states: &[(SymbolSet, bool)],
        transitions: &[(StateId, Symbol, StateId)],
    ) -> Result<Self, InferenceError> {
        use InferenceError::Malformed;
        let mut dfa = Self::with_alphabet(alphabet_size)?;
        let (first, rest) = states.split_first().ok_or(Malformed("no states"))?;
        if !first.0.is_empty() {
            return Err(Malformed("initial state must have an empty completed set"));
        }
        dfa.states[0].accepting = first.1;
        for &(set, accepting) in rest {
            if set.iter().any(|s| s.0 >= alphabet_size) {
                return Err(Malformed("completed set uses a symbol outside the alphabet"));
            }
            if dfa.by_subset.contains_key(&set) {
                return Err(Malformed("two states share a completed set"));
            }
            let id = dfa.add_state(set);
            dfa.states[id.0].accepting = accepting;
        }
        for &(src, sym, dst) in transitions {
            if src.0 >= dfa.states.len() || dst.0 >= dfa.states.len() {
                return Err(Malformed("transition references an unknown state"));
            }
            if sym.0 >= alphabet_size {
                return Err(Malformed("transition symbol outside the alphabet"));
            }
            let from = dfa.states[src.0].completed;
            if from.contains(sym) || from.with(sym) != dfa.states[dst.0].completed {
                return Err(Malformed("transition does not add exactly its symbol"));
            }
            let slot = &mut dfa.states[src.0].next[sym.0];
            if slot.is_some() {
                return Err(Malformed("duplicate transition"));
            }
            *slot = Some(dst);
        }
        Ok(dfa)
    }

    pub fn initial(&self) -> StateId {
        StateId(0)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn next(&self, q: StateId, s: Symbol) -> Option<StateId> {
        self.states.get(q.0)?.next.get(s.0).copied().flatten()
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.states[q.0].accepting
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(|&q| self.is_accepting(q))
    }

    /// The set of sub-goals completed on reaching `q`.
    pub fn completed(&self, q: StateId) -> SymbolSet {
        self.states[q.0].completed
    }

    pub fn state_for(&self, completed: SymbolSet) -> Option<StateId> {
        self.by_subset.get(&completed).copied()
    }

    /// Defined transitions out of `q`, in symbol order.
    pub fn outgoing(&self, q: StateId) -> impl Iterator<Item = (Symbol, StateId)> + '_ {
        self.states[q.0].next.iter().enumerate().filter_map(|(s, t)| t.map(|t| (Symbol(s), t)))
    }

    /// All transitions, ordered by source state then symbol.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        self.states().flat_map(move |q| self.outgoing(q).map(move |(s, t)| (q, s, t)))
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions().count()
    }

    /// The state sequence `q0 .. qn` a word induces, if every step is defined.
    pub fn trace(&self, word: &Word) -> Option<Vec<StateId>> {
        let mut q = self.initial();
        let mut path = Vec::with_capacity(word.len() + 1);
        path.push(q);
        for &s in word.symbols() {
            q = self.next(q, s)?;
            path.push(q);
        }
        Some(path)
    }

    pub fn run(&self, word: &Word) -> Option<StateId> {
        let mut q = self.initial();
        for &s in word.symbols() {
            q = self.next(q, s)?;
        }
        Some(q)
    }

    pub fn accepts(&self, word: &Word) -> bool {
        self.run(word).is_some_and(|q| self.is_accepting(q))
    }
}

/// Observed transition counts keyed by `(source, target)`.
///
/// `empty_words` counts demonstrations that completed no sub-goal; it acts
/// as the termination mass of the initial state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyMap {
    counts: BTreeMap<(StateId, StateId), u64>,
    empty_words: u64,
}

impl FrequencyMap {
    pub fn new(counts: BTreeMap<(StateId, StateId), u64>, empty_words: u64) -> Self {
        Self { counts, empty_words }
    }

    pub fn get(&self, from: StateId, to: StateId) -> u64 {
        self.counts.get(&(from, to)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((StateId, StateId), u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn row_total(&self, from: StateId) -> u64 {
        self.counts.range((from, StateId(0))..=(from, StateId(usize::MAX))).map(|(_, &v)| v).sum()
    }

    pub fn incoming(&self, to: StateId) -> u64 {
        self.counts.iter().filter(|((_, t), _)| *t == to).map(|(_, &v)| v).sum()
    }

    /// Sum of all transition counts, i.e. the total word length.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn empty_words(&self) -> u64 {
        self.empty_words
    }
}

/// Builds the completed-set DFA and its frequency map from a multiset of
/// words over an alphabet of `alphabet_size` symbols.
pub fn infer_dfa(alphabet_size: usize, words: &[Word]) -> Result<(Dfa, FrequencyMap), InferenceError> {
    let mut dfa = Dfa::with_alphabet(alphabet_size)?;
    // flat `state * alphabet + symbol` tables keep the per-symbol work to
    // one lookup; the DFA's own tables are filled in afterwards
    const NONE: usize = usize::MAX;
    let mut next = vec![NONE; alphabet_size];
    let mut counts = vec![0u64; alphabet_size];
    let mut empty_words = 0;

    for (wi, word) in words.iter().enumerate() {
        let mut completed = SymbolSet::EMPTY;
        let mut q = 0;
        for &s in word.symbols() {
            if s.0 >= alphabet_size {
                return Err(InferenceError::UnknownSymbol { word: wi, symbol: s.0 });
            }
            if completed.contains(s) {
                return Err(InferenceError::RepeatedSymbol { word: wi, symbol: s.0 });
            }
            completed = completed.with(s);
            let slot = q * alphabet_size + s.0;
            if next[slot] == NONE {
                next[slot] = match dfa.state_for(completed) {
                    Some(t) => t.0,
                    None => {
                        next.resize(next.len() + alphabet_size, NONE);
                        counts.resize(counts.len() + alphabet_size, 0);
                        dfa.add_state(completed).0
                    }
                };
            }
            counts[slot] += 1;
            q = next[slot];
        }
        dfa.states[q].accepting = true;
        if word.is_empty() {
            empty_words += 1;
        }
    }

    let mut v = BTreeMap::new();
    for (slot, &t) in next.iter().enumerate() {
        if t != NONE {
            let (q, s) = (slot / alphabet_size, slot % alphabet_size);
            dfa.states[q].next[s] = Some(StateId(t));
            v.insert((StateId(q), StateId(t)), counts[slot]);
        }
    }
    Ok((dfa, FrequencyMap::new(v, empty_words)))
}

/// Every accepted word, by depth-first traversal in symbol order. Finite
/// because every transition grows the completed set.
pub fn enumerate_language(dfa: &Dfa) -> Vec<Word> {
    fn walk(dfa: &Dfa, q: StateId, prefix: &mut Vec<Symbol>, out: &mut Vec<Word>) {
        if dfa.is_accepting(q) {
            out.push(Word(prefix.clone()));
        }
        for (s, t) in dfa.outgoing(q) {
            prefix.push(s);
            walk(dfa, t, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(dfa, dfa.initial(), &mut Vec::new(), &mut out);
    out
}

/// Number of accepted words, counted over the acyclic transition graph
/// without listing them. Saturates at `u128::MAX`.
pub fn language_size(dfa: &Dfa) -> u128 {
    // states only ever lead to larger completed sets, so visiting by
    // decreasing set size sees every successor first
    let mut order: Vec<StateId> = dfa.states().collect();
    order.sort_by_key(|&q| core::cmp::Reverse(dfa.completed(q).len()));
    let mut paths = vec![0u128; dfa.num_states()];
    for q in order {
        let mut n = u128::from(dfa.is_accepting(q));
        for (_, t) in dfa.outgoing(q) {
            n = n.saturating_add(paths[t.0]);
        }
        paths[q.0] = n;
    }
    paths[dfa.initial().0]
}

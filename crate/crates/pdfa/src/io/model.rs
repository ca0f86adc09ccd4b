use std::path::Path;

use pdfa_core::{Dfa, FrequencyMap, Pdfa, StateId, SubGoal, Symbol, SymbolSet};
use serde::{Deserialize, Serialize};

use super::subgoals::Entry;
use super::Error;

/// A learned automaton and, when known, the sub-goal behind each symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub pdfa: Pdfa,
    /// Empty, or one sub-goal per symbol in symbol order.
    pub goals: Vec<SubGoal>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    header: Header,
    #[serde(default)]
    symbols: Vec<SymbolEntry>,
    states: Vec<StateEntry>,
    #[serde(default)]
    transitions: Vec<TransitionEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    states: usize,
    alphabet: usize,
    initial: usize,
    /// Demonstrations that completed no sub-goal.
    empty_words: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolEntry {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subgoal: Option<Entry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateEntry {
    id: usize,
    /// Completed symbols.
    psi: Vec<usize>,
    accepting: bool,
    fp: String,
    fp_decimal: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionEntry {
    src: usize,
    symbol: usize,
    dst: usize,
    count: u64,
    prob: String,
    prob_decimal: f64,
}

/// The automaton as TOML: header, symbol table, state table with completed
/// sets and termination probabilities, transition table with counts and
/// probabilities. Fractions are exact; decimals are for reading.
pub fn format_model(model: &Model) -> String {
    let pdfa = &model.pdfa;
    let dfa = pdfa.dfa();
    let file = File {
        header: Header {
            states: dfa.num_states(),
            alphabet: dfa.alphabet_size(),
            initial: dfa.initial().0,
            empty_words: pdfa.frequencies().empty_words(),
        },
        symbols: (0..dfa.alphabet_size())
            .map(|id| SymbolEntry { id, subgoal: model.goals.get(id).map(|g| Entry::from_goal(g, None)) })
            .collect(),
        states: dfa
            .states()
            .map(|q| StateEntry {
                id: q.0,
                psi: dfa.completed(q).iter().map(|s| s.0).collect(),
                accepting: dfa.is_accepting(q),
                fp: pdfa.accept_ratio(q).to_string(),
                fp_decimal: pdfa.accept_probability(q),
            })
            .collect(),
        transitions: dfa
            .transitions()
            .map(|(q, s, t)| TransitionEntry {
                src: q.0,
                symbol: s.0,
                dst: t.0,
                count: pdfa.count(q, s),
                prob: pdfa.transition_ratio(q, s).to_string(),
                prob_decimal: pdfa.transition_probability(q, s),
            })
            .collect(),
    };
    toml::to_string(&file).expect("automaton serializes")
}

pub fn parse_model(text: &str) -> Result<Model, Error> {
    let file: File = toml::from_str(text)?;
    let h = &file.header;
    if h.initial != 0 {
        return Err(Error::invalid("the initial state must be state 0"));
    }
    if file.states.len() != h.states {
        return Err(Error::invalid(format!("header declares {} states, table has {}", h.states, file.states.len())));
    }
    let mut states = Vec::with_capacity(h.states);
    for (i, s) in file.states.iter().enumerate() {
        if s.id != i {
            return Err(Error::invalid(format!("state {i} is listed with id {}", s.id)));
        }
        if s.psi.iter().any(|&x| x >= h.alphabet) {
            return Err(Error::invalid(format!("state {i}: psi uses a symbol outside the alphabet")));
        }
        let set: SymbolSet = s.psi.iter().map(|&x| Symbol(x)).collect();
        if set.len() != s.psi.len() {
            return Err(Error::invalid(format!("state {i}: psi repeats a symbol")));
        }
        states.push((set, s.accepting));
    }
    let transitions: Vec<_> =
        file.transitions.iter().map(|t| (StateId(t.src), Symbol(t.symbol), StateId(t.dst))).collect();
    let dfa = Dfa::from_parts(h.alphabet, &states, &transitions).map_err(|e| Error::invalid(e.to_string()))?;
    let counts = file.transitions.iter().map(|t| ((StateId(t.src), StateId(t.dst)), t.count)).collect();
    let pdfa =
        Pdfa::from_counts(dfa, FrequencyMap::new(counts, h.empty_words)).map_err(|e| Error::invalid(e.to_string()))?;

    // the stored probabilities must be the ones the counts imply
    for s in &file.states {
        let q = StateId(s.id);
        if s.fp != pdfa.accept_ratio(q).to_string() {
            return Err(Error::invalid(format!("state {}: fp {} does not match the counts", s.id, s.fp)));
        }
    }
    for t in &file.transitions {
        let r = pdfa.transition_ratio(StateId(t.src), Symbol(t.symbol));
        if t.prob != r.to_string() {
            return Err(Error::invalid(format!(
                "transition {} -{}-> {}: prob {} does not match the counts",
                t.src, t.symbol, t.dst, t.prob
            )));
        }
    }

    let mut goals = Vec::new();
    for (i, sym) in file.symbols.iter().enumerate() {
        if sym.id != i {
            return Err(Error::invalid(format!("symbol {i} is listed with id {}", sym.id)));
        }
        if let Some(e) = &sym.subgoal {
            if e.symbol != i {
                return Err(Error::invalid(format!("symbol {i} refers to sub-goal {}", e.symbol)));
            }
            goals.push(e.to_goal()?);
        }
    }
    if !goals.is_empty() && (goals.len() != h.alphabet || file.symbols.len() != h.alphabet) {
        return Err(Error::invalid("sub-goals must be given for every symbol or for none"));
    }
    Ok(Model { pdfa, goals })
}

pub fn load_model(path: &Path) -> Result<Model, Error> {
    super::load_with(path, parse_model)
}

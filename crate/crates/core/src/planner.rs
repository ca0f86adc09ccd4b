//! Greedy plan synthesis over a [`Pdfa`] and execution with re-planning.

use alloc::vec::Vec;
use core::fmt;

use crate::automaton::{enumerate_language, Pdfa, StateId, SymbolSet};
use crate::wordgen::{Symbol, Word};

/// Symbols that cannot be executed right now.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Availability {
    unreachable: SymbolSet,
}

impl Availability {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn unreachable<I: IntoIterator<Item = Symbol>>(symbols: I) -> Self {
        Self { unreachable: symbols.into_iter().collect() }
    }

    pub fn is_unreachable(&self, s: Symbol) -> bool {
        self.unreachable.contains(s)
    }

    pub fn with_unreachable(self, s: Symbol) -> Self {
        Self { unreachable: self.unreachable.with(s) }
    }

    pub fn unreachable_set(&self) -> SymbolSet {
        self.unreachable
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum StopRule {
    /// Stop as soon as an accepting state is reached.
    #[default]
    FirstAccepting,
    /// At an accepting state, keep going only while the best admissible
    /// transition is strictly more probable than terminating there.
    PreferTerminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlannerOptions {
    pub stop_rule: StopRule,
    /// Failed commands tolerated before execution gives up as stuck.
    pub max_blocked: usize,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        Self { stop_rule: StopRule::FirstAccepting, max_blocked: 64 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub start: StateId,
    pub end: StateId,
    pub symbols: Vec<Symbol>,
    /// Product of the chosen transition probabilities.
    pub expected_probability: f64,
}

impl Plan {
    pub fn word(&self) -> Word {
        Word(self.symbols.clone())
    }
}

/// No admissible transition out of a non-accepting state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("stuck at {state}: no admissible transition")]
pub struct Stuck {
    pub state: StateId,
}

/// Most frequent transition out of `q`, lowest symbol on ties. Transitions
/// out of one state share a denominator, so counts order them exactly.
fn best_transition(pdfa: &Pdfa, q: StateId, avail: Option<&Availability>) -> Option<(Symbol, StateId)> {
    let mut best: Option<(Symbol, StateId, u64)> = None;
    for (s, t) in pdfa.dfa().outgoing(q) {
        if avail.is_some_and(|a| a.is_unreachable(s)) {
            continue;
        }
        let c = pdfa.count(q, s);
        if best.is_none_or(|(_, _, bc)| c > bc) {
            best = Some((s, t, c));
        }
    }
    best.map(|(s, t, _)| (s, t))
}

/// Follows the most probable transition from `start` until an accepting
/// state is reached.
///
/// `avail` restricts the first choice only: it describes what can be
/// executed now, and later steps are re-planned if the world has not changed
/// by then. Fails with [`Stuck`] when no admissible transition leaves a
/// non-accepting state.
pub fn greedy_plan(pdfa: &Pdfa, start: StateId, avail: &Availability, options: &PlannerOptions) -> Result<Plan, Stuck> {
    let dfa = pdfa.dfa();
    let mut q = start;
    let mut symbols = Vec::new();
    let mut p = 1.0;

    loop {
        let filter = symbols.is_empty().then_some(avail);
        let choice = best_transition(pdfa, q, filter);
        if dfa.is_accepting(q) {
            let keep_going = match (options.stop_rule, choice) {
                (StopRule::FirstAccepting, _) | (StopRule::PreferTerminal, None) => false,
                (StopRule::PreferTerminal, Some((s, _))) => pdfa.transition_ratio(q, s) > pdfa.accept_ratio(q),
            };
            if !keep_going {
                break;
            }
        }
        let (s, t) = choice.ok_or(Stuck { state: q })?;
        p *= pdfa.transition_probability(q, s);
        symbols.push(s);
        q = t;
    }

    Ok(Plan { start, end: q, symbols, expected_probability: p })
}

/// The world the planner acts in.
pub trait Environment {
    /// Symbols that cannot be executed at the moment.
    fn availability(&mut self) -> Availability;
    /// Attempts a sub-goal; `true` when it was achieved.
    fn achieve(&mut self, symbol: Symbol) -> bool;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Planned(Plan),
    Achieved { symbol: Symbol, state: StateId },
    Blocked { symbol: Symbol, state: StateId },
    Replanned(Plan),
    Finished(StateId),
    Stuck(StateId),
}

impl Event {
    pub fn kind(&self) -> &'static str {
        match self {
            Event::Planned(_) => "planned",
            Event::Achieved { .. } => "achieved",
            Event::Blocked { .. } => "blocked",
            Event::Replanned(_) => "replanned",
            Event::Finished(_) => "finished",
            Event::Stuck(_) => "stuck",
        }
    }

    /// DFA state the event refers to: the plan's start, the state after an
    /// achievement, or the state the execution was in otherwise.
    pub fn state(&self) -> StateId {
        match self {
            Event::Planned(p) | Event::Replanned(p) => p.start,
            Event::Achieved { state, .. } | Event::Blocked { state, .. } => *state,
            Event::Finished(q) | Event::Stuck(q) => *q,
        }
    }

    pub fn symbol(&self) -> Option<Symbol> {
        match self {
            Event::Achieved { symbol, .. } | Event::Blocked { symbol, .. } => Some(*symbol),
            _ => None,
        }
    }
}

/// An event and the number of commands issued before it.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub step: usize,
    pub event: Event,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExecutionTrace {
    pub events: Vec<TraceEvent>,
}

impl ExecutionTrace {
    fn push(&mut self, step: usize, event: Event) {
        self.events.push(TraceEvent { step, event });
    }

    pub fn achieved_word(&self) -> Word {
        Word(
            self.events
                .iter()
                .filter_map(|e| match e.event {
                    Event::Achieved { symbol, .. } => Some(symbol),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn replans(&self) -> usize {
        self.events.iter().filter(|e| matches!(e.event, Event::Replanned(_))).count()
    }

    pub fn finished(&self) -> Option<StateId> {
        match self.events.last()?.event {
            Event::Finished(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_stuck(&self) -> bool {
        matches!(self.events.last(), Some(TraceEvent { event: Event::Stuck(_), .. }))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Planned(p) | Event::Replanned(p) => {
                write!(f, "{} {} {}", self.kind(), p.start, p.word())
            }
            Event::Achieved { symbol, state } | Event::Blocked { symbol, state } => {
                write!(f, "{} {state} {symbol}", self.kind())
            }
            Event::Finished(q) | Event::Stuck(q) => write!(f, "{} {q}", self.kind()),
        }
    }
}

/// Plans from the initial state and executes against `env`, re-planning
/// from the current state whenever the next planned symbol is unavailable
/// or a command fails. A failed symbol is excluded from the immediate
/// re-plan only.
pub fn execute<E: Environment + ?Sized>(pdfa: &Pdfa, env: &mut E, options: &PlannerOptions) -> ExecutionTrace {
    let dfa = pdfa.dfa();
    let mut trace = ExecutionTrace::default();
    let mut step = 0;
    let mut q = dfa.initial();
    let mut failures = 0;

    let mut plan = match greedy_plan(pdfa, q, &env.availability(), options) {
        Ok(plan) => plan,
        Err(stuck) => {
            trace.push(step, Event::Stuck(stuck.state));
            return trace;
        }
    };
    trace.push(step, Event::Planned(plan.clone()));
    let mut cursor = 0;

    loop {
        let Some(&next) = plan.symbols.get(cursor) else {
            trace.push(step, Event::Finished(q));
            return trace;
        };
        let avail = env.availability();
        let exclude = if avail.is_unreachable(next) {
            avail
        } else {
            let achieved = env.achieve(next);
            step += 1;
            if achieved {
                q = dfa.next(q, next).expect("plan follows defined transitions");
                trace.push(step, Event::Achieved { symbol: next, state: q });
                cursor += 1;
                continue;
            }
            trace.push(step, Event::Blocked { symbol: next, state: q });
            failures += 1;
            if failures > options.max_blocked {
                trace.push(step, Event::Stuck(q));
                return trace;
            }
            avail.with_unreachable(next)
        };
        match greedy_plan(pdfa, q, &exclude, options) {
            Ok(p) => {
                trace.push(step, Event::Replanned(p.clone()));
                plan = p;
                cursor = 0;
            }
            Err(stuck) => {
                trace.push(step, Event::Stuck(stuck.state));
                return trace;
            }
        }
    }
}

/// The most probable accepted word by exhaustive enumeration; first in
/// enumeration order on ties.
pub fn best_word(pdfa: &Pdfa) -> Option<(Word, f64)> {
    let mut best: Option<(Word, f64)> = None;
    for w in enumerate_language(pdfa.dfa()) {
        let p = pdfa.word_probability(&w);
        if best.as_ref().is_none_or(|(_, bp)| p > *bp) {
            best = Some((w, p));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ab3_ba1() -> Pdfa {
        let mut ws = vec![Word::from([0, 1]); 3];
        ws.push(Word::from([1, 0]));
        Pdfa::learn(2, &ws).unwrap()
    }

    #[test]
    fn follows_most_probable_branch() {
        let p = ab3_ba1();
        let plan = greedy_plan(&p, StateId(0), &Availability::all(), &PlannerOptions::default()).unwrap();
        assert_eq!(plan.word(), Word::from([0, 1]));
        assert_eq!(plan.expected_probability, 0.75);
        assert!(p.dfa().is_accepting(plan.end));
    }

    #[test]
    fn unreachable_first_symbol_forces_other_branch() {
        let p = ab3_ba1();
        let avail = Availability::unreachable([Symbol(0)]);
        let plan = greedy_plan(&p, StateId(0), &avail, &PlannerOptions::default()).unwrap();
        assert_eq!(plan.word(), Word::from([1, 0]));
        assert_eq!(plan.expected_probability, 0.25);
    }

    #[test]
    fn accepting_start_gives_empty_plan() {
        let p = ab3_ba1();
        let end = p.dfa().run(&Word::from([0, 1])).unwrap();
        let plan = greedy_plan(&p, end, &Availability::all(), &PlannerOptions::default()).unwrap();
        assert!(plan.symbols.is_empty());
        assert_eq!(plan.expected_probability, 1.0);
    }

    #[test]
    fn all_unreachable_is_stuck() {
        let p = ab3_ba1();
        let avail = Availability::unreachable([Symbol(0), Symbol(1)]);
        let err = greedy_plan(&p, StateId(0), &avail, &PlannerOptions::default()).unwrap_err();
        assert_eq!(err, Stuck { state: StateId(0) });
    }

    #[test]
    fn ties_break_to_lowest_symbol() {
        let p = Pdfa::learn(2, &[Word::from([1]), Word::from([0])]).unwrap();
        let plan = greedy_plan(&p, StateId(0), &Availability::all(), &PlannerOptions::default()).unwrap();
        assert_eq!(plan.word(), Word::from([0]));
    }

    #[test]
    fn stop_rules_at_intermediate_accepting_state() {
        // "a" ends 1 time, "ab" 3 times: {a} is accepting with an outgoing edge
        let mut ws = vec![Word::from([0, 1]); 3];
        ws.push(Word::from([0]));
        let p = Pdfa::learn(2, &ws).unwrap();
        let literal = greedy_plan(&p, StateId(0), &Availability::all(), &PlannerOptions::default()).unwrap();
        assert_eq!(literal.word(), Word::from([0]));
        let opts = PlannerOptions { stop_rule: StopRule::PreferTerminal, ..PlannerOptions::default() };
        // F_P({a}) = 4/7 < delta_P({a}, b) = 3/4
        let longer = greedy_plan(&p, StateId(0), &Availability::all(), &opts).unwrap();
        assert_eq!(longer.word(), Word::from([0, 1]));
    }

    struct Scripted {
        blocked: Vec<(usize, Symbol)>,
        failing: Vec<Symbol>,
        clock: usize,
    }

    impl Environment for Scripted {
        fn availability(&mut self) -> Availability {
            Availability::unreachable(self.blocked.iter().filter(|(t, _)| *t == self.clock).map(|(_, s)| *s))
        }
        fn achieve(&mut self, symbol: Symbol) -> bool {
            self.clock += 1;
            if let Some(i) = self.failing.iter().position(|&s| s == symbol) {
                self.failing.remove(i);
                return false;
            }
            true
        }
    }

    #[test]
    fn execute_without_changes() {
        let p = ab3_ba1();
        let mut env = Scripted { blocked: vec![], failing: vec![], clock: 0 };
        let trace = execute(&p, &mut env, &PlannerOptions::default());
        let kinds: Vec<&str> = trace.events.iter().map(|e| e.event.kind()).collect();
        assert_eq!(kinds, ["planned", "achieved", "achieved", "finished"]);
        assert_eq!(trace.achieved_word(), Word::from([0, 1]));
        assert_eq!(trace.replans(), 0);
    }

    #[test]
    fn execute_replans_on_unavailability() {
        let p = ab3_ba1();
        let mut env = Scripted { blocked: vec![(0, Symbol(0))], failing: vec![], clock: 0 };
        let trace = execute(&p, &mut env, &PlannerOptions::default());
        // initial plan already avoids the unavailable symbol
        assert_eq!(trace.achieved_word(), Word::from([1, 0]));
        assert_eq!(trace.replans(), 0);
    }

    #[test]
    fn execute_blocked_command_replans() {
        let p = ab3_ba1();
        let mut env = Scripted { blocked: vec![], failing: vec![Symbol(0)], clock: 0 };
        let trace = execute(&p, &mut env, &PlannerOptions::default());
        let kinds: Vec<&str> = trace.events.iter().map(|e| e.event.kind()).collect();
        assert_eq!(kinds, ["planned", "blocked", "replanned", "achieved", "achieved", "finished"]);
        assert_eq!(trace.achieved_word(), Word::from([1, 0]));
    }

    #[test]
    fn execute_stuck_immediately() {
        let p = ab3_ba1();
        let mut env = Scripted { blocked: vec![(0, Symbol(0)), (0, Symbol(1))], failing: vec![], clock: 0 };
        let trace = execute(&p, &mut env, &PlannerOptions::default());
        assert_eq!(trace.events.len(), 1);
        assert!(trace.is_stuck());
    }

    #[test]
    fn execute_gives_up_after_repeated_failures() {
        // a lone symbol that fails leaves nothing to re-plan with
        let single = Pdfa::learn(1, &[Word::from([0])]).unwrap();
        let mut env = Scripted { blocked: vec![], failing: vec![Symbol(0)], clock: 0 };
        assert!(execute(&single, &mut env, &PlannerOptions::default()).is_stuck());

        let p = ab3_ba1();
        let failing = (0..100).map(|i| Symbol(i % 2)).collect();
        let mut env = Scripted { blocked: vec![], failing, clock: 0 };
        let opts = PlannerOptions { max_blocked: 3, ..PlannerOptions::default() };
        let trace = execute(&p, &mut env, &opts);
        assert!(trace.is_stuck());
        assert_eq!(env.clock, 4);
    }

    #[test]
    fn best_word_enumerates() {
        let p = ab3_ba1();
        let (w, prob) = best_word(&p).unwrap();
        assert_eq!(w, Word::from([0, 1]));
        assert_eq!(prob, 0.75);
    }
}

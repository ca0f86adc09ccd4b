use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{CheckedMul, One, ToPrimitive, Zero};

use super::{Dfa, FrequencyMap, InferenceError, StateId};
use crate::wordgen::{Symbol, Word};

/// A DFA with transition and termination probabilities derived from
/// observed frequencies.
///
/// The probability of leaving `q` on `s` is the count of that transition
/// over all counts leaving `q`. The termination probability of an accepting
/// state is its incoming count over the incoming counts of all accepting
/// states, with demonstrations that completed nothing counted as entering
/// the initial state. Probabilities are kept as exact ratios.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdfa {
    dfa: Dfa,
    freq: FrequencyMap,
    /// `counts[q][s]`, zero where the transition is undefined.
    counts: Vec<Vec<u64>>,
    row_totals: Vec<u64>,
    accept_mass: Vec<u64>,
    accept_total: u64,
}

impl Pdfa {
    /// Derives the probabilistic automaton. Rejects an empty corpus (no
    /// accepting state) and counts that do not match the transitions.
    pub fn from_counts(dfa: Dfa, freq: FrequencyMap) -> Result<Self, InferenceError> {
        use InferenceError::InconsistentCounts;
        let n = dfa.num_states();
        let mut counts = vec![vec![0u64; dfa.alphabet_size()]; n];
        let mut row_totals = vec![0u64; n];
        let mut incoming = vec![0u64; n];
        let mut seen = 0;

        for (q, s, t) in dfa.transitions() {
            let c = freq.get(q, t);
            if c == 0 {
                return Err(InconsistentCounts("transition with zero count"));
            }
            counts[q.0][s.0] = c;
            row_totals[q.0] += c;
            incoming[t.0] += c;
            seen += 1;
        }
        if freq.iter().count() != seen {
            return Err(InconsistentCounts("count for a pair with no transition"));
        }
        incoming[0] += freq.empty_words();

        let mut accept_mass = vec![0u64; n];
        for q in dfa.accepting_states() {
            accept_mass[q.0] = incoming[q.0];
        }
        let accept_total: u64 = accept_mass.iter().sum();
        if dfa.accepting_states().next().is_none() {
            return Err(InferenceError::EmptyCorpus);
        }
        if accept_total == 0 {
            return Err(InconsistentCounts("accepting states carry no mass"));
        }
        Ok(Self { dfa, freq, counts, row_totals, accept_mass, accept_total })
    }

    /// Inference followed by probability derivation.
    pub fn learn(alphabet_size: usize, words: &[Word]) -> Result<Self, InferenceError> {
        let (dfa, freq) = super::infer_dfa(alphabet_size, words)?;
        Self::from_counts(dfa, freq)
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn frequencies(&self) -> &FrequencyMap {
        &self.freq
    }

    /// Raw count of the transition `(q, s)`, zero if undefined.
    pub fn count(&self, q: StateId, s: Symbol) -> u64 {
        self.counts[q.0].get(s.0).copied().unwrap_or(0)
    }

    pub fn transition_ratio(&self, q: StateId, s: Symbol) -> Ratio<u64> {
        let c = self.count(q, s);
        if c == 0 {
            Ratio::zero()
        } else {
            Ratio::new(c, self.row_totals[q.0])
        }
    }

    pub fn transition_probability(&self, q: StateId, s: Symbol) -> f64 {
        to_f64(self.transition_ratio(q, s))
    }

    pub fn accept_ratio(&self, q: StateId) -> Ratio<u64> {
        Ratio::new(self.accept_mass[q.0], self.accept_total)
    }

    pub fn accept_probability(&self, q: StateId) -> f64 {
        to_f64(self.accept_ratio(q))
    }

    /// Exact word probability, or `None` if the product overflows `u128`.
    pub fn word_ratio(&self, word: &Word) -> Option<Ratio<u128>> {
        let Some(path) = self.dfa.trace(word) else {
            return Some(Ratio::zero());
        };
        let mut p = Ratio::<u128>::one();
        for (i, &s) in word.symbols().iter().enumerate() {
            p = p.checked_mul(&widen(self.transition_ratio(path[i], s)))?;
        }
        let last = *path.last().expect("trace starts at q0");
        p.checked_mul(&widen(self.accept_ratio(last)))
    }

    /// Product of transition probabilities along the word times the
    /// termination probability of the state it ends in; zero if the word
    /// leaves the automaton.
    pub fn word_probability(&self, word: &Word) -> f64 {
        if let Some(r) = self.word_ratio(word) {
            return to_f64(r);
        }
        let path = self.dfa.trace(word).expect("overflow implies a defined trace");
        let mut p = 1.0;
        for (i, &s) in word.symbols().iter().enumerate() {
            p *= self.transition_probability(path[i], s);
        }
        p * self.accept_probability(*path.last().unwrap())
    }

    pub fn accepts(&self, word: &Word) -> bool {
        match self.dfa.trace(word) {
            Some(path) => {
                let q = *path.last().unwrap();
                self.accept_mass[q.0] > 0 && word.symbols().iter().zip(&path).all(|(&s, &q)| self.count(q, s) > 0)
            }
            None => false,
        }
    }
}

fn widen(r: Ratio<u64>) -> Ratio<u128> {
    Ratio::new_raw(u128::from(*r.numer()), u128::from(*r.denom()))
}

fn to_f64<T: ToPrimitive>(r: Ratio<T>) -> f64 {
    let num = r.numer().to_f64().unwrap_or(f64::NAN);
    let den = r.denom().to_f64().unwrap_or(f64::NAN);
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::SymbolSet;

    fn repeat(word: &[usize], n: usize) -> Vec<Word> {
        vec![Word::from(word); n]
    }

    fn ab3_ba1() -> Pdfa {
        let mut ws = repeat(&[0, 1], 3);
        ws.extend(repeat(&[1, 0], 1));
        Pdfa::learn(2, &ws).unwrap()
    }

    #[test]
    fn hand_counted_transition_probabilities() {
        let p = ab3_ba1();
        let q0 = p.dfa().initial();
        assert_eq!(p.transition_ratio(q0, Symbol(0)), Ratio::new(3, 4));
        assert_eq!(p.transition_ratio(q0, Symbol(1)), Ratio::new(1, 4));
        let qa = p.dfa().state_for(SymbolSet::from_bits(0b01)).unwrap();
        let qb = p.dfa().state_for(SymbolSet::from_bits(0b10)).unwrap();
        let qab = p.dfa().state_for(SymbolSet::from_bits(0b11)).unwrap();
        assert_eq!(p.transition_ratio(qa, Symbol(1)), Ratio::one());
        assert_eq!(p.transition_ratio(qb, Symbol(0)), Ratio::one());
        assert_eq!(p.accept_ratio(qab), Ratio::one());
        assert_eq!(p.accept_ratio(q0), Ratio::zero());
    }

    #[test]
    fn hand_counted_word_probabilities() {
        let p = ab3_ba1();
        assert_eq!(p.word_ratio(&Word::from([0, 1])), Some(Ratio::new(3, 4)));
        assert_eq!(p.word_ratio(&Word::from([1, 0])), Some(Ratio::new(1, 4)));
        assert_eq!(p.word_probability(&Word::from([0, 1])), 0.75);
        assert_eq!(p.word_probability(&Word::from([0])), 0.0);
        assert_eq!(p.word_probability(&Word::empty()), 0.0);
        assert!(!p.accepts(&Word::from([0])));
        assert!(!p.accepts(&Word::from([1, 1])));
        assert!(p.accepts(&Word::from([1, 0])));
    }

    #[test]
    fn single_word_has_probability_one() {
        let p = Pdfa::learn(3, &repeat(&[2, 0, 1], 1)).unwrap();
        assert_eq!(p.word_ratio(&Word::from([2, 0, 1])), Some(Ratio::one()));
        for (q, s, _) in p.dfa().transitions() {
            assert_eq!(p.transition_ratio(q, s), Ratio::one());
        }
    }

    #[test]
    fn termination_split_between_accepting_states() {
        // {a} reached 3 times, {b} once; both accepting
        let mut ws = repeat(&[0], 3);
        ws.push(Word::from([1]));
        let p = Pdfa::learn(2, &ws).unwrap();
        let qa = p.dfa().run(&Word::from([0])).unwrap();
        let qb = p.dfa().run(&Word::from([1])).unwrap();
        assert_eq!(p.accept_ratio(qa), Ratio::new(3, 4));
        assert_eq!(p.accept_ratio(qb), Ratio::new(1, 4));
    }

    #[test]
    fn empty_words() {
        let p = Pdfa::learn(2, &repeat(&[], 3)).unwrap();
        assert_eq!(p.accept_ratio(p.dfa().initial()), Ratio::one());
        assert_eq!(p.word_probability(&Word::empty()), 1.0);

        let mut ws = repeat(&[], 1);
        ws.extend(repeat(&[0], 3));
        let p = Pdfa::learn(1, &ws).unwrap();
        assert_eq!(p.accept_ratio(p.dfa().initial()), Ratio::new(1, 4));
        assert!(p.accepts(&Word::empty()));
    }

    #[test]
    fn empty_corpus_rejected() {
        assert_eq!(Pdfa::learn(2, &[]), Err(InferenceError::EmptyCorpus));
    }

    #[test]
    fn inconsistent_counts_rejected() {
        let (dfa, freq) = crate::automaton::infer_dfa(2, &repeat(&[0, 1], 2)).unwrap();
        let mut bogus: alloc::collections::BTreeMap<_, _> = freq.iter().collect();
        bogus.insert((StateId(2), StateId(0)), 1);
        let err = Pdfa::from_counts(dfa.clone(), FrequencyMap::new(bogus, 0)).unwrap_err();
        assert!(matches!(err, InferenceError::InconsistentCounts(_)));
        let err = Pdfa::from_counts(dfa, FrequencyMap::default()).unwrap_err();
        assert!(matches!(err, InferenceError::InconsistentCounts(_)));
    }
}

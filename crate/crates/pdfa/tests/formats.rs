use pdfa::io::{format_demos, format_model, format_words, parse_demos, parse_model, parse_words, Model};
use pdfa::pipeline::learn;
use pdfa::sim::{generate_demos, two_stacks, Noise, TaskScript};
use pdfa_core::{Corpus, Demonstration, Pdfa, SubgoalConfig, Word, WorldState};
use proptest::prelude::*;

fn corpus() -> impl Strategy<Value = Corpus> {
    (1usize..4).prop_flat_map(|n| {
        let value = prop_oneof![1 => Just(None), 4 => (-1e6f64..1e6).prop_map(Some)];
        let state = prop::collection::vec(value, n).prop_map(|v| WorldState::new(v).unwrap());
        let demo = prop::collection::vec(state, 1..6).prop_map(|s| Demonstration::new(s).unwrap());
        prop::collection::vec(demo, 1..5).prop_map(move |d| Corpus::new(n, d).unwrap())
    })
}

fn words() -> impl Strategy<Value = (usize, Vec<Word>)> {
    (1usize..6).prop_flat_map(|a| {
        let word = Just((0..a).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_flat_map(move |w| (0..=a).prop_map(move |k| Word::from(&w[..k])));
        (Just(a), prop::collection::vec(word, 1..30))
    })
}

proptest! {
    #[test]
    fn demos_survive_a_round_trip(c in corpus()) {
        let text = format_demos(&c);
        let back = parse_demos(&text, Some(c.num_features())).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(format_demos(&back), text);
    }

    #[test]
    fn words_survive_a_round_trip((_, ws) in words()) {
        prop_assert_eq!(parse_words(&format_words(&ws)).unwrap(), ws);
    }

    #[test]
    fn models_survive_a_round_trip((a, ws) in words()) {
        let model = Model { pdfa: Pdfa::learn(a, &ws).unwrap(), goals: Vec::new() };
        let text = format_model(&model);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, &model);
        prop_assert_eq!(format_model(&back), text);
    }
}

#[test]
fn learned_model_with_subgoals_round_trips() {
    let script = TaskScript { noise: Noise { sigma: 0.003, dropout: 0.0 }, ..two_stacks() };
    let corpus = generate_demos(&script, 20, 5).unwrap();
    let learned = learn(&corpus, &script.candidates(), &SubgoalConfig::for_corpus(&corpus)).unwrap();
    let model = Model { pdfa: learned.pdfa, goals: learned.subgoals.goals };
    assert_eq!(model.goals.len(), 4);
    assert_eq!(parse_model(&format_model(&model)).unwrap(), model);
}

//! Property tests for the tokenizer, the samplers, and the corruption loop.

use multypo::engine::{corrupt, CorruptionConfig, Mode};
use multypo::lexicon::{detokenize, tokenize, IgnoreSet};
use multypo::sampling::position_weights;
use multypo::{LanguageId, LayoutRegistry};
use proptest::prelude::*;

fn eng() -> LanguageId {
    LanguageId::parse("eng_Latn").unwrap()
}

proptest! {
    #[test]
    fn tokenize_round_trips_any_string(s in "\\PC{0,200}") {
        let t = tokenize(&s);
        prop_assert_eq!(detokenize(&t), s);
    }

    #[test]
    fn tokenize_round_trips_whitespace_heavy(s in "[ \\t\\nабвxyz。]{0,100}") {
        let t = tokenize(&s);
        prop_assert_eq!(t.separators.len(), t.words.len() + 1);
        prop_assert_eq!(detokenize(&t), s);
    }

    #[test]
    fn position_weights_sum_to_one(len in 2usize..200) {
        let w = position_weights(len).unwrap();
        let sum: f64 = w.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert_eq!(w[0], 0.0);
    }

    #[test]
    fn corruption_count_identity(
        words in prop::collection::vec("[b-df-hj-np-tv-xz]{2,12}", 1..20),
        rate in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let registry = LayoutRegistry::builtin();
        let ignore = IgnoreSet::builtin(eng());
        let text = words.join(" ");
        let n = words.len();
        let config = CorruptionConfig::new(eng(), rate, seed, Mode::MulTypo).unwrap();
        let result = corrupt(&text, &config, &registry, &ignore).unwrap();
        let target = (rate * n as f64 + 0.5).floor() as usize;
        prop_assert_eq!(result.applied + result.shortfall, target);
        prop_assert_eq!(result.applied, result.events.len());
    }

    #[test]
    fn corruption_preserves_whitespace_and_word_heads(
        words in prop::collection::vec("[b-df-hj-np-tv-xz]{2,12}", 2..15),
        seed in any::<u64>(),
        naive in any::<bool>(),
    ) {
        let registry = LayoutRegistry::builtin();
        let ignore = IgnoreSet::builtin(eng());
        let text = words.join(" ");
        let mode = if naive { Mode::Naive } else { Mode::MulTypo };
        let config = CorruptionConfig::new(eng(), 0.7, seed, mode).unwrap();
        let result = corrupt(&text, &config, &registry, &ignore).unwrap();
        let ws_in = text.chars().filter(|c| c.is_whitespace()).count();
        let ws_out = result.text.chars().filter(|c| c.is_whitespace()).count();
        prop_assert_eq!(ws_in, ws_out);
        for ev in &result.events {
            prop_assert!(ev.position >= 1);
            prop_assert_eq!(ev.before.chars().next(), ev.after.chars().next());
            prop_assert_ne!(&ev.before, &ev.after);
        }
    }
}

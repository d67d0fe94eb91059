//! The four typo operations, the per-word validity check, and the main
//! corruption loop. Two modes: layout-constrained (the default) and a naive
//! baseline that applies the same operations without keyboard constraints.

use crate::error::{Error, Result};
use crate::language::LanguageId;
use crate::layout::{fold, Hand, KeyboardLayout};
use crate::lexicon::{detokenize, is_eligible, tokenize, IgnoreSet};
use crate::registry::LayoutRegistry;
use crate::sampling::{
    halve_weight, sample_index, sample_op_among, sample_position, word_weights, RandomSource,
    TypoOp,
};
use serde::{Deserialize, Serialize};

/// Corruption mode: keyboard-aware or the unconstrained baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    MulTypo,
    Naive,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "multypo" => Ok(Mode::MulTypo),
            "naive" => Ok(Mode::Naive),
            other => Err(format!("unknown mode '{other}' (expected multypo or naive)")),
        }
    }
}

pub const DEFAULT_MAX_RETRIES: u32 = 100;

/// Settings for one corruption invocation.
#[derive(Debug, Clone, Copy)]
pub struct CorruptionConfig {
    pub language: LanguageId,
    pub rate: f64,
    pub seed: u64,
    pub mode: Mode,
    pub max_retries: u32,
}

impl CorruptionConfig {
    pub fn new(language: LanguageId, rate: f64, seed: u64, mode: Mode) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) || rate.is_nan() {
            return Err(Error::RateOutOfRange(rate));
        }
        Ok(CorruptionConfig {
            language,
            rate,
            seed,
            mode,
            max_retries: DEFAULT_MAX_RETRIES,
        })
    }

    pub fn with_max_retries(mut self, max_retries: u32) -> Result<Self> {
        if max_retries == 0 {
            return Err(Error::ZeroRetries);
        }
        self.max_retries = max_retries;
        Ok(self)
    }
}

/// One applied typo: which word, where, what, and the word states around it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypoEvent {
    pub word_index: usize,
    pub position: usize,
    pub op: TypoOp,
    pub before: String,
    pub after: String,
}

/// Corrupted text plus the ordered event log and the shortfall record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptionResult {
    pub text: String,
    pub events: Vec<TypoEvent>,
    pub requested: usize,
    pub applied: usize,
    pub shortfall: usize,
}

/// Why a single operation attempt did not produce a typo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpFailure {
    /// The anchor character has no same-row neighbors in the layout.
    NoNeighbors,
    /// Transposition pair typed by the same hand, or a hand is unknown.
    SameHandOrUnknown,
    /// No swap partner: final word, or the whitespace was already appended.
    NoSwapPartner,
    /// The edit would create or destroy whitespace.
    WhitespaceEdit,
    /// Replacement pool is empty.
    NoCandidates,
}

type OpResult = std::result::Result<String, OpFailure>;

/// round(rate * word_count), half away from zero.
pub fn target_typo_count(rate: f64, word_count: usize) -> usize {
    (rate * word_count as f64 + 0.5).floor() as usize
}

fn case_match(reference: char, replacement: char) -> char {
    if reference.is_uppercase() {
        replacement.to_uppercase().next().unwrap_or(replacement)
    } else {
        replacement
    }
}

fn chars_of(word: &str) -> Vec<char> {
    word.chars().collect()
}

/// Replace the character at `position` with one of its same-row neighbors,
/// preserving case.
pub fn apply_replace(
    word: &str,
    position: usize,
    layout: &KeyboardLayout,
    rng: &mut RandomSource,
) -> OpResult {
    let mut chars = chars_of(word);
    debug_assert!(position >= 1 && position < chars.len());
    let original = chars[position];
    if original.is_whitespace() {
        return Err(OpFailure::WhitespaceEdit);
    }
    let neighbors = layout.neighbors(original);
    if neighbors.is_empty() {
        return Err(OpFailure::NoNeighbors);
    }
    let pick = neighbors[rng.uniform_index(neighbors.len())];
    chars[position] = case_match(original, pick);
    Ok(chars.into_iter().collect())
}

/// Insert a neighbor of the character at `position` immediately after it.
pub fn apply_insert(
    word: &str,
    position: usize,
    layout: &KeyboardLayout,
    rng: &mut RandomSource,
) -> OpResult {
    let mut chars = chars_of(word);
    debug_assert!(position >= 1 && position < chars.len());
    let reference = chars[position];
    let neighbors = layout.neighbors(reference);
    if neighbors.is_empty() {
        return Err(OpFailure::NoNeighbors);
    }
    let pick = neighbors[rng.uniform_index(neighbors.len())];
    chars.insert(position + 1, case_match(reference, pick));
    Ok(chars.into_iter().collect())
}

/// Delete the character at `position`. Whitespace inside a word (moved there
/// by an earlier transposition) is never deleted, so the total whitespace
/// count of the text stays fixed.
pub fn apply_delete(word: &str, position: usize) -> OpResult {
    let mut chars = chars_of(word);
    debug_assert!(position >= 1 && position < chars.len() && chars.len() >= 2);
    if chars[position].is_whitespace() {
        return Err(OpFailure::WhitespaceEdit);
    }
    chars.remove(position);
    Ok(chars.into_iter().collect())
}

/// Swap the characters at `position` and `position + 1`, permitted only
/// between characters typed by different hands (whitespace is neutral and
/// pairs with either hand). When `position` targets the last character of a
/// non-final word, a whitespace character is first appended so the final
/// character can swap across the word boundary; the returned flag reports
/// that append so the caller can take the space from the following
/// separator.
pub fn apply_transpose(
    word: &str,
    position: usize,
    layout: &KeyboardLayout,
    is_final_word: bool,
    space_already_appended: bool,
    check_hands: bool,
) -> std::result::Result<(String, bool), OpFailure> {
    let mut chars = chars_of(word);
    debug_assert!(position >= 1 && position < chars.len());
    let mut appended = false;
    if position == chars.len() - 1 {
        if is_final_word || space_already_appended {
            return Err(OpFailure::NoSwapPartner);
        }
        chars.push(' ');
        appended = true;
    }
    let (a, b) = (chars[position], chars[position + 1]);
    if check_hands {
        let (ha, hb) = (layout.hand_of(a), layout.hand_of(b));
        if ha == Hand::Unknown || hb == Hand::Unknown {
            return Err(OpFailure::SameHandOrUnknown);
        }
        let crosses = ha == Hand::Neutral || hb == Hand::Neutral || ha != hb;
        if !crosses {
            return Err(OpFailure::SameHandOrUnknown);
        }
    }
    chars.swap(position, position + 1);
    if chars.last().is_some_and(|c| c.is_whitespace()) {
        // a mid-word space must not drift to the boundary
        return Err(OpFailure::WhitespaceEdit);
    }
    Ok((chars.into_iter().collect(), appended))
}

/// Naive replacement: uniform over the layout alphabet, excluding the
/// original character. No adjacency constraint.
pub fn apply_replace_naive(
    word: &str,
    position: usize,
    layout: &KeyboardLayout,
    rng: &mut RandomSource,
) -> OpResult {
    let mut chars = chars_of(word);
    debug_assert!(position >= 1 && position < chars.len());
    let original = chars[position];
    if original.is_whitespace() {
        return Err(OpFailure::WhitespaceEdit);
    }
    let folded = fold(original);
    let candidates: Vec<char> = layout
        .alphabet()
        .iter()
        .copied()
        .filter(|&c| c != folded)
        .collect();
    if candidates.is_empty() {
        return Err(OpFailure::NoCandidates);
    }
    let pick = candidates[rng.uniform_index(candidates.len())];
    chars[position] = case_match(original, pick);
    Ok(chars.into_iter().collect())
}

/// Naive insertion: uniform over the full layout alphabet.
pub fn apply_insert_naive(
    word: &str,
    position: usize,
    layout: &KeyboardLayout,
    rng: &mut RandomSource,
) -> OpResult {
    let mut chars = chars_of(word);
    debug_assert!(position >= 1 && position < chars.len());
    let reference = chars[position];
    let alphabet = layout.alphabet();
    if alphabet.is_empty() {
        return Err(OpFailure::NoCandidates);
    }
    let pick = alphabet[rng.uniform_index(alphabet.len())];
    chars.insert(position + 1, case_match(reference, pick));
    Ok(chars.into_iter().collect())
}

/// A candidate edit is valid iff it differs from the current word state and
/// from every earlier state (no no-ops, no reverts).
pub fn is_valid(candidate: &str, history: &[String]) -> bool {
    !history.iter().any(|state| state == candidate)
}

struct WordState {
    history: Vec<String>,
    space_appended: bool,
}

impl WordState {
    fn current(&self) -> &str {
        self.history.last().expect("history starts non-empty")
    }
}

/// Run the full corruption loop over `text`.
pub fn corrupt(
    text: &str,
    config: &CorruptionConfig,
    registry: &LayoutRegistry,
    ignore: &IgnoreSet,
) -> Result<CorruptionResult> {
    if !(0.0..=1.0).contains(&config.rate) || config.rate.is_nan() {
        return Err(Error::RateOutOfRange(config.rate));
    }
    if config.max_retries == 0 {
        return Err(Error::ZeroRetries);
    }
    let layout = registry.get(config.language);
    let mut tokens = tokenize(text);
    let word_count = tokens.words.len();
    let requested = target_typo_count(config.rate, word_count);

    let eligibility: Vec<bool> = tokens
        .words
        .iter()
        .map(|w| is_eligible(w, ignore))
        .collect();
    let mut weights = word_weights(&tokens.words, &eligibility);
    let mut states: Vec<WordState> = tokens
        .words
        .iter()
        .map(|w| WordState {
            history: vec![w.clone()],
            space_appended: false,
        })
        .collect();

    let mut rng = RandomSource::new(config.seed);
    let mut events = Vec::with_capacity(requested);
    let mut retries = 0u32;

    while events.len() < requested {
        if weights.total() <= 0.0 {
            break;
        }
        let word_index = sample_index(&weights, &mut rng)?;
        let is_final_word = word_index == word_count - 1;
        let mut remaining: Vec<TypoOp> = TypoOp::ALL.to_vec();
        let mut succeeded = false;

        while let Some(op) = sample_op_among(&remaining, &mut rng) {
            let state = &states[word_index];
            let length = state.current().chars().count();
            if length < 2 {
                break;
            }
            let position = sample_position(length, &mut rng)?;
            let attempt: std::result::Result<(String, bool), OpFailure> = match (op, config.mode) {
                (TypoOp::Replace, Mode::MulTypo) => {
                    apply_replace(state.current(), position, layout, &mut rng).map(|w| (w, false))
                }
                (TypoOp::Replace, Mode::Naive) => {
                    apply_replace_naive(state.current(), position, layout, &mut rng)
                        .map(|w| (w, false))
                }
                (TypoOp::Insert, Mode::MulTypo) => {
                    apply_insert(state.current(), position, layout, &mut rng).map(|w| (w, false))
                }
                (TypoOp::Insert, Mode::Naive) => {
                    apply_insert_naive(state.current(), position, layout, &mut rng)
                        .map(|w| (w, false))
                }
                (TypoOp::Delete, _) => apply_delete(state.current(), position).map(|w| (w, false)),
                (TypoOp::Transpose, mode) => apply_transpose(
                    state.current(),
                    position,
                    layout,
                    is_final_word,
                    state.space_appended,
                    mode == Mode::MulTypo,
                ),
            };

            match attempt {
                Ok((candidate, appended)) if is_valid(&candidate, &state.history) => {
                    events.push(TypoEvent {
                        word_index,
                        position,
                        op,
                        before: state.current().to_string(),
                        after: candidate.clone(),
                    });
                    if appended {
                        // the space moves from the separator into the word
                        let sep = &mut tokens.separators[word_index + 1];
                        debug_assert!(!sep.is_empty());
                        let rest: String = sep.chars().skip(1).collect();
                        *sep = rest;
                    }
                    let state = &mut states[word_index];
                    state.history.push(candidate);
                    state.space_appended |= appended;
                    halve_weight(&mut weights, word_index)?;
                    if state.current().chars().count() < 2 {
                        weights.set_zero(word_index);
                    }
                    succeeded = true;
                    break;
                }
                _ => {
                    remaining.retain(|&o| o != op);
                }
            }
        }

        if !succeeded {
            retries += 1;
            if retries >= config.max_retries {
                break;
            }
        }
    }

    let applied = events.len();
    for (word, state) in tokens.words.iter_mut().zip(&states) {
        *word = state.current().to_string();
    }
    Ok(CorruptionResult {
        text: detokenize(&tokens),
        events,
        requested,
        applied,
        shortfall: requested - applied,
    })
}

//! Seeded randomness and the three weighted samplers: word, position, and
//! typo operation.
//!
//! The generator is ChaCha8 seeded from a single 64-bit value, so the full
//! draw sequence is identical across runs and platforms. One corruption
//! invocation owns one stream and draws in a fixed order
//! (word, operation, position).

use crate::error::{Error, Result};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The four canonical typing-error classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypoOp {
    Replace,
    Insert,
    Delete,
    Transpose,
}

impl TypoOp {
    pub const ALL: [TypoOp; 4] = [
        TypoOp::Replace,
        TypoOp::Insert,
        TypoOp::Delete,
        TypoOp::Transpose,
    ];

    /// Base sampling probability. Insertions are rarer than the other three.
    pub fn probability(self) -> f64 {
        match self {
            TypoOp::Insert => 0.1525,
            _ => 0.2825,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TypoOp::Replace => "replace",
            TypoOp::Insert => "insert",
            TypoOp::Delete => "delete",
            TypoOp::Transpose => "transpose",
        }
    }
}

impl std::fmt::Display for TypoOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Deterministic random stream. Identical seed, identical draws, everywhere.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..n`.
    pub fn uniform_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_f64() * n as f64) as usize).min(n - 1)
    }
}

/// Per-word sampling weights: sqrt of character length for eligible words,
/// halved after every hit, zero for ineligible words.
#[derive(Debug, Clone, PartialEq)]
pub struct WordWeights {
    weights: Vec<f64>,
}

impl WordWeights {
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, index: usize) -> f64 {
        self.weights[index]
    }

    pub fn set_zero(&mut self, index: usize) {
        self.weights[index] = 0.0;
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// sqrt(|w|) per eligible word, 0 otherwise.
pub fn word_weights(words: &[String], eligibility: &[bool]) -> WordWeights {
    debug_assert_eq!(words.len(), eligibility.len());
    let weights = words
        .iter()
        .zip(eligibility)
        .map(|(w, &ok)| {
            if ok {
                (w.chars().count() as f64).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    WordWeights { weights }
}

/// Categorical draw proportional to the weights.
pub fn sample_index(weights: &WordWeights, rng: &mut RandomSource) -> Result<usize> {
    sample_weighted(&weights.weights, rng).ok_or(Error::NoEligibleWords)
}

fn sample_weighted(weights: &[f64], rng: &mut RandomSource) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let mut target = rng.next_f64() * total;
    let mut last_positive = None;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        last_positive = Some(i);
        if target < w {
            return Some(i);
        }
        target -= w;
    }
    last_positive // float round-off lands on the last positive weight
}

/// Normalized position weights over a word of `length` characters. The first
/// character gets weight 0 and is never selected; the second gets raw weight
/// 0.1, the final 0.2, and interior positions interpolate linearly between
/// those two anchors.
pub fn position_weights(length: usize) -> Result<Vec<f64>> {
    if length < 2 {
        return Err(Error::WordTooShort(length));
    }
    let mut raw = vec![0.0; length];
    if length == 2 {
        // the second char is also the last; the last-character weight wins
        raw[1] = 0.2;
    } else {
        let steps = (length - 2) as f64;
        for (i, slot) in raw.iter_mut().enumerate().skip(1) {
            *slot = 0.1 + 0.1 * (i - 1) as f64 / steps;
        }
    }
    let total: f64 = raw.iter().sum();
    for w in &mut raw {
        *w /= total;
    }
    Ok(raw)
}

/// Draw a character position from the length-aware distribution; never 0.
pub fn sample_position(length: usize, rng: &mut RandomSource) -> Result<usize> {
    let weights = position_weights(length)?;
    let idx = sample_weighted(&weights, rng).expect("position weights always sum to 1");
    debug_assert!(idx >= 1);
    Ok(idx)
}

/// Draw a typo operation: insert 15.25%, each of the others 28.25%.
pub fn sample_op(rng: &mut RandomSource) -> TypoOp {
    sample_op_among(&TypoOp::ALL, rng).expect("full op set is non-empty")
}

/// Draw among a subset of operations, renormalizing their base
/// probabilities. Used when earlier operations failed for a word.
pub fn sample_op_among(ops: &[TypoOp], rng: &mut RandomSource) -> Option<TypoOp> {
    if ops.is_empty() {
        return None;
    }
    let weights: Vec<f64> = ops.iter().map(|op| op.probability()).collect();
    sample_weighted(&weights, rng).map(|i| ops[i])
}

/// Halve the weight of a just-hit word.
pub fn halve_weight(weights: &mut WordWeights, index: usize) -> Result<()> {
    if weights.weights[index] <= 0.0 {
        return Err(Error::HalveZeroWeight(index));
    }
    weights.weights[index] /= 2.0;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_probabilities_sum_to_one() {
        let sum: f64 = TypoOp::ALL.iter().map(|op| op.probability()).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn word_weights_sqrt_lengths() {
        let words: Vec<String> = ["hi", "there"].iter().map(|s| s.to_string()).collect();
        let w = word_weights(&words, &[true, true]);
        assert!((w.get(0) - 2f64.sqrt()).abs() < 1e-12);
        assert!((w.get(1) - 5f64.sqrt()).abs() < 1e-12);
        // sqrt(2)/(sqrt(2)+sqrt(5)) = 0.38742588672279304
        let p0 = w.get(0) / w.total();
        assert!((p0 - 0.38742588672279304).abs() < 1e-12);
    }

    #[test]
    fn ineligible_words_get_zero() {
        let words: Vec<String> = ["a", "word"].iter().map(|s| s.to_string()).collect();
        let w = word_weights(&words, &[false, true]);
        assert_eq!(w.get(0), 0.0);
        let mut rng = RandomSource::new(1);
        for _ in 0..100 {
            assert_eq!(sample_index(&w, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn all_zero_weights_error() {
        let w = word_weights(&["a".to_string()], &[false]);
        let mut rng = RandomSource::new(0);
        assert!(matches!(
            sample_index(&w, &mut rng),
            Err(Error::NoEligibleWords)
        ));
    }

    #[test]
    fn position_weights_hand_computed() {
        let w = position_weights(4).unwrap();
        let expect = [0.0, 2.0 / 9.0, 3.0 / 9.0, 4.0 / 9.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{w:?}");
        }
        let w3 = position_weights(3).unwrap();
        let expect3 = [0.0, 1.0 / 3.0, 2.0 / 3.0];
        for (a, b) in w3.iter().zip(expect3) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(position_weights(2).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn position_weights_reject_short_words() {
        assert!(matches!(position_weights(1), Err(Error::WordTooShort(1))));
        assert!(matches!(position_weights(0), Err(Error::WordTooShort(0))));
    }

    #[test]
    fn position_weights_normalized_and_monotone() {
        for len in 2..50 {
            let w = position_weights(len).unwrap();
            let sum: f64 = w.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            assert_eq!(w[0], 0.0);
            for i in 2..len {
                assert!(w[i] >= w[i - 1]);
            }
        }
    }

    #[test]
    fn sample_position_never_zero() {
        let mut rng = RandomSource::new(42);
        for _ in 0..10_000 {
            assert!(sample_position(7, &mut rng).unwrap() >= 1);
        }
        for _ in 0..100 {
            assert_eq!(sample_position(2, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn halving() {
        let words: Vec<String> = ["ab", "abcd"].iter().map(|s| s.to_string()).collect();
        let mut w = word_weights(&words, &[true, true]);
        let before = w.get(1);
        halve_weight(&mut w, 1).unwrap();
        assert!((w.get(1) - before / 2.0).abs() < 1e-12);
        assert!((w.get(0) - 2f64.sqrt()).abs() < 1e-12);
        w.set_zero(0);
        assert!(matches!(
            halve_weight(&mut w, 0),
            Err(Error::HalveZeroWeight(0))
        ));
    }

    #[test]
    fn determinism_same_seed_same_draws() {
        let mut a = RandomSource::new(99);
        let mut b = RandomSource::new(99);
        for _ in 0..1000 {
            assert_eq!(a.next_f64().to_bits(), b.next_f64().to_bits());
        }
    }

    #[test]
    fn monte_carlo_op_mix() {
        let mut rng = RandomSource::new(7);
        let n = 1_000_000;
        let mut counts = [0u64; 4];
        for _ in 0..n {
            let op = sample_op(&mut rng);
            counts[TypoOp::ALL.iter().position(|&o| o == op).unwrap()] += 1;
        }
        let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
        assert!((freqs[1] - 0.1525).abs() < 0.0025, "insert {}", freqs[1]);
        for i in [0, 2, 3] {
            assert!((freqs[i] - 0.2825).abs() < 0.003, "op {i}: {}", freqs[i]);
        }
    }

    #[test]
    fn monte_carlo_weighted_index() {
        let words: Vec<String> = ["abc", "abcabcabc"].iter().map(|s| s.to_string()).collect();
        // weights sqrt(3) and sqrt(9) = 3, so index 1 has p = 3/(3+sqrt(3))
        let w = word_weights(&words, &[true, true]);
        let expect = 3.0 / (3.0 + 3f64.sqrt());
        let mut rng = RandomSource::new(11);
        let n = 1_000_000;
        let mut hits = 0u64;
        for _ in 0..n {
            if sample_index(&w, &mut rng).unwrap() == 1 {
                hits += 1;
            }
        }
        let freq = hits as f64 / n as f64;
        assert!((freq - expect).abs() < 0.003, "{freq} vs {expect}");
    }
}

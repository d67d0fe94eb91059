//! Empirical self-validation of the sampling machinery and the layout
//! constraints. Tolerances are 6-sigma binomial half-widths at the requested
//! sample size, so a correct implementation essentially never fails a check.

use crate::engine::{corrupt, CorruptionConfig, Mode};
use crate::error::{Error, Result};
use crate::language::LanguageId;
use crate::layout::{fold, Hand};
use crate::lexicon::{is_eligible, is_ignored, tokenize, IgnoreSet};
use crate::registry::LayoutRegistry;
use crate::sampling::{
    position_weights, sample_op, sample_position, RandomSource, TypoOp,
};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

pub const MIN_SAMPLES: u64 = 100_000;

/// One expected-vs-observed comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        let passed = (observed - expected).abs() <= tolerance;
        CheckResult {
            name: name.into(),
            expected,
            observed,
            tolerance,
            passed,
        }
    }
}

/// All checks plus the overall verdict: pass iff every check passes.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, checks: Vec<CheckResult>) {
        self.checks.extend(checks);
    }

    pub fn render_text(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0)
            .max(5);
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<width$}  expected {:>10.6}  observed {:>10.6}  tol {:>9.6}  {}\n",
                c.name,
                c.expected,
                c.observed,
                c.tolerance,
                if c.passed { "pass" } else { "FAIL" },
            ));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.passed() { "pass" } else { "FAIL" }
        ));
        out
    }
}

/// 6-sigma half-width of a binomial proportion at `n` samples.
pub fn binomial_tolerance(p: f64, n: u64) -> f64 {
    6.0 * (p * (1.0 - p) / n as f64).sqrt()
}

/// Draw `samples` operations and compare category frequencies to the
/// specified mix (insert 15.25%, others 28.25% each).
pub fn validate_operation_mix(samples: u64, seed: u64) -> Result<Vec<CheckResult>> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    let mut rng = RandomSource::new(seed);
    let mut counts = [0u64; 4];
    for _ in 0..samples {
        let op = sample_op(&mut rng);
        counts[TypoOp::ALL.iter().position(|&o| o == op).unwrap()] += 1;
    }
    Ok(TypoOp::ALL
        .iter()
        .zip(counts)
        .map(|(op, count)| {
            let expected = op.probability();
            CheckResult::new(
                format!("op_mix.{op}"),
                expected,
                count as f64 / samples as f64,
                binomial_tolerance(expected, samples),
            )
        })
        .collect())
}

/// Draw `samples` positions for a word of `word_length` characters and
/// compare per-index frequencies to the analytic weights. A single index-0
/// hit fails.
pub fn validate_position_distribution(
    word_length: usize,
    samples: u64,
    seed: u64,
) -> Result<Vec<CheckResult>> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    let expected = position_weights(word_length)?;
    let mut rng = RandomSource::new(seed);
    let mut counts = vec![0u64; word_length];
    for _ in 0..samples {
        counts[sample_position(word_length, &mut rng)?] += 1;
    }
    Ok(expected
        .iter()
        .enumerate()
        .map(|(idx, &p)| {
            let tolerance = if idx == 0 {
                0.0 // hard invariant: never selected
            } else {
                binomial_tolerance(p, samples)
            };
            CheckResult::new(
                format!("position.len{word_length}.idx{idx}"),
                p,
                counts[idx] as f64 / samples as f64,
                tolerance,
            )
        })
        .collect())
}

/// Run `trials` single-typo corruptions of `sentence` and compare per-word
/// hit frequencies to the normalized sqrt-length weights.
pub fn validate_word_length_bias(
    sentence: &str,
    trials: u64,
    seed: u64,
    language: LanguageId,
    registry: &LayoutRegistry,
    ignore: &IgnoreSet,
) -> Result<Vec<CheckResult>> {
    if trials < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: trials,
        });
    }
    let tokens = tokenize(sentence);
    let n = tokens.words.len();
    let eligible: Vec<bool> = tokens
        .words
        .iter()
        .map(|w| is_eligible(w, ignore))
        .collect();
    if eligible.iter().filter(|&&e| e).count() < 2 {
        return Err(Error::NoEligibleWords);
    }
    let weights: Vec<f64> = tokens
        .words
        .iter()
        .zip(&eligible)
        .map(|(w, &e)| if e { (w.chars().count() as f64).sqrt() } else { 0.0 })
        .collect();
    let total: f64 = weights.iter().sum();

    let rate = 1.0 / n as f64; // rounds to exactly one typo
    let mut hits = vec![0u64; n];
    for trial in 0..trials {
        let config = CorruptionConfig::new(language, rate, seed.wrapping_add(trial), Mode::MulTypo)?;
        let result = corrupt(sentence, &config, registry, ignore)?;
        if let Some(ev) = result.events.first() {
            hits[ev.word_index] += 1;
        }
    }
    Ok(weights
        .iter()
        .enumerate()
        .map(|(idx, &w)| {
            let expected = w / total;
            let tolerance = if expected == 0.0 {
                0.0
            } else {
                binomial_tolerance(expected, trials)
            };
            CheckResult::new(
                format!("word_bias.word{idx}"),
                expected,
                hits[idx] as f64 / trials as f64,
                tolerance,
            )
        })
        .collect())
}

/// An event as it appears in the event log.
#[derive(Debug, Deserialize)]
struct LoggedEvent {
    word_index: usize,
    position: usize,
    op: TypoOp,
    before: String,
    after: String,
}

#[derive(Debug, Deserialize)]
struct LoggedDocument {
    doc_id: String,
    language: String,
    #[allow(dead_code)]
    rate: f64,
    #[allow(dead_code)]
    seed: u64,
    events: Vec<LoggedEvent>,
}

/// Post-hoc audit statistics over an event log.
#[derive(Debug, Clone, Default)]
pub struct EventAudit {
    pub total_events: u64,
    /// Replace and insert events, and how many introduced a same-row
    /// neighbor of their reference character.
    pub neighbor_checked: u64,
    pub neighbor_hits: u64,
    /// Sum of per-event neighbor probabilities under unconstrained drawing;
    /// dividing by `neighbor_checked` gives the coincidence fraction an
    /// unconstrained generator would show.
    pub expected_neighbor_sum: f64,
    pub transpose_events: u64,
    pub cross_hand_hits: u64,
    pub position_zero_events: u64,
    pub ignored_word_events: u64,
    pub malformed_events: u64,
    /// Human-readable description of the first violating event, if any.
    pub first_violation: Option<String>,
}

impl EventAudit {
    pub fn neighbor_fraction(&self) -> f64 {
        if self.neighbor_checked == 0 {
            1.0
        } else {
            self.neighbor_hits as f64 / self.neighbor_checked as f64
        }
    }

    pub fn expected_neighbor_fraction(&self) -> f64 {
        if self.neighbor_checked == 0 {
            0.0
        } else {
            self.expected_neighbor_sum / self.neighbor_checked as f64
        }
    }

    pub fn cross_hand_fraction(&self) -> f64 {
        if self.transpose_events == 0 {
            1.0
        } else {
            self.cross_hand_hits as f64 / self.transpose_events as f64
        }
    }

    fn note_violation(&mut self, doc_id: &str, ev: &LoggedEvent, what: &str) {
        if self.first_violation.is_none() {
            self.first_violation = Some(format!(
                "doc {doc_id} word {} pos {} {}: {} ('{}' -> '{}')",
                ev.word_index, ev.position, ev.op, what, ev.before, ev.after
            ));
        }
    }
}

/// Audit every event in a JSONL event log against the layout constraints.
pub fn audit_event_log(
    log_text: &str,
    registry: &LayoutRegistry,
    ignore_sets: &HashMap<LanguageId, IgnoreSet>,
) -> Result<EventAudit> {
    let mut audit = EventAudit::default();
    let mut seen_words: HashSet<(String, usize)> = HashSet::new();
    for (idx, line) in log_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: LoggedDocument = serde_json::from_str(line).map_err(|e| Error::BadRecord {
            line: idx + 1,
            detail: e.to_string(),
        })?;
        let language = LanguageId::parse(&doc.language)?;
        let layout = registry.get(language);
        for ev in &doc.events {
            audit.total_events += 1;
            if ev.position == 0 {
                audit.position_zero_events += 1;
                audit.note_violation(&doc.doc_id, ev, "position 0");
            }
            if seen_words.insert((doc.doc_id.clone(), ev.word_index)) {
                if let Some(set) = ignore_sets.get(&language) {
                    if is_ignored(&ev.before, set) {
                        audit.ignored_word_events += 1;
                        audit.note_violation(&doc.doc_id, ev, "ignored word modified");
                    }
                }
            }
            let before: Vec<char> = ev.before.chars().collect();
            let after: Vec<char> = ev.after.chars().collect();
            match ev.op {
                TypoOp::Replace => {
                    let alphabet_len = layout.alphabet().len() as f64;
                    match (before.get(ev.position), after.get(ev.position)) {
                        (Some(&orig), Some(&introduced)) => {
                            audit.neighbor_checked += 1;
                            let neighbors = layout.neighbors(orig);
                            if neighbors.contains(&fold(introduced)) {
                                audit.neighbor_hits += 1;
                            } else {
                                audit.note_violation(&doc.doc_id, ev, "non-neighbor replacement");
                            }
                            audit.expected_neighbor_sum +=
                                neighbors.len() as f64 / (alphabet_len - 1.0);
                        }
                        _ => audit.malformed_events += 1,
                    }
                }
                TypoOp::Insert => {
                    let alphabet_len = layout.alphabet().len() as f64;
                    match (before.get(ev.position), after.get(ev.position + 1)) {
                        (Some(&reference), Some(&introduced)) => {
                            audit.neighbor_checked += 1;
                            let neighbors = layout.neighbors(reference);
                            if neighbors.contains(&fold(introduced)) {
                                audit.neighbor_hits += 1;
                            } else {
                                audit.note_violation(&doc.doc_id, ev, "non-neighbor insertion");
                            }
                            audit.expected_neighbor_sum += neighbors.len() as f64 / alphabet_len;
                        }
                        _ => audit.malformed_events += 1,
                    }
                }
                TypoOp::Delete => {}
                TypoOp::Transpose => {
                    match (after.get(ev.position), after.get(ev.position + 1)) {
                        (Some(&a), Some(&b)) => {
                            audit.transpose_events += 1;
                            let (ha, hb) = (layout.hand_of(a), layout.hand_of(b));
                            let crosses = ha != Hand::Unknown
                                && hb != Hand::Unknown
                                && (ha == Hand::Neutral || hb == Hand::Neutral || ha != hb);
                            if crosses {
                                audit.cross_hand_hits += 1;
                            } else {
                                audit.note_violation(&doc.doc_id, ev, "same-hand transposition");
                            }
                        }
                        _ => audit.malformed_events += 1,
                    }
                }
            }
        }
    }
    Ok(audit)
}

/// Turn an audit of a layout-constrained log into pass/fail checks: every
/// replacement and insertion must be a neighbor, every transposition
/// cross-hand, no position-0 events, no ignored-word edits.
pub fn validate_constraints(
    log_text: &str,
    registry: &LayoutRegistry,
    ignore_sets: &HashMap<LanguageId, IgnoreSet>,
) -> Result<Vec<CheckResult>> {
    let audit = audit_event_log(log_text, registry, ignore_sets)?;
    Ok(vec![
        CheckResult::new("constraints.neighbor_fraction", 1.0, audit.neighbor_fraction(), 0.0),
        CheckResult::new("constraints.cross_hand_fraction", 1.0, audit.cross_hand_fraction(), 0.0),
        CheckResult::new(
            "constraints.position_zero_events",
            0.0,
            audit.position_zero_events as f64,
            0.0,
        ),
        CheckResult::new(
            "constraints.ignored_word_events",
            0.0,
            audit.ignored_word_events as f64,
            0.0,
        ),
        CheckResult::new(
            "constraints.malformed_events",
            0.0,
            audit.malformed_events as f64,
            0.0,
        ),
    ])
}

/// Builtin ignore sets for all languages, keyed for the audit.
pub fn builtin_ignore_sets() -> HashMap<LanguageId, IgnoreSet> {
    LanguageId::all()
        .map(|l| (l, IgnoreSet::builtin(l)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{process_corpus, InputFormat};

    fn eng() -> LanguageId {
        LanguageId::parse("eng_Latn").unwrap()
    }

    #[test]
    fn op_mix_passes_at_one_hundred_thousand() {
        let checks = validate_operation_mix(200_000, 17).unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn op_mix_rejects_tiny_samples() {
        assert!(matches!(
            validate_operation_mix(10, 1),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn rigged_uniform_mix_fails() {
        // a uniform generator is off by |0.25 - 0.1525| on insert
        let c = CheckResult::new(
            "op_mix.insert",
            0.1525,
            0.25,
            binomial_tolerance(0.1525, 1_000_000),
        );
        assert!(!c.passed);
    }

    #[test]
    fn position_distribution_passes() {
        for len in [2, 3, 4] {
            let checks = validate_position_distribution(len, 200_000, 23).unwrap();
            assert!(checks.iter().all(|c| c.passed), "len {len}: {checks:?}");
            assert_eq!(checks[0].observed, 0.0);
        }
    }

    #[test]
    fn word_bias_precondition() {
        let registry = LayoutRegistry::builtin();
        let ignore = IgnoreSet::builtin(eng());
        assert!(matches!(
            validate_word_length_bias("1 2 3", 100_000, 1, eng(), &registry, &ignore),
            Err(Error::NoEligibleWords)
        ));
    }

    #[test]
    fn audit_passes_on_engine_log_and_flags_tampering() {
        let registry = LayoutRegistry::builtin();
        let ignore = IgnoreSet::builtin(eng());
        let config = CorruptionConfig::new(eng(), 0.7, 11, Mode::MulTypo).unwrap();
        let input: String = (0..50)
            .map(|i| format!("plainly worded material for auditing events {i}\n"))
            .collect();
        let mut out = Vec::new();
        let mut events = Vec::new();
        process_corpus(
            input.as_bytes(),
            &mut out,
            Some(&mut events),
            &InputFormat::Plain,
            &config,
            &registry,
            &ignore,
            1,
        )
        .unwrap();
        let log = String::from_utf8(events).unwrap();
        let sets = builtin_ignore_sets();
        let checks = validate_constraints(&log, &registry, &sets).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");

        // inject a same-hand transpose: 'a' and 's' are both left-hand
        let tampered = format!(
            "{log}{}\n",
            serde_json::json!({
                "doc_id": "t", "language": "eng_Latn", "rate": 0.5, "seed": 0,
                "events": [{"word_index": 0, "position": 1, "op": "transpose",
                             "before": "xsay", "after": "xasy"}]
            })
        );
        let audit = audit_event_log(&tampered, &registry, &sets).unwrap();
        assert!(audit.cross_hand_fraction() < 1.0);
        let violation = audit.first_violation.unwrap();
        assert!(violation.contains("same-hand"), "{violation}");
    }

    #[test]
    fn naive_log_fails_neighbor_audit() {
        let registry = LayoutRegistry::builtin();
        let ignore = IgnoreSet::builtin(eng());
        let config = CorruptionConfig::new(eng(), 0.7, 13, Mode::Naive).unwrap();
        let input: String = (0..100)
            .map(|i| format!("unconstrained corruption makes distant substitutions {i}\n"))
            .collect();
        let mut out = Vec::new();
        let mut events = Vec::new();
        process_corpus(
            input.as_bytes(),
            &mut out,
            Some(&mut events),
            &InputFormat::Plain,
            &config,
            &registry,
            &ignore,
            1,
        )
        .unwrap();
        let log = String::from_utf8(events).unwrap();
        let audit = audit_event_log(&log, &registry, &builtin_ignore_sets()).unwrap();
        assert!(audit.neighbor_checked > 0);
        assert!(audit.neighbor_fraction() < 0.5, "{}", audit.neighbor_fraction());
    }
}

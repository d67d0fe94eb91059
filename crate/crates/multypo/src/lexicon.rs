//! Reversible whitespace tokenization and per-word eligibility rules.

use crate::error::{Error, Result};
use crate::language::LanguageId;
use std::path::Path;

/// Words plus the whitespace runs between them. Concatenating
/// `separators[0], words[0], separators[1], words[1], ...` reproduces the
/// input byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedText {
    pub words: Vec<String>,
    pub separators: Vec<String>,
}

/// Split into maximal non-whitespace runs. Punctuation stays attached to its
/// word.
pub fn tokenize(text: &str) -> TokenizedText {
    let mut words = Vec::new();
    let mut separators = Vec::new();
    let mut current = String::new();
    let mut in_word = false;
    // leading separator, possibly empty
    separators.push(String::new());
    for ch in text.chars() {
        if ch.is_whitespace() {
            if in_word {
                words.push(std::mem::take(&mut current));
                separators.push(String::new());
                in_word = false;
            }
            separators.last_mut().unwrap().push(ch);
        } else {
            in_word = true;
            current.push(ch);
        }
    }
    if in_word {
        words.push(current);
        separators.push(String::new());
    }
    debug_assert_eq!(separators.len(), words.len() + 1);
    TokenizedText { words, separators }
}

/// Inverse of [`tokenize`].
pub fn detokenize(tokens: &TokenizedText) -> String {
    let mut out = String::new();
    for (i, sep) in tokens.separators.iter().enumerate() {
        out.push_str(sep);
        if let Some(word) = tokens.words.get(i) {
            out.push_str(word);
        }
    }
    out
}

/// Per-language protected strings: any word containing one of these entries
/// is never corrupted. Always holds the ten ASCII digits; files add native
/// digits and number words.
#[derive(Debug, Clone)]
pub struct IgnoreSet {
    language: LanguageId,
    entries: Vec<String>,
}

impl IgnoreSet {
    /// Build from newline-separated entries (`#` comments allowed). ASCII
    /// digits are appended unconditionally.
    pub fn parse(language: LanguageId, source_text: &str) -> Self {
        let mut entries: Vec<String> = source_text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_lowercase())
            .collect();
        for d in '0'..='9' {
            entries.push(d.to_string());
        }
        entries.sort();
        entries.dedup();
        IgnoreSet { language, entries }
    }

    pub fn load(language: LanguageId, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Ok(Self::parse(language, &text))
    }

    /// The compiled-in set for `language`.
    pub fn builtin(language: LanguageId) -> Self {
        let text = BUILTIN_IGNORE_SETS
            .iter()
            .find(|(code, _)| *code == language.code())
            .map(|(_, text)| *text)
            .expect("every supported language ships an ignore set");
        Self::parse(language, text)
    }

    pub fn language(&self) -> LanguageId {
        self.language
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }
}

macro_rules! builtin_ignore_sets {
    ($($code:literal),+ $(,)?) => {
        &[$(($code, include_str!(concat!("../data/ignore/", $code, ".ignore")))),+]
    };
}

pub const BUILTIN_IGNORE_SETS: &[(&str, &str)] = builtin_ignore_sets!(
    "ara_Arab", "ben_Beng", "deu_Latn", "ell_Grek", "eng_Latn", "fra_Latn",
    "heb_Hebr", "hin_Deva", "hye_Armn", "kat_Geor", "rus_Cyrl", "tam_Taml",
);

/// True iff some entry of the set is a substring of the word, case folded.
pub fn is_ignored(word: &str, ignore_set: &IgnoreSet) -> bool {
    let folded = word.to_lowercase();
    ignore_set.entries.iter().any(|e| folded.contains(e.as_str()))
}

/// A word can receive typos iff it is at least two characters long and not
/// protected by the ignore set.
pub fn is_eligible(word: &str, ignore_set: &IgnoreSet) -> bool {
    word.chars().count() >= 2 && !is_ignored(word, ignore_set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eng() -> IgnoreSet {
        IgnoreSet::builtin(LanguageId::parse("eng_Latn").unwrap())
    }

    #[test]
    fn tokenize_simple_sentence() {
        let t = tokenize("Colorless green ideas smell furiously.");
        assert_eq!(
            t.words,
            vec!["Colorless", "green", "ideas", "smell", "furiously."]
        );
        assert_eq!(t.separators, vec!["", " ", " ", " ", " ", ""]);
    }

    #[test]
    fn tokenize_irregular_whitespace_round_trips() {
        let input = "  a  b ";
        let t = tokenize(input);
        assert_eq!(t.words, vec!["a", "b"]);
        assert_eq!(t.separators, vec!["  ", "  ", " "]);
        assert_eq!(detokenize(&t), input);
    }

    #[test]
    fn tokenize_empty() {
        let t = tokenize("");
        assert!(t.words.is_empty());
        assert_eq!(t.separators, vec![""]);
        assert_eq!(detokenize(&t), "");
    }

    #[test]
    fn digits_are_ignored() {
        assert!(is_ignored("500", &eng()));
        assert!(is_ignored("500kg", &eng()));
    }

    #[test]
    fn number_words_are_ignored() {
        assert!(is_ignored("hundred", &eng()));
        assert!(is_ignored("three", &eng()));
        assert!(is_ignored("Million", &eng()));
    }

    #[test]
    fn hound_is_not_ignored() {
        // brute-force substring scan over the shipped set
        let set = eng();
        let found = set.entries().iter().any(|e| "hound".contains(e.as_str()));
        assert!(!found);
        assert!(!is_ignored("hound", &set));
    }

    #[test]
    fn eligibility_rules() {
        let set = eng();
        assert!(!is_eligible("a", &set));
        assert!(is_eligible("ideas", &set));
        assert!(!is_eligible("3rd", &set));
        assert!(!is_eligible("", &set));
    }

    #[test]
    fn every_language_has_nonempty_builtin_set_with_digits() {
        for lang in LanguageId::all() {
            let set = IgnoreSet::builtin(lang);
            assert!(!set.entries().is_empty());
            for d in '0'..='9' {
                assert!(is_ignored(&d.to_string(), &set), "{lang} misses {d}");
            }
        }
    }
}

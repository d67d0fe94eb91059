//! Keyboard layout model: key positions, same-row neighbors, and the
//! left/right hand split used by the transpose constraint.
//!
//! Layout files are line based UTF-8:
//!
//! ```text
//! language: eng_Latn
//! row 0: q w e r t y u i o p
//! row 1: a s d f g h j k l
//! row 2 split 5: z x c v b n m
//! ```
//!
//! Characters are listed in physical left-to-right order. `split` names the
//! first column struck by the right hand (default 5, which reproduces the
//! QWERTY convention of T/G/B left and Y/H/N right). A `-` token marks an
//! empty physical position (a punctuation or ligature key that carries no
//! alphabet character), keeping columns honest without putting anything in
//! the alphabet.

use crate::error::{Error, Result};
use crate::language::LanguageId;
use std::collections::HashMap;

pub const DEFAULT_SPLIT: usize = 5;

/// Which hand strikes a key under the 10-finger typing convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hand {
    Left,
    Right,
    /// Whitespace: struck by either thumb, compatible with both hands.
    Neutral,
    /// Character absent from the layout.
    Unknown,
}

/// One key: its character, physical position, and hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeySlot {
    pub character: char,
    pub row: usize,
    pub column: usize,
    pub hand: Hand,
}

/// A per-language key grid answering neighbor and hand queries.
#[derive(Debug, Clone)]
pub struct KeyboardLayout {
    language: LanguageId,
    slots: HashMap<char, KeySlot>,
    grid: HashMap<(usize, usize), char>,
    alphabet: Vec<char>,
    row_splits: HashMap<usize, usize>,
}

impl KeyboardLayout {
    pub fn language(&self) -> LanguageId {
        self.language
    }

    /// All characters in the layout, in row-major physical order.
    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn slot(&self, ch: char) -> Option<&KeySlot> {
        self.slots.get(&fold(ch))
    }

    pub fn split_for_row(&self, row: usize) -> usize {
        self.row_splits.get(&row).copied().unwrap_or(DEFAULT_SPLIT)
    }

    /// The keys immediately left and right of `ch` on the same row, left
    /// neighbor first. Characters absent from the layout have no neighbors.
    pub fn neighbors(&self, ch: char) -> Vec<char> {
        let Some(slot) = self.slot(ch) else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(2);
        if slot.column > 0 {
            if let Some(&left) = self.grid.get(&(slot.row, slot.column - 1)) {
                out.push(left);
            }
        }
        if let Some(&right) = self.grid.get(&(slot.row, slot.column + 1)) {
            out.push(right);
        }
        out
    }

    pub fn hand_of(&self, ch: char) -> Hand {
        if ch.is_whitespace() {
            return Hand::Neutral;
        }
        match self.slot(ch) {
            Some(slot) => slot.hand,
            None => Hand::Unknown,
        }
    }

    pub fn contains(&self, ch: char) -> bool {
        self.slots.contains_key(&fold(ch))
    }
}

/// Lowercase folding for layout lookups. Shifted keys share a physical slot,
/// so queries are case-insensitive.
pub fn fold(ch: char) -> char {
    ch.to_lowercase().next().unwrap_or(ch)
}

/// Parse a layout file. Reports malformed headers, duplicate characters,
/// duplicate positions, and unknown language ids with line numbers.
pub fn parse_layout(source_text: &str) -> Result<KeyboardLayout> {
    let mut language = None;
    let mut slots: HashMap<char, KeySlot> = HashMap::new();
    let mut grid: HashMap<(usize, usize), char> = HashMap::new();
    let mut alphabet = Vec::new();
    let mut row_splits = HashMap::new();

    for (idx, raw) in source_text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if language.is_none() {
            let Some(rest) = line.strip_prefix("language:") else {
                return Err(Error::MalformedHeader {
                    line: line_no,
                    detail: format!("expected 'language: <id>', got '{line}'"),
                });
            };
            language = Some(LanguageId::parse(rest.trim())?);
            continue;
        }

        let (row, split, chars) = parse_row_line(line, line_no)?;
        if row_splits.contains_key(&row) {
            return Err(Error::MalformedRow {
                line: line_no,
                detail: format!("row {row} declared twice"),
            });
        }
        row_splits.insert(row, split);
        for (column, ch) in chars {
            let hand = if column < split { Hand::Left } else { Hand::Right };
            if slots.contains_key(&ch) {
                return Err(Error::DuplicateCharacter { line: line_no, ch });
            }
            if grid.contains_key(&(row, column)) {
                return Err(Error::DuplicatePosition {
                    line: line_no,
                    row,
                    col: column,
                });
            }
            slots.insert(
                ch,
                KeySlot {
                    character: ch,
                    row,
                    column,
                    hand,
                },
            );
            grid.insert((row, column), ch);
            alphabet.push(ch);
        }
    }

    let language = language.ok_or(Error::MalformedHeader {
        line: 1,
        detail: "missing 'language:' header".to_string(),
    })?;
    if slots.is_empty() {
        return Err(Error::EmptyLayout);
    }

    Ok(KeyboardLayout {
        language,
        slots,
        grid,
        alphabet,
        row_splits,
    })
}

fn parse_row_line(line: &str, line_no: usize) -> Result<(usize, usize, Vec<(usize, char)>)> {
    let malformed = |detail: String| Error::MalformedRow {
        line: line_no,
        detail,
    };
    let Some((head, body)) = line.split_once(':') else {
        return Err(malformed(format!("expected 'row <k>[ split <s>]: ...', got '{line}'")));
    };
    let head_tokens: Vec<&str> = head.split_whitespace().collect();
    let (row, split) = match head_tokens.as_slice() {
        ["row", k] => (parse_num(k, line_no)?, DEFAULT_SPLIT),
        ["row", k, "split", s] => (parse_num(k, line_no)?, parse_num(s, line_no)?),
        _ => return Err(malformed(format!("bad row header '{head}'"))),
    };

    let mut chars = Vec::new();
    for (column, token) in body.split_whitespace().enumerate() {
        if token == "-" {
            continue; // empty physical position
        }
        let mut it = token.chars();
        let ch = it.next().ok_or_else(|| malformed("empty token".to_string()))?;
        if it.next().is_some() {
            return Err(malformed(format!(
                "key token '{token}' is not a single character"
            )));
        }
        chars.push((column, fold(ch)));
    }
    Ok((row, split, chars))
}

fn parse_num(token: &str, line_no: usize) -> Result<usize> {
    token.parse().map_err(|_| Error::MalformedRow {
        line: line_no,
        detail: format!("'{token}' is not a number"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const QWERTY: &str = "\
language: eng_Latn
row 0: q w e r t y u i o p
row 1: a s d f g h j k l
row 2: z x c v b n m
";

    fn qwerty() -> KeyboardLayout {
        parse_layout(QWERTY).unwrap()
    }

    #[test]
    fn qwerty_positions_and_hands() {
        let l = qwerty();
        let t = l.slot('t').unwrap();
        assert_eq!((t.row, t.column, t.hand), (0, 4, Hand::Left));
        let y = l.slot('y').unwrap();
        assert_eq!((y.row, y.column, y.hand), (0, 5, Hand::Right));
        assert_eq!(l.hand_of('g'), Hand::Left);
        assert_eq!(l.hand_of('h'), Hand::Right);
        assert_eq!(l.hand_of('b'), Hand::Left);
        assert_eq!(l.hand_of('n'), Hand::Right);
    }

    #[test]
    fn neighbors_same_row() {
        let l = qwerty();
        assert_eq!(l.neighbors('s'), vec!['a', 'd']);
        assert_eq!(l.neighbors('q'), vec!['w']);
        assert_eq!(l.neighbors('p'), vec!['o']);
        assert_eq!(l.neighbors('7'), Vec::<char>::new());
    }

    #[test]
    fn lookups_fold_case() {
        let l = qwerty();
        assert_eq!(l.neighbors('S'), vec!['a', 'd']);
        assert_eq!(l.hand_of('G'), Hand::Left);
    }

    #[test]
    fn whitespace_is_neutral_and_absent_is_unknown() {
        let l = qwerty();
        assert_eq!(l.hand_of(' '), Hand::Neutral);
        assert_eq!(l.hand_of('ß'), Hand::Unknown);
    }

    #[test]
    fn duplicate_character_rejected() {
        let src = "language: eng_Latn\nrow 0: a b a\n";
        assert!(matches!(
            parse_layout(src),
            Err(Error::DuplicateCharacter { ch: 'a', .. })
        ));
    }

    #[test]
    fn duplicate_row_rejected() {
        let src = "language: eng_Latn\nrow 0: a b\nrow 0: c d\n";
        assert!(matches!(parse_layout(src), Err(Error::MalformedRow { .. })));
    }

    #[test]
    fn empty_rows_rejected() {
        assert!(matches!(
            parse_layout("language: eng_Latn\n"),
            Err(Error::EmptyLayout)
        ));
    }

    #[test]
    fn unknown_language_rejected() {
        assert!(matches!(
            parse_layout("language: xxx_Xxxx\nrow 0: a b\n"),
            Err(Error::UnknownLanguage(_))
        ));
    }

    #[test]
    fn bad_header_rejected() {
        assert!(matches!(
            parse_layout("rows first\n"),
            Err(Error::MalformedHeader { line: 1, .. })
        ));
    }

    #[test]
    fn gap_token_skips_column() {
        let src = "language: eng_Latn\nrow 0: a - b\n";
        let l = parse_layout(src).unwrap();
        assert_eq!(l.neighbors('a'), Vec::<char>::new());
        assert_eq!(l.neighbors('b'), Vec::<char>::new());
        assert_eq!(l.slot('b').unwrap().column, 2);
    }

    #[test]
    fn neighbor_symmetry_and_same_row() {
        let l = qwerty();
        for &c in l.alphabet() {
            for n in l.neighbors(c) {
                let cs = l.slot(c).unwrap();
                let ns = l.slot(n).unwrap();
                assert_eq!(cs.row, ns.row);
                assert_eq!(cs.column.abs_diff(ns.column), 1);
                assert!(l.neighbors(n).contains(&c));
            }
        }
    }
}

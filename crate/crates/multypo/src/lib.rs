//! Deterministic multilingual typo injection for robustness corpora.
//!
//! Corrupts text with human-like typographical errors constrained by
//! language-specific keyboard layouts: replacements and insertions draw from
//! same-row neighbor keys, transpositions only swap characters typed by
//! different hands, and protected strings (digits, number words) are never
//! touched. A naive baseline applies the same operations without keyboard
//! constraints. Everything is seeded and reproducible.

pub mod corpus;
pub mod engine;
pub mod error;
pub mod language;
pub mod layout;
pub mod lexicon;
pub mod registry;
pub mod sampling;
pub mod validate;

pub use engine::{corrupt, CorruptionConfig, CorruptionResult, Mode, TypoEvent};
pub use error::{Error, Result};
pub use language::LanguageId;
pub use layout::{Hand, KeyboardLayout};
pub use lexicon::IgnoreSet;
pub use registry::LayoutRegistry;
pub use sampling::TypoOp;

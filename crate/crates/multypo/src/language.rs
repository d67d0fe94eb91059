//! Supported language identifiers.

use crate::error::{Error, Result};
use std::fmt;

/// The twelve supported languages, as `<iso639-3>_<Script>` codes.
pub const SUPPORTED_LANGUAGES: [&str; 12] = [
    "ara_Arab", "ben_Beng", "deu_Latn", "ell_Grek", "eng_Latn", "fra_Latn", "heb_Hebr",
    "hin_Deva", "hye_Armn", "kat_Geor", "rus_Cyrl", "tam_Taml",
];

/// A validated language code such as `eng_Latn`. Unknown codes are rejected
/// at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanguageId(&'static str);

impl LanguageId {
    pub fn parse(code: &str) -> Result<Self> {
        SUPPORTED_LANGUAGES
            .iter()
            .find(|&&s| s == code)
            .map(|&s| LanguageId(s))
            .ok_or_else(|| Error::UnknownLanguage(code.to_string()))
    }

    pub fn code(&self) -> &'static str {
        self.0
    }

    pub fn all() -> impl Iterator<Item = LanguageId> {
        SUPPORTED_LANGUAGES.iter().map(|&s| LanguageId(s))
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl std::str::FromStr for LanguageId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LanguageId::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_codes_parse() {
        for code in SUPPORTED_LANGUAGES {
            assert_eq!(LanguageId::parse(code).unwrap().code(), code);
        }
    }

    #[test]
    fn unknown_code_rejected() {
        assert!(matches!(
            LanguageId::parse("zho_Hans"),
            Err(Error::UnknownLanguage(_))
        ));
        assert!(LanguageId::parse("eng").is_err());
        assert!(LanguageId::parse("").is_err());
    }
}

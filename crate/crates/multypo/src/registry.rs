//! Loads and serves the per-language keyboard layouts. Immutable after load.

use crate::error::{Error, Result};
use crate::language::LanguageId;
use crate::layout::{parse_layout, KeyboardLayout};
use std::collections::BTreeMap;
use std::path::Path;

macro_rules! builtin_layouts {
    ($($code:literal),+ $(,)?) => {
        &[$(($code, include_str!(concat!("../data/layouts/", $code, ".layout")))),+]
    };
}

/// Layout files compiled into the binary, one per supported language.
pub const BUILTIN_LAYOUTS: &[(&str, &str)] = builtin_layouts!(
    "ara_Arab", "ben_Beng", "deu_Latn", "ell_Grek", "eng_Latn", "fra_Latn",
    "heb_Hebr", "hin_Deva", "hye_Armn", "kat_Geor", "rus_Cyrl", "tam_Taml",
);

/// All twelve layouts, keyed by language. Lookups never mutate state.
#[derive(Debug, Clone)]
pub struct LayoutRegistry {
    layouts: BTreeMap<LanguageId, KeyboardLayout>,
}

impl LayoutRegistry {
    /// The registry built from the compiled-in layout files.
    pub fn builtin() -> Self {
        let mut layouts = BTreeMap::new();
        for (code, text) in BUILTIN_LAYOUTS {
            let layout = parse_layout(text)
                .unwrap_or_else(|e| panic!("builtin layout {code} invalid: {e}"));
            layouts.insert(layout.language(), layout);
        }
        let reg = LayoutRegistry { layouts };
        debug_assert_eq!(reg.layouts.len(), 12);
        reg
    }

    /// Load `<LanguageId>.layout` files from a directory. All twelve
    /// languages must be present.
    pub fn load(layout_directory: &Path) -> Result<Self> {
        let mut layouts = BTreeMap::new();
        let entries = std::fs::read_dir(layout_directory)
            .map_err(|e| Error::io(layout_directory.display().to_string(), e))?;
        for entry in entries {
            let entry = entry.map_err(|e| Error::io(layout_directory.display().to_string(), e))?;
            let path = entry.path();
            if path.extension().and_then(|s| s.to_str()) != Some("layout") {
                continue;
            }
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::io(path.display().to_string(), e))?;
            let layout = parse_layout(&text).map_err(|e| Error::LayoutFile {
                path: path.display().to_string(),
                source: Box::new(e),
            })?;
            layouts.insert(layout.language(), layout);
        }
        if layouts.is_empty() {
            return Err(Error::NoLayouts(layout_directory.display().to_string()));
        }
        let missing: Vec<&str> = LanguageId::all()
            .filter(|l| !layouts.contains_key(l))
            .map(|l| l.code())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingLanguages(missing.join(", ")));
        }
        Ok(LayoutRegistry { layouts })
    }

    pub fn get(&self, language: LanguageId) -> &KeyboardLayout {
        // every LanguageId is guaranteed present after load
        &self.layouts[&language]
    }

    pub fn len(&self) -> usize {
        self.layouts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layouts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LanguageId, &KeyboardLayout)> {
        self.layouts.iter()
    }
}

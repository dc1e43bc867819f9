use std::collections::BTreeSet;
use std::path::Path;

use super::CorpusError;

/// Abbreviations whose trailing period does not end a sentence.
///
/// Plain-text format: one abbreviation per line (trailing period optional),
/// `#` starts a comment. A line `!X` excludes the single letter `X` from the
/// initials rule, e.g. `!I` for the English pronoun.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AbbreviationLexicon {
    pub language: String,
    abbreviations: BTreeSet<String>,
    non_initials: BTreeSet<String>,
}

const BUILTIN: &[(&str, &str)] = &[
    ("en", include_str!("../../data/abbreviations/en.txt")),
    ("fr", include_str!("../../data/abbreviations/fr.txt")),
    ("de", include_str!("../../data/abbreviations/de.txt")),
    ("it", include_str!("../../data/abbreviations/it.txt")),
    ("pl", include_str!("../../data/abbreviations/pl.txt")),
    ("ru", include_str!("../../data/abbreviations/ru.txt")),
    ("es", include_str!("../../data/abbreviations/es.txt")),
];

impl AbbreviationLexicon {
    pub fn parse(language: impl Into<String>, text: &str) -> Self {
        let mut lex = Self { language: language.into(), ..Default::default() };
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(letter) = line.strip_prefix('!') {
                lex.non_initials.insert(letter.trim().to_string());
            } else {
                lex.abbreviations.insert(line.trim_end_matches('.').to_string());
            }
        }
        lex
    }

    pub fn load(language: impl Into<String>, path: &Path) -> Result<Self, CorpusError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CorpusError::Lexicon(format!("{}: {e}", path.display())))?;
        Ok(Self::parse(language, &text))
    }

    /// Shipped lexicon for `language` (`en`, `fr`, `de`, `it`, `pl`, `ru`,
    /// `es`); other tags get an empty lexicon, leaving only the initials rule.
    pub fn builtin(language: &str) -> Self {
        let tag = language.split(['-', '_']).next().unwrap_or("").to_ascii_lowercase();
        match BUILTIN.iter().find(|(l, _)| *l == tag) {
            Some((_, text)) => Self::parse(language, text),
            None => Self { language: language.to_string(), ..Default::default() },
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.abbreviations.contains(word)
    }

    /// Single capital letter that should be read as an initial.
    pub fn is_initial(&self, word: &str) -> bool {
        let mut chars = word.chars();
        matches!((chars.next(), chars.next()), (Some(c), None) if c.is_uppercase()) && !self.non_initials.contains(word)
    }

    pub fn len(&self) -> usize {
        self.abbreviations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abbreviations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_format() {
        let lex = AbbreviationLexicon::parse("xx", "# comment\nMr.\n  Dr  # inline\n\n!I\n");
        assert!(lex.contains("Mr") && lex.contains("Dr"));
        assert_eq!(lex.len(), 2);
        assert!(lex.is_initial("A"));
        assert!(!lex.is_initial("I"));
        assert!(!lex.is_initial("a"));
        assert!(!lex.is_initial("AB"));
    }

    #[test]
    fn builtins() {
        for tag in ["en", "fr", "de", "it", "pl", "ru", "es", "en-GB"] {
            assert!(!AbbreviationLexicon::builtin(tag).is_empty(), "{tag}");
        }
        let unknown = AbbreviationLexicon::builtin("fi");
        assert!(unknown.is_empty());
        assert!(unknown.is_initial("J"));
        assert!(AbbreviationLexicon::builtin("en").contains("Mrs"));
    }

    #[test]
    fn missing_file_is_reported() {
        let err = AbbreviationLexicon::load("en", Path::new("/nonexistent/lexicon.txt")).unwrap_err();
        assert!(matches!(err, CorpusError::Lexicon(_)));
    }
}

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_normalization::UnicodeNormalization;

use super::CorpusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Terminator,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub surface: String,
    /// Index of the token in its document.
    pub position: usize,
    /// Byte offset in the normalized text.
    pub offset: usize,
    /// First token after a blank line.
    pub paragraph_start: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    Nfc,
    Nfkc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub normalization: Normalization,
    /// Characters that count as word characters besides letters and digits.
    pub extra_word_chars: Vec<char>,
    /// Apostrophes and hyphens: kept inside a word when flanked by word
    /// characters on both sides ("don't", "sea-captain").
    pub joiners: Vec<char>,
    /// Sentence-ending marks; consecutive marks form one token ("?!", "...").
    pub terminators: Vec<char>,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            normalization: Normalization::Nfc,
            extra_word_chars: Vec::new(),
            joiners: vec!['\'', '\u{2019}', '-', '\u{2010}'],
            terminators: vec!['.', '?', '!', '\u{2026}'],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub title: String,
    pub language_tag: String,
    pub tokens: Vec<Token>,
    /// SHA-256 of the raw input bytes, hex encoded.
    pub source_hash: String,
}

impl Document {
    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = title.into();
        self
    }

    pub fn with_language(mut self, tag: impl Into<String>) -> Self {
        self.language_tag = tag.into();
        self
    }

    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.kind == TokenKind::Word)
    }

    pub fn word_count(&self) -> usize {
        self.words().count()
    }
}

/// Splits UTF-8 text into words, terminators and other punctuation.
///
/// A word is a maximal run of letters, digits and `extra_word_chars`;
/// joiners stay inside a word only between two word characters, and `.` or
/// `,` stay inside a numeral between two digits ("3.14", "1,000").
/// Whitespace separates tokens and is dropped.
pub fn tokenize(raw: &[u8], config: &TokenizerConfig) -> Result<Document, CorpusError> {
    let text = std::str::from_utf8(raw).map_err(|e| CorpusError::Decode { offset: e.valid_up_to() })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let normalized: String = match config.normalization {
        Normalization::Nfc => text.nfc().collect(),
        Normalization::Nfkc => text.nfkc().collect(),
    };
    let source_hash = hex::encode(Sha256::digest(raw));

    let chars: Vec<(usize, char)> = normalized.char_indices().collect();
    let is_word = |c: char| c.is_alphanumeric() || config.extra_word_chars.contains(&c);
    let is_term = |c: char| config.terminators.contains(&c);

    let mut tokens = Vec::new();
    let mut newlines = 0usize;
    let mut seen_any = false;
    let mut i = 0;
    let push = |kind, start: usize, end: usize, newlines: &mut usize, tokens: &mut Vec<Token>| {
        let offset = chars[start].0;
        let end_byte = if end < chars.len() { chars[end].0 } else { normalized.len() };
        tokens.push(Token {
            kind,
            surface: normalized[offset..end_byte].to_string(),
            position: tokens.len(),
            offset,
            paragraph_start: *newlines >= 2,
        });
        *newlines = 0;
    };
    while i < chars.len() {
        let c = chars[i].1;
        if c.is_whitespace() {
            if c == '\n' && seen_any {
                newlines += 1;
            }
            i += 1;
            continue;
        }
        seen_any = true;
        let start = i;
        if is_word(c) {
            i += 1;
            while i < chars.len() {
                let ch = chars[i].1;
                if is_word(ch) {
                    i += 1;
                    continue;
                }
                let next = chars.get(i + 1).map(|p| p.1);
                let prev = chars[i - 1].1;
                let joins = config.joiners.contains(&ch) && next.is_some_and(is_word);
                let numeral =
                    (ch == '.' || ch == ',') && prev.is_ascii_digit() && next.is_some_and(|n| n.is_ascii_digit());
                if joins || numeral {
                    i += 2;
                } else {
                    break;
                }
            }
            push(TokenKind::Word, start, i, &mut newlines, &mut tokens);
        } else if is_term(c) {
            while i < chars.len() && is_term(chars[i].1) {
                i += 1;
            }
            push(TokenKind::Terminator, start, i, &mut newlines, &mut tokens);
        } else {
            i += 1;
            push(TokenKind::Other, start, i, &mut newlines, &mut tokens);
        }
    }
    Ok(Document { title: String::new(), language_tag: String::new(), tokens, source_hash })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds_and_surfaces(text: &str) -> Vec<(TokenKind, String)> {
        tokenize(text.as_bytes(), &TokenizerConfig::default())
            .unwrap()
            .tokens
            .into_iter()
            .map(|t| (t.kind, t.surface))
            .collect()
    }

    use TokenKind::*;

    #[test]
    fn minimal_sentence() {
        assert_eq!(
            kinds_and_surfaces("He left."),
            vec![(Word, "He".into()), (Word, "left".into()), (Terminator, ".".into())]
        );
    }

    #[test]
    fn empty_input() {
        let d = tokenize(b"", &TokenizerConfig::default()).unwrap();
        assert!(d.tokens.is_empty());
    }

    #[test]
    fn micro_text_hand_count() {
        // "Cats purr. Dogs bark loudly." -> 5 words, 2 terminators
        let d = tokenize("Cats purr. Dogs bark loudly.".as_bytes(), &TokenizerConfig::default()).unwrap();
        assert_eq!(d.words().count(), 5);
        assert_eq!(d.tokens.iter().filter(|t| t.kind == Terminator).count(), 2);
        assert_eq!(d.tokens.len(), 7);
        assert!(d.tokens.iter().enumerate().all(|(i, t)| t.position == i));
    }

    #[test]
    fn joiners_numerals_and_punctuation() {
        let toks = kinds_and_surfaces("Don't sea-captain 3.14 1,000 -- 'tis well-");
        assert_eq!(
            toks,
            vec![
                (Word, "Don't".into()),
                (Word, "sea-captain".into()),
                (Word, "3.14".into()),
                (Word, "1,000".into()),
                (Other, "-".into()),
                (Other, "-".into()),
                (Other, "'".into()),
                (Word, "tis".into()),
                (Word, "well".into()),
                (Other, "-".into()),
            ]
        );
    }

    #[test]
    fn terminator_runs_are_single_tokens() {
        let toks = kinds_and_surfaces("What?! Wait... Go\u{2026} (no)");
        assert_eq!(toks[1], (Terminator, "?!".into()));
        assert_eq!(toks[3], (Terminator, "...".into()));
        assert_eq!(toks[5], (Terminator, "\u{2026}".into()));
        assert_eq!(toks[6], (Other, "(".into()));
    }

    #[test]
    fn decode_error_reports_offset() {
        let bytes = [b'a', b'b', 0xff, b'c'];
        assert_eq!(tokenize(&bytes, &TokenizerConfig::default()), Err(CorpusError::Decode { offset: 2 }));
    }

    #[test]
    fn normalization_is_applied() {
        // "e" + combining acute composes to a single letter under NFC
        let d = tokenize("Cafe\u{301}.".as_bytes(), &TokenizerConfig::default()).unwrap();
        assert_eq!(d.tokens[0].surface, "Caf\u{e9}");
        let nfkc = TokenizerConfig { normalization: Normalization::Nfkc, ..Default::default() };
        let d = tokenize("Go\u{2026}".as_bytes(), &nfkc).unwrap();
        assert_eq!(d.tokens[1].surface, "...");
    }

    #[test]
    fn paragraph_starts_and_hash() {
        let d = tokenize(b"One.\n\nTwo.\nThree.", &TokenizerConfig::default()).unwrap();
        let flags: Vec<bool> = d.tokens.iter().map(|t| t.paragraph_start).collect();
        assert_eq!(flags, vec![false, false, true, false, false, false]);
        assert_eq!(d.source_hash.len(), 64);
        let again = tokenize(b"One.\n\nTwo.\nThree.", &TokenizerConfig::default()).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn extra_word_chars() {
        let cfg = TokenizerConfig { extra_word_chars: vec!['_'], ..Default::default() };
        let d = tokenize(b"snake_case word", &cfg).unwrap();
        assert_eq!(d.tokens[0].surface, "snake_case");
    }
}

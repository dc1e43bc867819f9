use serde::{Deserialize, Serialize};

use super::lexicon::AbbreviationLexicon;
use super::tokenize::{Document, Token, TokenKind};

/// Token span `[start, end)` of one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub start: usize,
    pub end: usize,
    pub word_count: usize,
}

impl Sentence {
    pub fn tokens<'a>(&self, doc: &'a Document) -> &'a [Token] {
        &doc.tokens[self.start..self.end]
    }

    pub fn words<'a>(&self, doc: &'a Document) -> impl Iterator<Item = &'a Token> {
        self.tokens(doc).iter().filter(|t| t.kind == TokenKind::Word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentationConfig {
    /// A terminator ends a sentence only if the next word does not start
    /// with a lowercase letter.
    pub require_capital_start: bool,
    /// Inside an unclosed bracket or quote, a terminator followed by a
    /// non-capitalized word never splits, even with
    /// `require_capital_start` off.
    pub bracket_rule: bool,
    /// Keep trailing text that has no terminator as a final sentence.
    pub keep_unterminated_tail: bool,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self { require_capital_start: true, bracket_rule: true, keep_unterminated_tail: false }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentationReport {
    pub sentences: usize,
    /// Periods kept inside a sentence because the preceding word is an
    /// abbreviation.
    pub lexicon_hits: usize,
    pub initial_hits: usize,
    pub bracket_suppressions: usize,
    pub lowercase_continuations: usize,
    pub ellipsis_continuations: usize,
    /// Word-less spans (e.g. ". . .") folded into the preceding sentence.
    pub merged_empty: usize,
    pub dropped_tail_words: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segmentation {
    pub sentences: Vec<Sentence>,
    pub report: SegmentationReport,
}

fn is_ellipsis(surface: &str) -> bool {
    surface.contains('\u{2026}') || (surface.len() >= 2 && surface.chars().all(|c| c == '.'))
}

fn is_plain_period(surface: &str) -> bool {
    surface == "."
}

/// Orthographic sentence start: the first character is not a lowercase
/// letter (capitals, digits and uncased scripts all qualify).
fn starts_sentence(word: &str) -> bool {
    word.chars().next().is_some_and(|c| !c.is_lowercase())
}

#[derive(Debug, Default)]
struct OpenMarks(Vec<char>);

impl OpenMarks {
    /// Updates the stack for one punctuation token; returns whether the
    /// token closed something.
    fn feed(&mut self, surface: &str) -> bool {
        let mut chars = surface.chars();
        let c = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => return false,
        };
        let top = self.0.last().copied();
        match c {
            '(' | '[' | '{' | '\u{ab}' | '\u{201e}' => {
                self.0.push(c);
                false
            }
            ')' | ']' | '}' | '\u{bb}' | '\u{201d}' => {
                let open = match c {
                    ')' => '(',
                    ']' => '[',
                    '}' => '{',
                    '\u{bb}' => '\u{ab}',
                    _ => '\u{201c}',
                };
                if top == Some(open) {
                    self.0.pop();
                    true
                } else {
                    false
                }
            }
            // closes a low-9 opener („…“), otherwise opens an English quote
            '\u{201c}' => {
                if top == Some('\u{201e}') {
                    self.0.pop();
                    true
                } else {
                    self.0.push(c);
                    false
                }
            }
            '"' => {
                if top == Some('"') {
                    self.0.pop();
                    true
                } else {
                    self.0.push('"');
                    false
                }
            }
            _ => false,
        }
    }

    /// Whether `surface` would close the innermost open mark. Single quotes
    /// are not tracked and always count as closers.
    fn closes(&self, surface: &str) -> bool {
        let top = self.0.last().copied();
        match surface {
            "\u{2019}" | "'" => true,
            ")" => top == Some('('),
            "]" => top == Some('['),
            "}" => top == Some('{'),
            "\u{bb}" => top == Some('\u{ab}'),
            "\u{201d}" => top == Some('\u{201c}'),
            "\u{201c}" => top == Some('\u{201e}'),
            "\"" => top == Some('"'),
            _ => false,
        }
    }

    fn is_open(&self) -> bool {
        !self.0.is_empty()
    }

    fn clear(&mut self) {
        self.0.clear();
    }
}

/// Splits a document into sentences.
///
/// A sentence is a run of tokens beginning with a capitalized word and
/// ending in `.`, `?`, `!` or an ellipsis. A terminator does not end the
/// sentence when
/// * it is a single `.` after an abbreviation from `lexicon`,
/// * it is a single `.` after a lone capital letter (an initial),
/// * the next word starts lowercase (`require_capital_start`),
/// * it sits inside an open bracket or quote and the next word is not
///   capitalized (`bracket_rule`),
/// * it is an ellipsis not followed by a capitalized word.
///
/// Closing brackets and quotes right after the terminator belong to the
/// sentence it ends. Open-mark tracking is reset at blank lines.
pub fn segment_sentences(doc: &Document, lexicon: &AbbreviationLexicon, config: &SegmentationConfig) -> Segmentation {
    let tokens = &doc.tokens;
    let mut report = SegmentationReport::default();
    let mut sentences: Vec<Sentence> = Vec::new();
    let mut open = OpenMarks::default();
    let mut start = 0;
    let mut i = 0;

    let next_word = |from: usize| tokens[from..].iter().find(|t| t.kind == TokenKind::Word);

    while i < tokens.len() {
        let tok = &tokens[i];
        if tok.paragraph_start {
            open.clear();
        }
        match tok.kind {
            TokenKind::Word => {
                i += 1;
                continue;
            }
            TokenKind::Other => {
                open.feed(&tok.surface);
                i += 1;
                continue;
            }
            TokenKind::Terminator => {}
        }

        let prev_word = (i > 0 && tokens[i - 1].kind == TokenKind::Word).then(|| tokens[i - 1].surface.as_str());
        // absorb closers that directly follow the terminator
        let mut end = i + 1;
        while end < tokens.len()
            && tokens[end].kind == TokenKind::Other
            && !tokens[end].paragraph_start
            && open.closes(&tokens[end].surface)
        {
            open.feed(&tokens[end].surface);
            end += 1;
        }
        let next = next_word(end);
        let next_starts = next.is_none_or(|w| starts_sentence(&w.surface));

        let split = if is_plain_period(&tok.surface) && prev_word.is_some_and(|w| lexicon.contains(w)) {
            report.lexicon_hits += 1;
            false
        } else if is_plain_period(&tok.surface) && prev_word.is_some_and(|w| lexicon.is_initial(w)) {
            report.initial_hits += 1;
            false
        } else if is_ellipsis(&tok.surface) && !next_starts {
            report.ellipsis_continuations += 1;
            false
        } else if config.require_capital_start && !next_starts {
            report.lowercase_continuations += 1;
            false
        } else if config.bracket_rule && open.is_open() && !next_starts {
            report.bracket_suppressions += 1;
            false
        } else {
            true
        };

        if split {
            let word_count = tokens[start..end].iter().filter(|t| t.kind == TokenKind::Word).count();
            if word_count > 0 {
                sentences.push(Sentence { start, end, word_count });
                start = end;
            } else if let Some(last) = sentences.last_mut() {
                last.end = end;
                report.merged_empty += 1;
                start = end;
            }
        }
        i = end;
    }

    let tail_words = tokens[start..].iter().filter(|t| t.kind == TokenKind::Word).count();
    if tail_words > 0 {
        if config.keep_unterminated_tail {
            sentences.push(Sentence { start, end: tokens.len(), word_count: tail_words });
        } else {
            report.dropped_tail_words = tail_words;
        }
    }
    report.sentences = sentences.len();
    Segmentation { sentences, report }
}

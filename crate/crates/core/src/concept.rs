//! Key-word concept search.
//!
//! Adjacent noun-like tokens are concatenated into compound runs before
//! matching, so a key word split by the segmenter (提携 + 解消) still matches.
//! Key words may be anchored to run boundaries with `>` (begin) and `<`
//! (end) to stop a key word from matching inside a larger compound.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::token::{pos, Token};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Keyword {
    pub text: String,
    pub begin_anchor: bool,
    pub end_anchor: bool,
}

impl Keyword {
    pub fn parse(raw: &str) -> Option<Self> {
        let (begin_anchor, rest) = match raw.strip_prefix('>') {
            Some(r) => (true, r),
            None => (false, raw),
        };
        let (end_anchor, text) = match rest.strip_suffix('<') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        (!text.is_empty()).then(|| Keyword {
            text: text.to_string(),
            begin_anchor,
            end_anchor,
        })
    }

    /// Whether the key word occurs in `run` consistently with its anchors.
    pub fn matches(&self, run: &str) -> bool {
        match (self.begin_anchor, self.end_anchor) {
            (true, true) => run == self.text,
            (true, false) => run.starts_with(&self.text),
            (false, true) => run.ends_with(&self.text),
            (false, false) => run.contains(&self.text),
        }
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.begin_anchor {
            f.write_str(">")?;
        }
        f.write_str(&self.text)?;
        if self.end_anchor {
            f.write_str("<")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptEntry {
    pub name: String,
    pub keywords: Vec<Keyword>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptLexicon {
    entries: Vec<ConceptEntry>,
}

impl ConceptLexicon {
    pub fn new(entries: Vec<ConceptEntry>) -> Self {
        ConceptLexicon { entries }
    }

    pub fn entries(&self) -> &[ConceptEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `(NAME kw kw ...)` lines. `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let inner = line
                .strip_prefix('(')
                .and_then(|l| l.strip_suffix(')'))
                .filter(|l| !l.contains(['(', ')']))
                .ok_or_else(|| Error::parse(line_no, "unbalanced parentheses"))?;
            let mut words = inner.split_whitespace();
            let name = words
                .next()
                .ok_or_else(|| Error::parse(line_no, "missing concept name"))?;
            let keywords = words
                .map(|w| {
                    Keyword::parse(w).ok_or_else(|| {
                        Error::parse(line_no, format!("empty key word {w:?} after anchors"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if keywords.is_empty() {
                return Err(Error::parse(line_no, format!("concept {name} has no key words")));
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::parse(line_no, format!("duplicate concept {name}")));
            }
            entries.push(ConceptEntry {
                name: name.to_string(),
                keywords,
            });
        }
        Ok(ConceptLexicon { entries })
    }
}

/// A maximal run of noun-like tokens, or a single other token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub text: String,
    pub start: usize,
    pub len: usize,
}

pub fn compound_runs(sentence: &[Token]) -> Vec<Run> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < sentence.len() {
        let mut j = i + 1;
        if pos::is_noun_like(&sentence[i].pos) {
            while j < sentence.len() && pos::is_noun_like(&sentence[j].pos) {
                j += 1;
            }
        }
        runs.push(Run {
            text: sentence[i..j].iter().map(|t| t.surface.as_str()).collect(),
            start: sentence[i].tok_index,
            len: j - i,
        });
        i = j;
    }
    runs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptHit {
    pub concept: String,
    pub sent_index: usize,
    pub matched_run: String,
    /// Token index where the matched run starts.
    pub run_start: usize,
    pub keyword: Keyword,
}

/// All concepts whose key words occur in the sentence's compound runs.
/// At most one hit is reported per concept and run.
pub fn find_concepts(sentence: &[Token], lex: &ConceptLexicon) -> Vec<ConceptHit> {
    let Some(first) = sentence.first() else {
        return Vec::new();
    };
    let mut hits = Vec::new();
    for run in compound_runs(sentence) {
        for entry in &lex.entries {
            if let Some(kw) = entry.keywords.iter().find(|k| k.matches(&run.text)) {
                hits.push(ConceptHit {
                    concept: entry.name.clone(),
                    sent_index: first.sent_index,
                    matched_run: run.text.clone(),
                    run_start: run.start,
                    keyword: kw.clone(),
                });
            }
        }
    }
    hits
}

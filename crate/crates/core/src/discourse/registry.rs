//! Company registry and abbreviation unification.
//!
//! Every company name, and every `unknown`/`person`/`place` segment of two
//! or more characters, is registered in text order. Unification then walks
//! earlier names against later ones: a later string whose characters all
//! occur, in order, in an earlier name is an abbreviation of it. English
//! sources only accept identical strings.

use std::collections::HashMap;
use std::fmt;

use super::lcs::lcs_length;
use crate::config::DiscourseConfig;
use crate::token::{pos, split_parenthesized_abbreviation, Document};

/// 1-based registry number. After unification, equal ids mean the same
/// company.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompanyId(pub usize);

impl fmt::Display for CompanyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanyEntry {
    pub string: String,
    pub pos: String,
    /// The string consists only of ASCII letters.
    pub eg: bool,
    pub id: CompanyId,
    /// `(sent_index, tok_index)` of the token the entry came from.
    pub position: (usize, usize),
    /// For an English word taken out of a longer company name: the 1-based
    /// index of that name's entry.
    pub alias_of: Option<usize>,
}

pub fn is_english_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphabetic())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompanyRegistry {
    entries: Vec<CompanyEntry>,
    by_position: HashMap<(usize, usize), usize>,
}

impl CompanyRegistry {
    /// Builds a registry from `(string, pos, position, alias_of)` tuples.
    /// Entries are sorted by position (stable) and numbered from 1.
    fn build(mut raw: Vec<(String, String, (usize, usize), Option<usize>)>) -> Self {
        // alias_of refers to raw indices; sort keeps aliases after their parent
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by_key(|&i| raw[i].2);
        let mut new_index = vec![0; raw.len()];
        for (k, &i) in order.iter().enumerate() {
            new_index[i] = k + 1;
        }
        let mut entries = Vec::with_capacity(raw.len());
        let mut by_position = HashMap::new();
        let mut taken: Vec<_> = raw.drain(..).map(Some).collect();
        for (k, &i) in order.iter().enumerate() {
            let (string, tag, position, alias_of) = taken[i].take().unwrap();
            if alias_of.is_none() {
                by_position.insert(position, k + 1);
            }
            entries.push(CompanyEntry {
                eg: is_english_word(&string),
                string,
                pos: tag,
                id: CompanyId(k + 1),
                position,
                alias_of: alias_of.map(|p| new_index[p]),
            });
        }
        CompanyRegistry {
            entries,
            by_position,
        }
    }

    /// A registry of `(string, pos)` pairs at consecutive positions of one
    /// sentence.
    pub fn from_names(names: &[(&str, &str)]) -> Self {
        Self::build(
            names
                .iter()
                .enumerate()
                .map(|(k, (s, p))| (s.to_string(), p.to_string(), (0, k), None))
                .collect(),
        )
    }

    /// Registers company names and candidate abbreviations of a grouped
    /// document. Company pronouns are never registered.
    pub fn from_document(doc: &Document, cfg: &DiscourseConfig) -> Self {
        let mut raw = Vec::new();
        for tok in doc.tokens() {
            if cfg.is_pronoun(&tok.surface) {
                continue;
            }
            let position = (tok.sent_index, tok.tok_index);
            if tok.pos == pos::COMPANY {
                let (name, paren) = match split_parenthesized_abbreviation(&tok.surface) {
                    Some((name, abbr)) => (name, Some(abbr)),
                    None => (tok.surface.as_str(), None),
                };
                let parent = raw.len();
                raw.push((name.to_string(), tok.pos.clone(), position, None));
                let mut words: Vec<&str> = english_words(name)
                    .into_iter()
                    .filter(|w| *w != name && w.len() >= 2)
                    .collect();
                words.extend(paren);
                for w in words {
                    raw.push((w.to_string(), tok.pos.clone(), position, Some(parent)));
                }
            } else if matches!(tok.pos.as_str(), pos::UNKNOWN | pos::PERSON | pos::PLACE)
                && tok.char_len() >= 2
            {
                raw.push((tok.surface.clone(), tok.pos.clone(), position, None));
            }
        }
        Self::build(raw)
    }

    pub fn entries(&self) -> &[CompanyEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry by 1-based index.
    pub fn entry(&self, index: usize) -> &CompanyEntry {
        &self.entries[index - 1]
    }

    /// Entry whose id names the class `id`.
    pub fn root(&self, id: CompanyId) -> &CompanyEntry {
        self.entry(id.0)
    }

    pub fn entry_at(&self, sent_index: usize, tok_index: usize) -> Option<&CompanyEntry> {
        self.by_position
            .get(&(sent_index, tok_index))
            .map(|&i| self.entry(i))
    }

    /// Id of the token at a position, if that token refers to a company:
    /// it is tagged company or was unified with a company name.
    pub fn company_at(&self, sent_index: usize, tok_index: usize) -> Option<CompanyId> {
        let e = self.entry_at(sent_index, tok_index)?;
        (e.pos == pos::COMPANY || self.root(e.id).pos == pos::COMPANY).then_some(e.id)
    }

    /// All entries of a class, in text order.
    pub fn members(&self, id: CompanyId) -> impl Iterator<Item = &CompanyEntry> {
        self.entries.iter().filter(move |e| e.id == id)
    }

    pub fn set_ids(&mut self, ids: &[CompanyId]) {
        assert_eq!(ids.len(), self.entries.len());
        for (e, id) in self.entries.iter_mut().zip(ids) {
            e.id = *id;
        }
    }

    pub fn ids(&self) -> Vec<CompanyId> {
        self.entries.iter().map(|e| e.id).collect()
    }

    /// Numbers every entry with its own index.
    pub fn initialize_ids(&mut self) {
        for (k, e) in self.entries.iter_mut().enumerate() {
            e.id = CompanyId(k + 1);
        }
    }

    /// Searches abbreviations of earlier names among later entries.
    /// Expects freshly initialized ids.
    pub fn search_abbreviations(&mut self) {
        let n = self.entries.len();
        for i in 0..n {
            if self.entries[i].id != CompanyId(i + 1) {
                continue; // already an abbreviation
            }
            let src_len = self.entries[i].string.chars().count();
            for j in i + 1..n {
                if self.entries[j].id != CompanyId(j + 1) {
                    continue;
                }
                let len = self.entries[j].string.chars().count();
                let lcs = lcs_length(&self.entries[i].string, &self.entries[j].string);
                if lcs < 2 {
                    continue;
                }
                let unify = if self.entries[i].eg {
                    src_len == lcs && lcs == len
                } else {
                    lcs == len
                };
                if unify {
                    self.entries[j].id = self.entries[i].id;
                }
            }
        }
    }

    /// Folds each English alias that heads its own class into the class of
    /// the name it was taken from.
    pub fn link_aliases(&mut self) {
        for a in 0..self.entries.len() {
            let Some(parent) = self.entries[a].alias_of else {
                continue;
            };
            let alias_id = CompanyId(a + 1);
            if self.entries[a].id != alias_id {
                continue;
            }
            let target = self.entries[parent - 1].id;
            for e in &mut self.entries {
                if e.id == alias_id {
                    e.id = target;
                }
            }
        }
    }

    /// Initialization, abbreviation search, then alias linking.
    pub fn unify(mut self) -> Self {
        self.initialize_ids();
        self.search_abbreviations();
        self.link_aliases();
        self
    }
}

pub fn unify_company_references(registry: CompanyRegistry) -> CompanyRegistry {
    registry.unify()
}

/// Maximal runs of ASCII letters.
fn english_words(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_ascii_alphabetic(), start) {
            (true, None) => start = Some(i),
            (false, Some(st)) => {
                out.push(&s[st..i]);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push(&s[st..]);
    }
    out
}

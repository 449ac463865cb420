//! Token files, designator-based name recognition and name-unit grouping.
//!
//! A token file carries one or more documents:
//!
//! ```text
//! #DOC d1
//! X社	company
//! は	particle
//!
//! #END
//! ```
//!
//! One token per line as `surface<TAB>pos`, a blank line closes a sentence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Reserved part-of-speech tags. Any other tag is carried through untouched.
pub mod pos {
    pub const NOUN: &str = "noun";
    pub const VERBAL_NOMINAL: &str = "verbal-nominal";
    pub const VERB: &str = "verb";
    pub const PARTICLE: &str = "particle";
    pub const PUNCT: &str = "punct";
    pub const COMPANY: &str = "company";
    pub const PERSON: &str = "person";
    pub const PLACE: &str = "place";
    pub const UNKNOWN: &str = "unknown";
    pub const OTHER: &str = "other";

    /// Tags assigned to recognized proper names.
    pub fn is_name(tag: &str) -> bool {
        matches!(tag, COMPANY | PERSON | PLACE)
    }

    /// Tags that take part in run-time noun compounding.
    pub fn is_noun_like(tag: &str) -> bool {
        matches!(
            tag,
            NOUN | VERBAL_NOMINAL | UNKNOWN | COMPANY | PERSON | PLACE
        )
    }
}

/// Connector between the parts of a name, as in メルセデス・ベンツ.
pub const NAME_CONNECTOR: &str = "・";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    pub pos: String,
    pub sent_index: usize,
    pub tok_index: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, pos: impl Into<String>) -> Self {
        Token {
            surface: surface.into(),
            pos: pos.into(),
            sent_index: 0,
            tok_index: 0,
        }
    }

    pub fn is_name(&self) -> bool {
        pos::is_name(&self.pos)
    }

    pub fn char_len(&self) -> usize {
        self.surface.chars().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub sentences: Vec<Vec<Token>>,
}

impl Document {
    /// Builds a document from `(surface, pos)` pairs, one inner list per
    /// sentence. Positions are assigned densely.
    pub fn from_pairs<S, P>(doc_id: impl Into<String>, sentences: Vec<Vec<(S, P)>>) -> Self
    where
        S: Into<String>,
        P: Into<String>,
    {
        let sentences = sentences
            .into_iter()
            .map(|s| s.into_iter().map(|(surf, tag)| Token::new(surf, tag)).collect())
            .collect();
        let mut doc = Document {
            doc_id: doc_id.into(),
            sentences,
        };
        doc.reindex();
        doc
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flatten()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    /// Concatenation of every surface in document order.
    pub fn text(&self) -> String {
        self.tokens().map(|t| t.surface.as_str()).collect()
    }

    fn reindex(&mut self) {
        for (s, sentence) in self.sentences.iter_mut().enumerate() {
            for (k, tok) in sentence.iter_mut().enumerate() {
                tok.sent_index = s;
                tok.tok_index = k;
            }
        }
    }

    /// Normalized token-file form of this document.
    pub fn to_token_file(&self) -> String {
        let mut out = String::new();
        out.push_str("#DOC ");
        out.push_str(&self.doc_id);
        out.push('\n');
        for sentence in &self.sentences {
            for tok in sentence {
                out.push_str(&tok.surface);
                out.push('\t');
                out.push_str(&tok.pos);
                out.push('\n');
            }
            out.push('\n');
        }
        out.push_str("#END\n");
        out
    }
}

/// Serializes several documents into one token file.
pub fn serialize_corpus(docs: &[Document]) -> String {
    docs.iter().map(Document::to_token_file).collect()
}

/// Parses a token file holding exactly one document.
pub fn parse_document(text: &str) -> Result<Document> {
    let mut docs = parse_corpus(text)?;
    match docs.len() {
        1 => Ok(docs.pop().unwrap()),
        0 => Err(Error::parse(1, "missing #DOC header")),
        n => Err(Error::parse(1, format!("expected one document, found {n}"))),
    }
}

/// Parses every `#DOC` block of a token file.
pub fn parse_corpus(text: &str) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    // (doc id, header line, sentences, current sentence)
    let mut open: Option<(String, usize, Vec<Vec<Token>>, Vec<Token>)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.strip_suffix('\r').unwrap_or(raw);

        if let Some(rest) = line.strip_prefix("#DOC") {
            if open.is_some() {
                return Err(Error::parse(line_no, "#DOC inside an unterminated document"));
            }
            let id = rest.trim();
            if id.is_empty() || !rest.starts_with([' ', '\t']) {
                return Err(Error::parse(line_no, "#DOC header without a document id"));
            }
            open = Some((id.to_string(), line_no, Vec::new(), Vec::new()));
            continue;
        }

        if line == "#END" {
            let Some((id, _, mut sentences, current)) = open.take() else {
                return Err(Error::parse(line_no, "#END without #DOC header"));
            };
            if !current.is_empty() {
                sentences.push(current);
            }
            if sentences.is_empty() {
                return Err(Error::parse(line_no, format!("document {id} is empty")));
            }
            let mut doc = Document {
                doc_id: id,
                sentences,
            };
            doc.reindex();
            docs.push(doc);
            continue;
        }

        let Some((_, _, sentences, current)) = open.as_mut() else {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(line_no, "token line outside a #DOC block (missing #DOC header)"));
        };

        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(current));
            }
            continue;
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                line_no,
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(Error::parse(line_no, "empty surface or pos field"));
        }
        current.push(Token::new(fields[0], fields[1]));
    }

    if let Some((id, header, ..)) = open {
        return Err(Error::parse(
            last_line + 1,
            format!("document {id} opened at line {header} is missing #END"),
        ));
    }
    Ok(docs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityType {
    Company,
    Person,
    Place,
}

impl EntityType {
    pub fn as_pos(self) -> &'static str {
        match self {
            EntityType::Company => pos::COMPANY,
            EntityType::Person => pos::PERSON,
            EntityType::Place => pos::PLACE,
        }
    }

    pub fn from_pos(tag: &str) -> Option<Self> {
        match tag {
            pos::COMPANY => Some(EntityType::Company),
            pos::PERSON => Some(EntityType::Person),
            pos::PLACE => Some(EntityType::Place),
            _ => None,
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_pos())
    }
}

/// Name designators such as 社 (company) or 氏 (person).
///
/// Surfaces listed as exclusions (company pronouns like 同社) are never
/// treated as names even though they end with a designator.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DesignatorLexicon {
    entries: BTreeMap<String, EntityType>,
    exclusions: BTreeSet<String>,
}

impl DesignatorLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_entry(mut self, surface: &str, ty: EntityType) -> Self {
        self.entries.insert(surface.to_string(), ty);
        self
    }

    pub fn with_exclusion(mut self, surface: &str) -> Self {
        self.exclusions.insert(surface.to_string());
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, EntityType)> {
        self.entries.iter().map(|(s, t)| (s.as_str(), *t))
    }

    pub fn is_excluded(&self, surface: &str) -> bool {
        self.exclusions.contains(surface)
    }

    /// Parses `surface<TAB>type` lines, type being `company`, `person`,
    /// `place` or `exclude`. Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = DesignatorLexicon::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 2 || fields[0].is_empty() {
                return Err(Error::parse(line_no, "expected `surface<TAB>type`"));
            }
            let surface = fields[0];
            if lex.entries.contains_key(surface) || lex.exclusions.contains(surface) {
                return Err(Error::parse(line_no, format!("duplicate designator {surface}")));
            }
            if fields[1] == "exclude" {
                lex.exclusions.insert(surface.to_string());
                continue;
            }
            let ty = EntityType::from_pos(fields[1]).ok_or_else(|| {
                Error::parse(line_no, format!("unknown entity type {:?}", fields[1]))
            })?;
            lex.entries.insert(surface.to_string(), ty);
        }
        Ok(lex)
    }

    /// Longest designator that `surface` ends with.
    pub fn designator_of(&self, surface: &str) -> Option<(&str, EntityType)> {
        if self.exclusions.contains(surface) {
            return None;
        }
        self.entries
            .iter()
            .filter(|(d, _)| surface.ends_with(d.as_str()))
            .max_by_key(|(d, _)| d.len())
            .map(|(d, t)| (d.as_str(), *t))
    }

    fn bears_designator(&self, tok: &Token) -> Option<EntityType> {
        if matches!(
            tok.pos.as_str(),
            pos::PARTICLE | pos::VERB | pos::VERBAL_NOMINAL | pos::PUNCT
        ) {
            return None;
        }
        self.designator_of(&tok.surface).map(|(_, t)| t)
    }

    fn is_complete_name(&self, tok: &Token) -> bool {
        tok.is_name() && self.designator_of(&tok.surface).is_some()
    }
}

fn is_numeral(tok: &Token) -> bool {
    matches!(tok.pos.as_str(), "num" | "numeral")
        || tok.surface.chars().all(char::is_numeric)
}

/// Name recognition: every token ending with a designator absorbs the
/// eligible tokens before it and designator suffixes right after it.
pub fn recognize_names(doc: &Document, lex: &DesignatorLexicon) -> Document {
    let sentences = doc
        .sentences
        .iter()
        .map(|s| recognize_sentence(s, lex))
        .collect();
    let mut out = Document {
        doc_id: doc.doc_id.clone(),
        sentences,
    };
    out.reindex();
    out
}

fn recognize_sentence(tokens: &[Token], lex: &DesignatorLexicon) -> Vec<Token> {
    let backward_ok = |t: &Token| {
        if lex.is_excluded(&t.surface) || lex.is_complete_name(t) || is_numeral(t) {
            return false;
        }
        t.surface == NAME_CONNECTOR
            || matches!(
                t.pos.as_str(),
                pos::NOUN | pos::UNKNOWN | pos::COMPANY | pos::PERSON | pos::PLACE
            )
    };

    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        // names already tagged by the segmenter are left alone
        let found = if lex.is_complete_name(tok) { None } else { lex.bears_designator(tok) };
        let Some(mut ty) = found else {
            out.push(tok.clone());
            i += 1;
            continue;
        };

        let mut start = out.len();
        while start > 0 && backward_ok(&out[start - 1]) {
            start -= 1;
        }
        // a name never starts with a connector
        while start < out.len() && out[start].surface == NAME_CONNECTOR {
            start += 1;
        }

        let mut surface: String = out.drain(start..).map(|t| t.surface).collect();
        surface.push_str(&tok.surface);

        let mut j = i + 1;
        while j < tokens.len() {
            let next = &tokens[j];
            if !matches!(next.pos.as_str(), pos::NOUN | pos::UNKNOWN) {
                break;
            }
            match lex.designator_of(&next.surface) {
                Some((d, t)) if d == next.surface => {
                    surface.push_str(&next.surface);
                    ty = t;
                    j += 1;
                }
                _ => break,
            }
        }

        out.push(Token::new(surface, ty.as_pos()));
        i = j;
    }
    out
}

fn is_ascii_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphabetic())
}

fn is_open_paren(s: &str) -> bool {
    matches!(s, "(" | "（")
}

fn is_close_paren(s: &str) -> bool {
    matches!(s, ")" | "）")
}

/// Joins name segments of the same type separated by `・` into one unit,
/// and attaches a parenthesized English abbreviation to the company name it
/// follows, as in 日本電信電話（NTT）.
pub fn group_segments(doc: &Document) -> Document {
    let sentences = doc.sentences.iter().map(|s| group_sentence(s)).collect();
    let mut out = Document {
        doc_id: doc.doc_id.clone(),
        sentences,
    };
    out.reindex();
    out
}

fn group_sentence(tokens: &[Token]) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if !tokens[i].is_name() {
            out.push(tokens[i].clone());
            i += 1;
            continue;
        }
        let mut unit = tokens[i].clone();
        let mut j = i + 1;
        loop {
            if j + 1 < tokens.len()
                && tokens[j].surface == NAME_CONNECTOR
                && tokens[j + 1].pos == unit.pos
            {
                unit.surface.push_str(NAME_CONNECTOR);
                unit.surface.push_str(&tokens[j + 1].surface);
                j += 2;
            } else if unit.pos == pos::COMPANY
                && j + 2 < tokens.len()
                && is_open_paren(&tokens[j].surface)
                && is_ascii_word(&tokens[j + 1].surface)
                && is_close_paren(&tokens[j + 2].surface)
            {
                for t in &tokens[j..j + 3] {
                    unit.surface.push_str(&t.surface);
                }
                j += 3;
            } else {
                break;
            }
        }
        out.push(unit);
        i = j;
    }
    out
}

/// Splits a grouped company unit of the form `name(ABBR)` into the name and
/// the English abbreviation.
pub fn split_parenthesized_abbreviation(surface: &str) -> Option<(&str, &str)> {
    let (body, close) = if let Some(b) = surface.strip_suffix(')') {
        (b, '(')
    } else if let Some(b) = surface.strip_suffix('）') {
        (b, '（')
    } else {
        return None;
    };
    let open = body.rfind(close)?;
    let name = &body[..open];
    let abbr = &body[open + close.len_utf8()..];
    (!name.is_empty() && is_ascii_word(abbr)).then_some((name, abbr))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> DesignatorLexicon {
        DesignatorLexicon::new()
            .with_entry("社", EntityType::Company)
            .with_entry("氏", EntityType::Person)
            .with_exclusion("同社")
            .with_exclusion("両社")
    }

    fn surfaces(doc: &Document) -> Vec<Vec<(String, String)>> {
        doc.sentences
            .iter()
            .map(|s| s.iter().map(|t| (t.surface.clone(), t.pos.clone())).collect())
            .collect()
    }

    #[test]
    fn parses_minimal_file() {
        let doc = parse_document("#DOC d1\nX社\tcompany\nは\tparticle\n\n#END").unwrap();
        assert_eq!(doc.doc_id, "d1");
        assert_eq!(doc.sentences.len(), 1);
        assert_eq!(doc.sentences[0].len(), 2);
        assert_eq!(doc.sentences[0][1].tok_index, 1);
    }

    #[test]
    fn single_field_line_is_rejected_with_its_line_number() {
        let err = parse_document("#DOC d1\nX社\n#END\n").unwrap_err();
        assert_eq!(err, Error::parse(2, "expected 2 tab-separated fields, found 1"));
    }

    #[test]
    fn header_and_terminator_errors() {
        assert!(matches!(
            parse_corpus("X社\tcompany\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_corpus("#DOC d\n\n#END\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_corpus("#DOC d\nA\tnoun\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_corpus("#DOC\nA\tnoun\n#END\n").is_err());
    }

    #[test]
    fn multiple_blank_lines_make_one_boundary() {
        let docs = parse_corpus("#DOC a\nA\tnoun\n\n\n\nB\tnoun\n#END\n#DOC b\nC\tnoun\n#END\n").unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[0].sentences.len(), 2);
        assert_eq!(docs[1].sentences[0][0].surface, "C");
    }

    #[test]
    fn tagged_names_keep_their_boundaries() {
        let doc = Document::from_pairs("d", vec![vec![("昨年", "noun"), ("X社", "company"), ("は", "particle")]]);
        assert_eq!(recognize_names(&doc, &lex()), doc);
    }

    #[test]
    fn designator_absorbs_preceding_name_parts() {
        let doc = Document::from_pairs(
            "d",
            vec![vec![("、", "punct"), ("エー", "unknown"), ("・", "punct"), ("メルク", "unknown"), ("社", "noun"), ("の", "particle")]],
        );
        let out = recognize_names(&doc, &lex());
        assert_eq!(
            surfaces(&out)[0],
            vec![
                ("、".into(), "punct".into()),
                ("エー・メルク社".into(), "company".into()),
                ("の".into(), "particle".into())
            ]
        );
    }

    #[test]
    fn designator_after_particle_stands_alone() {
        let doc = Document::from_pairs("d", vec![vec![("は", "particle"), ("社", "noun")]]);
        let out = recognize_names(&doc, &lex());
        assert_eq!(out.sentences[0][0].pos, "particle");
        assert_eq!(out.sentences[0][1].surface, "社");
        assert_eq!(out.sentences[0][1].pos, "company");
    }

    #[test]
    fn no_designator_is_a_no_op() {
        let doc = Document::from_pairs("d", vec![vec![("日本", "place"), ("航空", "noun")]]);
        assert_eq!(recognize_names(&doc, &lex()), doc);
    }

    #[test]
    fn pronouns_and_numerals_are_not_names() {
        let doc = Document::from_pairs(
            "d",
            vec![vec![("両社", "noun"), ("が", "particle"), ("8", "num"), ("鈴木", "unknown"), ("氏", "noun")]],
        );
        let out = recognize_names(&doc, &lex());
        assert_eq!(out.sentences[0][0].pos, "noun");
        assert_eq!(out.sentences[0][3].surface, "鈴木氏");
        assert_eq!(out.sentences[0][3].pos, "person");
    }

    #[test]
    fn adjacent_recognized_names_stay_apart() {
        let doc = Document::from_pairs(
            "d",
            vec![vec![("A", "unknown"), ("社", "noun"), ("B", "unknown"), ("社", "noun")]],
        );
        let out = recognize_names(&doc, &lex());
        assert_eq!(out.sentences[0].len(), 2);
        assert_eq!(out.sentences[0][0].surface, "A社");
        assert_eq!(out.sentences[0][1].surface, "B社");
    }

    #[test]
    fn groups_connected_names() {
        let doc = Document::from_pairs(
            "d",
            vec![vec![("メルセデス", "company"), ("・", "punct"), ("ベンツ", "company")]],
        );
        let out = group_segments(&doc);
        assert_eq!(surfaces(&out)[0], vec![("メルセデス・ベンツ".into(), "company".into())]);
    }

    #[test]
    fn particle_blocks_grouping() {
        let doc = Document::from_pairs(
            "d",
            vec![vec![("X社", "company"), ("と", "particle"), ("Y社", "company")]],
        );
        assert_eq!(group_segments(&doc), doc);
        let single = Document::from_pairs("d", vec![vec![("X社", "company")]]);
        assert_eq!(group_segments(&single), single);
    }

    #[test]
    fn parenthesized_abbreviation_joins_company() {
        let doc = Document::from_pairs(
            "d",
            vec![vec![("日本電信電話", "company"), ("（", "punct"), ("NTT", "unknown"), ("）", "punct"), ("は", "particle")]],
        );
        let out = group_segments(&doc);
        assert_eq!(out.sentences[0][0].surface, "日本電信電話（NTT）");
        assert_eq!(
            split_parenthesized_abbreviation(&out.sentences[0][0].surface),
            Some(("日本電信電話", "NTT"))
        );
        assert_eq!(split_parenthesized_abbreviation("X社"), None);
    }

    #[test]
    fn lexicon_file_parsing() {
        let lex = DesignatorLexicon::parse("# names\n社\tcompany\n氏\tperson\n同社\texclude\n").unwrap();
        assert_eq!(lex.len(), 2);
        assert!(lex.is_excluded("同社"));
        assert!(DesignatorLexicon::parse("社\tcompany\n社\tperson\n").is_err());
        assert!(DesignatorLexicon::parse("社\tthing\n").is_err());
    }
}

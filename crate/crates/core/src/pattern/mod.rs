//! Template patterns: parsing, matching and best-match selection.
//!
//! A rule names its concept, points at an index element and lists the
//! elements to match in order:
//!
//! ```text
//! (JointVenture1 6
//!   @CNAME_PARTNER_SUBJ
//!   は|が:strict:P
//!   @CNAME_PARTNER_WITH
//!   と:strict:P
//!   @SKIP
//!   提携:loose:VN)
//! ```
//!
//! `@NAME` captures one or more tokens, `@SKIP` zero or more, and a literal
//! `alt1|alt2:mode:POS` exactly one.

mod matcher;
mod select;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::token::{pos, Token};

pub use matcher::{match_sentence, match_sentence_with, Span};
pub use select::{compare_matches, select_best, Scope};

pub const SKIP: &str = "@SKIP";
pub const COMPANY_VARIABLE_PREFIX: &str = "@CNAME";
pub const PARTNER_VARIABLE_PREFIX: &str = "@CNAME_PARTNER";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Whole-token equality.
    #[default]
    Strict,
    /// Substring containment.
    Loose,
}

impl MatchMode {
    fn as_str(self) -> &'static str {
        match self {
            MatchMode::Strict => "strict",
            MatchMode::Loose => "loose",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub alternatives: Vec<String>,
    pub mode: MatchMode,
    pub pos_tag: Option<String>,
}

impl Literal {
    pub fn matches(&self, tok: &Token) -> bool {
        self.matches_in(self.mode, tok)
    }

    pub fn matches_in(&self, mode: MatchMode, tok: &Token) -> bool {
        if let Some(tag) = &self.pos_tag {
            if !tag_matches(tag, &tok.pos) {
                return false;
            }
        }
        self.alternatives.iter().any(|alt| match mode {
            MatchMode::Strict => tok.surface == *alt,
            MatchMode::Loose => tok.surface.contains(alt.as_str()),
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}",
            self.alternatives.join("|"),
            self.mode.as_str(),
            self.pos_tag.as_deref().unwrap_or("")
        )
    }
}

/// Pattern tags are compared literally with token tags; the short pattern
/// tags also accept the corresponding reserved token tag, and `NP` accepts
/// grouped name units.
pub fn tag_matches(tag: &str, token_pos: &str) -> bool {
    if tag == token_pos {
        return true;
    }
    match tag {
        "P" => token_pos == pos::PARTICLE,
        "V" => token_pos == pos::VERB,
        "VN" => token_pos == pos::VERBAL_NOMINAL,
        "N" => token_pos == pos::NOUN,
        "NP" => pos::is_name(token_pos),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternElement {
    /// A capture of one or more tokens. `slot` is the name, suffixed with
    /// `#k` for the k-th repetition of the same name within a rule.
    Variable { name: String, slot: String },
    Skip,
    Literal(Literal),
}

impl PatternElement {
    pub fn is_company_variable(&self) -> bool {
        matches!(self, PatternElement::Variable { name, .. } if name.starts_with(COMPANY_VARIABLE_PREFIX))
    }

    pub fn is_partner_variable(&self) -> bool {
        matches!(self, PatternElement::Variable { name, .. } if name.starts_with(PARTNER_VARIABLE_PREFIX))
    }
}

impl fmt::Display for PatternElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternElement::Variable { name, .. } => f.write_str(name),
            PatternElement::Skip => f.write_str(SKIP),
            PatternElement::Literal(lit) => lit.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternRule {
    pub name: String,
    /// 1-based position of the index element.
    pub index_field: usize,
    pub elements: Vec<PatternElement>,
}

impl PatternRule {
    /// Rule name without trailing digits: `JointVenture1` → `JointVenture`.
    pub fn concept_group(&self) -> &str {
        self.name.trim_end_matches(|c: char| c.is_ascii_digit())
    }

    pub fn index_literal(&self) -> &Literal {
        match &self.elements[self.index_field - 1] {
            PatternElement::Literal(lit) => lit,
            _ => unreachable!("index field validated at construction"),
        }
    }

    /// Whether any token could satisfy the index element.
    pub fn admits(&self, sentence: &[Token]) -> bool {
        let lit = self.index_literal();
        sentence.iter().any(|t| lit.matches(t))
    }

    pub fn new(name: impl Into<String>, index_field: usize, elements: Vec<PatternElement>) -> Result<Self> {
        let name = name.into();
        if elements.is_empty() {
            return Err(Error::parse(0, format!("rule {name} has no elements")));
        }
        if index_field == 0 || index_field > elements.len() {
            return Err(Error::parse(
                0,
                format!("rule {name}: index field {index_field} out of range 1..={}", elements.len()),
            ));
        }
        if !matches!(elements[index_field - 1], PatternElement::Literal(_)) {
            return Err(Error::parse(
                0,
                format!("rule {name}: index field {index_field} is not a literal"),
            ));
        }
        Ok(PatternRule {
            name,
            index_field,
            elements: number_slots(elements),
        })
    }
}

impl fmt::Display for PatternRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}", self.name, self.index_field)?;
        for el in &self.elements {
            write!(f, "\n  {el}")?;
        }
        f.write_str(")")
    }
}

fn number_slots(mut elements: Vec<PatternElement>) -> Vec<PatternElement> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    for el in &mut elements {
        if let PatternElement::Variable { name, slot } = el {
            let n = seen.entry(name.clone()).or_insert(0);
            *n += 1;
            *slot = if *n == 1 { name.clone() } else { format!("{name}#{n}") };
        }
    }
    elements
}

fn parse_element(word: &str, line: usize) -> Result<PatternElement> {
    if word == SKIP {
        return Ok(PatternElement::Skip);
    }
    if word.starts_with('@') {
        if word.len() == 1 || word.contains(':') {
            return Err(Error::parse(line, format!("bad variable name {word:?}")));
        }
        return Ok(PatternElement::Variable {
            name: word.to_string(),
            slot: String::new(),
        });
    }
    let parts: Vec<&str> = word.rsplitn(3, ':').collect();
    let [tag, mode, alts] = parts[..] else {
        return Err(Error::parse(line, format!("literal {word:?} is not of the form alt:mode:POS")));
    };
    let mode = match mode {
        "" | "strict" => MatchMode::Strict,
        "loose" => MatchMode::Loose,
        other => return Err(Error::parse(line, format!("unknown match mode {other:?}"))),
    };
    let alternatives: Vec<String> = alts.split('|').map(str::to_string).collect();
    if alternatives.iter().any(String::is_empty) {
        return Err(Error::parse(line, format!("empty alternative in {word:?}")));
    }
    Ok(PatternElement::Literal(Literal {
        alternatives,
        mode,
        pos_tag: (!tag.is_empty()).then(|| tag.to_string()),
    }))
}

/// Parses a pattern file. Rules may span lines; `#` starts a comment line.
pub fn parse_pattern_file(text: &str) -> Result<Vec<PatternRule>> {
    // words of the rule being read, with their line numbers
    let mut current: Option<(usize, Vec<(String, usize)>)> = None;
    let mut rules = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.trim_start().starts_with('#') {
            continue;
        }
        let mut word = String::new();
        for ch in raw.chars().chain(std::iter::once('\n')) {
            if ch.is_whitespace() || ch == '(' || ch == ')' {
                if !word.is_empty() {
                    match current.as_mut() {
                        Some((_, words)) => words.push((std::mem::take(&mut word), line_no)),
                        None => {
                            return Err(Error::parse(line_no, format!("text {word:?} outside a rule")))
                        }
                    }
                }
                if ch == '(' {
                    if current.is_some() {
                        return Err(Error::parse(line_no, "nested '(' inside a rule"));
                    }
                    current = Some((line_no, Vec::new()));
                } else if ch == ')' {
                    let Some((start, words)) = current.take() else {
                        return Err(Error::parse(line_no, "')' without matching '('"));
                    };
                    rules.push(build_rule(start, words)?);
                }
            } else {
                word.push(ch);
            }
        }
    }
    if let Some((start, _)) = current {
        return Err(Error::parse(start, "rule is never closed"));
    }
    Ok(rules)
}

fn build_rule(start: usize, words: Vec<(String, usize)>) -> Result<PatternRule> {
    let mut it = words.into_iter();
    let (name, _) = it
        .next()
        .ok_or_else(|| Error::parse(start, "empty rule"))?;
    let (index, index_line) = it
        .next()
        .ok_or_else(|| Error::parse(start, format!("rule {name} has no index field")))?;
    let index_field: usize = index
        .parse()
        .map_err(|_| Error::parse(index_line, format!("rule {name}: index field {index:?} is not a number")))?;

    let mut elements = Vec::new();
    // words without a `:` belong to the next literal (multi-word literals)
    let mut pending: Vec<String> = Vec::new();
    let mut last_line = index_line;
    for (word, line) in it {
        last_line = line;
        if !word.starts_with('@') && !word.contains(':') {
            pending.push(word);
            continue;
        }
        if word.starts_with('@') && !pending.is_empty() {
            return Err(Error::parse(line, format!("dangling literal text {:?}", pending.join(" "))));
        }
        let full = if pending.is_empty() {
            word
        } else {
            pending.push(word);
            std::mem::take(&mut pending).join(" ")
        };
        elements.push(parse_element(&full, line)?);
    }
    if !pending.is_empty() {
        return Err(Error::parse(last_line, format!("dangling literal text {:?}", pending.join(" "))));
    }
    PatternRule::new(name, index_field, elements).map_err(|e| match e {
        Error::Parse { msg, .. } => Error::parse(start, msg),
        other => other,
    })
}

/// Renames concept groups to concept labels (`JointVenture` → `JOINT-VENTURE`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupMap {
    map: BTreeMap<String, String>,
}

impl GroupMap {
    /// Parses `group<TAB>CONCEPT_LABEL` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
                return Err(Error::parse(idx + 1, "expected `group<TAB>CONCEPT_LABEL`"));
            }
            if map.insert(fields[0].to_string(), fields[1].to_string()).is_some() {
                return Err(Error::parse(idx + 1, format!("duplicate group {}", fields[0])));
            }
        }
        Ok(GroupMap { map })
    }

    pub fn insert(&mut self, group: &str, label: &str) {
        self.map.insert(group.to_string(), label.to_string());
    }

    /// Mapped label, or the group name in upper kebab case when unmapped.
    pub fn label(&self, group: &str) -> String {
        self.map
            .get(group)
            .cloned()
            .unwrap_or_else(|| default_label(group))
    }
}

pub(crate) fn default_label(group: &str) -> String {
    let mut out = String::new();
    for (i, ch) in group.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.extend(ch.to_uppercase());
    }
    out
}

/// One assignment of rule elements to token spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatch {
    pub rule: String,
    pub group: String,
    /// Concept label used for per-concept selection. Defaults to the group
    /// in upper kebab case; see [`GroupMap`].
    pub concept: String,
    pub sent_index: usize,
    /// One span per rule element, in rule order.
    pub spans: Vec<Span>,
    /// Variable slot → captured span, in rule order. `@SKIP` is not bound.
    pub bindings: Vec<(String, Span)>,
    /// Index of the token matched by the index element.
    pub index_token: usize,
    /// Tokens from the first to the last non-empty element.
    pub consumed: usize,
    /// Company-name variables whose span holds a company token.
    pub cname_filled: usize,
    /// Variables and literals that consumed at least one token.
    pub elements_matched: usize,
}

impl PatternMatch {
    pub fn start(&self) -> usize {
        self.spans
            .iter()
            .find(|s| !s.is_empty())
            .map(|s| s.start)
            .unwrap_or(0)
    }

    pub fn binding(&self, slot: &str) -> Option<Span> {
        self.bindings.iter().find(|(s, _)| s == slot).map(|(_, sp)| *sp)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const JOINT_VENTURE_RULE: &str = "(JointVenture1 6\n  @CNAME_PARTNER_SUBJ\n  は|が:strict:P\n  @CNAME_PARTNER_WITH\n  と:strict:P\n  @SKIP\n  提携:loose:VN)";
    const ENGLISH_RULE: &str = "(JointVenture1 3\n  @CNAME_PARTNER_SUBJ\n  create::V\n  a joint venture::NP\n  with::P\n  @CNAME_PARTNER_WITH)";

    fn lit(alts: &[&str], mode: MatchMode, tag: &str) -> PatternElement {
        PatternElement::Literal(Literal {
            alternatives: alts.iter().map(|s| s.to_string()).collect(),
            mode,
            pos_tag: Some(tag.to_string()),
        })
    }

    fn var(name: &str) -> PatternElement {
        PatternElement::Variable {
            name: name.into(),
            slot: name.into(),
        }
    }

    #[test]
    fn parses_japanese_joint_venture_rule() {
        let rules = parse_pattern_file(JOINT_VENTURE_RULE).unwrap();
        assert_eq!(rules.len(), 1);
        let r = &rules[0];
        assert_eq!(r.name, "JointVenture1");
        assert_eq!(r.concept_group(), "JointVenture");
        assert_eq!(r.index_field, 6);
        assert_eq!(
            r.elements,
            vec![
                var("@CNAME_PARTNER_SUBJ"),
                lit(&["は", "が"], MatchMode::Strict, "P"),
                var("@CNAME_PARTNER_WITH"),
                lit(&["と"], MatchMode::Strict, "P"),
                PatternElement::Skip,
                lit(&["提携"], MatchMode::Loose, "VN"),
            ]
        );
        assert_eq!(r.index_literal().alternatives, vec!["提携"]);
    }

    #[test]
    fn parses_english_rule_with_multi_word_literal() {
        let r = &parse_pattern_file(ENGLISH_RULE).unwrap()[0];
        assert_eq!(r.index_field, 3);
        assert_eq!(r.elements.len(), 5);
        assert_eq!(r.elements[2], lit(&["a joint venture"], MatchMode::Strict, "NP"));
        assert_eq!(r.elements[1], lit(&["create"], MatchMode::Strict, "V"));
    }

    #[test]
    fn display_round_trips() {
        let r = &parse_pattern_file(JOINT_VENTURE_RULE).unwrap()[0];
        assert_eq!(&parse_pattern_file(&r.to_string()).unwrap()[0], r);
    }

    #[test]
    fn repeated_variables_get_distinct_slots() {
        let r = &parse_pattern_file(
            "(EconomicActivityE 6 @CNAME_PARTNER_SUBJ は|が:strict:P @CNAME_PARTNER_SUBJ の:strict:P @SKIP 開発:loose:VN)",
        )
        .unwrap()[0];
        let slots: Vec<&str> = r
            .elements
            .iter()
            .filter_map(|e| match e {
                PatternElement::Variable { slot, .. } => Some(slot.as_str()),
                _ => None,
            })
            .collect();
        assert_eq!(slots, vec!["@CNAME_PARTNER_SUBJ", "@CNAME_PARTNER_SUBJ#2"]);
    }

    #[test]
    fn rule_errors() {
        assert!(matches!(parse_pattern_file("(R 2 @SKIP)"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_pattern_file("(R 1 @X)").is_err());
        assert!(parse_pattern_file("(R 1 a:fuzzy:P)").is_err());
        assert!(parse_pattern_file("()").is_err());
        assert!(parse_pattern_file("(R)").is_err());
        assert!(parse_pattern_file("(R x a::P)").is_err());
        assert!(parse_pattern_file("(R 1 a::P").is_err());
        assert!(parse_pattern_file("R 1 a::P)").is_err());
        assert!(parse_pattern_file("(R 1 a::P dangling)").is_err());
        assert!(parse_pattern_file("(R 1 |a::P)").is_err());
        let err = parse_pattern_file("# c\n\n(R 3\n @A\n b::P)").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn omitted_mode_is_strict_and_tag_aliases_apply() {
        let r = &parse_pattern_file("(R 1 と::P)").unwrap()[0];
        let lit = r.index_literal();
        assert_eq!(lit.mode, MatchMode::Strict);
        assert!(lit.matches(&Token::new("と", "particle")));
        assert!(lit.matches(&Token::new("と", "P")));
        assert!(!lit.matches(&Token::new("と", "noun")));
        assert!(tag_matches("NP", "company"));
        assert!(!tag_matches("NP", "noun"));
    }

    #[test]
    fn loose_matches_compounds() {
        let r = &parse_pattern_file("(R 1 提携:loose:VN)").unwrap()[0];
        assert!(r.index_literal().matches(&Token::new("企業提携", "verbal-nominal")));
        assert!(r.index_literal().matches(&Token::new("提携", "verbal-nominal")));
        assert!(!r.index_literal().matches_in(MatchMode::Strict, &Token::new("企業提携", "verbal-nominal")));
    }

    #[test]
    fn group_map_labels() {
        let mut m = GroupMap::parse("# groups\nEconomicActivityE\tECONOMIC-ACTIVITY\n").unwrap();
        assert_eq!(m.label("EconomicActivityE"), "ECONOMIC-ACTIVITY");
        assert_eq!(m.label("JointVenture"), "JOINT-VENTURE");
        m.insert("Establish", "ESTABLISH");
        assert_eq!(m.label("Establish"), "ESTABLISH");
        assert!(GroupMap::parse("a\n").is_err());
    }
}

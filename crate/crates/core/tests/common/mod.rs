//! Independent oracles and random generators shared by the test targets.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use tieup_core::discourse::{lcs_length, CompanyRegistry};
use tieup_core::pattern::{parse_pattern_file, Literal, MatchMode, PatternElement, PatternRule, Span};
use tieup_core::score::{compare_objects, Aligned};
use tieup_core::template::{ActivityObject, EntityObject, Object, Status, TemplateGraph, TieUpObject};
use tieup_core::token::{parse_corpus, Document, Token};
use tieup_core::{ConceptLexicon, DesignatorLexicon, Extractor, GroupMap};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn fixture_docs(name: &str) -> Vec<Document> {
    parse_corpus(&read_fixture(name)).unwrap()
}

/// Extractor loaded with the shipped lexicons and rules.
pub fn shipped_extractor() -> Extractor {
    let read = |n: &str| std::fs::read_to_string(data_path(n)).unwrap();
    Extractor::new(
        DesignatorLexicon::parse(&read("designators.tsv")).unwrap(),
        ConceptLexicon::parse(&read("concepts.lex")).unwrap(),
        parse_pattern_file(&read("patterns.pat")).unwrap(),
        GroupMap::parse(&read("concept_map.tsv")).unwrap(),
    )
}

// ---- longest common subsequence

fn is_subsequence(sub: &[char], of: &[char]) -> bool {
    let mut it = of.iter();
    sub.iter().all(|c| it.any(|d| d == c))
}

/// Longest subsequence of the shorter string that also occurs in the
/// longer one, found by trying every subsequence.
pub fn lcs_by_enumeration(a: &str, b: &str) -> usize {
    let (mut s, mut t): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    if s.len() > t.len() {
        std::mem::swap(&mut s, &mut t);
    }
    assert!(s.len() <= 16, "oracle limited to short strings");
    let mut best = 0;
    for mask in 0u32..(1 << s.len()) {
        let ones = mask.count_ones() as usize;
        if ones <= best {
            continue;
        }
        let sub: Vec<char> = (0..s.len()).filter(|k| mask >> k & 1 == 1).map(|k| s[k]).collect();
        if is_subsequence(&sub, &t) {
            best = ones;
        }
    }
    best
}

pub fn random_string(rng: &mut impl Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

// ---- abbreviation unification

/// Direct transcription of the pairwise scan: returns 1-based ids.
pub fn unify_reference(strings: &[&str]) -> Vec<usize> {
    let mut id: Vec<usize> = (1..=strings.len()).collect();
    for i in 0..strings.len() {
        if id[i] != i + 1 {
            continue;
        }
        let eg = !strings[i].is_empty() && strings[i].chars().all(|c| c.is_ascii_alphabetic());
        let len_src = strings[i].chars().count();
        for j in i + 1..strings.len() {
            if id[j] != j + 1 {
                continue;
            }
            let l = lcs_by_enumeration(strings[i], strings[j]);
            let len = strings[j].chars().count();
            let ok = if eg { len_src == l && l == len } else { l == len };
            if l >= 2 && ok {
                id[j] = id[i];
            }
        }
    }
    id
}

pub fn random_registry_strings(rng: &mut impl Rng) -> Vec<String> {
    const ALPHABET: [char; 6] = ['ア', 'イ', 'ウ', '社', 'A', 'B'];
    let n = rng.gen_range(1..=8);
    (0..n)
        .map(|_| loop {
            let s = random_string(rng, &ALPHABET, 5);
            if !s.is_empty() {
                break s;
            }
        })
        .collect()
}

pub fn registry_of(strings: &[String]) -> CompanyRegistry {
    let names: Vec<(&str, &str)> = strings.iter().map(|s| (s.as_str(), "company")).collect();
    CompanyRegistry::from_names(&names)
}

/// Every rewritten id satisfies the abbreviation condition against its root.
pub fn abbreviation_invariant(reg: &CompanyRegistry) -> bool {
    reg.entries().iter().enumerate().all(|(k, e)| {
        if e.id.0 == k + 1 {
            return true;
        }
        let root = reg.root(e.id);
        let l = lcs_length(&root.string, &e.string);
        let len = e.string.chars().count();
        e.id.0 < k + 1 && root.id == e.id && l >= 2 && l == len && (!root.eg || root.string == e.string)
    })
}

// ---- pattern matching

pub const VOCAB: [&str; 5] = ["a", "b", "ab", "ba", "c"];
pub const TAGS: [&str; 3] = ["noun", "particle", "company"];

pub fn random_sentence(rng: &mut impl Rng, max_len: usize) -> Vec<Token> {
    let len = rng.gen_range(0..=max_len);
    let pairs: Vec<(&str, &str)> = (0..len)
        .map(|_| (*VOCAB.choose(rng).unwrap(), *TAGS.choose(rng).unwrap()))
        .collect();
    Document::from_pairs("r", vec![pairs]).sentences.remove(0)
}

fn random_literal(rng: &mut impl Rng) -> Literal {
    let n = rng.gen_range(1..=2);
    let alternatives = (0..n).map(|_| VOCAB.choose(rng).unwrap().to_string()).collect();
    let mode = if rng.gen_bool(0.5) { MatchMode::Strict } else { MatchMode::Loose };
    let pos_tag = match rng.gen_range(0..4) {
        0 => Some("P".to_string()),
        1 => Some(TAGS.choose(rng).unwrap().to_string()),
        _ => None,
    };
    Literal { alternatives, mode, pos_tag }
}

pub fn random_rule(rng: &mut impl Rng, name: &str, max_elements: usize) -> PatternRule {
    let k = rng.gen_range(1..=max_elements);
    let index = rng.gen_range(1..=k);
    let elements = (1..=k)
        .map(|i| match (i == index, rng.gen_range(0..4)) {
            (true, _) | (false, 0) => PatternElement::Literal(random_literal(rng)),
            (false, 1) => PatternElement::Skip,
            (false, 2) => PatternElement::Variable {
                name: "@CNAME_PARTNER_SUBJ".into(),
                slot: String::new(),
            },
            _ => PatternElement::Variable {
                name: "@OBJ".into(),
                slot: String::new(),
            },
        })
        .collect();
    PatternRule::new(name, index, elements).unwrap()
}

/// Literal predicate written out from the token level.
pub fn literal_holds(lit: &Literal, tok: &Token) -> bool {
    let tag_ok = match lit.pos_tag.as_deref() {
        None => true,
        Some("P") => tok.pos == "particle" || tok.pos == "P",
        Some(t) => tok.pos == t,
    };
    tag_ok
        && lit.alternatives.iter().any(|a| match lit.mode {
            MatchMode::Strict => tok.surface == *a,
            MatchMode::Loose => tok.surface.contains(a.as_str()),
        })
}

/// Every assignment of elements to consecutive spans, from every start.
pub fn enumerate_matches(sentence: &[Token], rule: &PatternRule) -> Vec<Vec<Span>> {
    fn go(s: &[Token], els: &[PatternElement], i: usize, p: usize, acc: &mut Vec<Span>, out: &mut Vec<Vec<Span>>) {
        if i == els.len() {
            out.push(acc.clone());
            return;
        }
        let n = s.len();
        let ends: Vec<usize> = match &els[i] {
            PatternElement::Variable { .. } => (p + 1..=n).collect(),
            PatternElement::Skip => (p..=n).collect(),
            PatternElement::Literal(lit) => {
                if p < n && literal_holds(lit, &s[p]) {
                    vec![p + 1]
                } else {
                    vec![]
                }
            }
        };
        for e in ends {
            acc.push(Span::new(p, e));
            go(s, els, i + 1, e, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    for start in 0..=sentence.len() {
        go(sentence, &rule.elements, 0, start, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

// ---- templates and scoring

pub fn random_graph(rng: &mut impl Rng, doc_id: &str, max_per_kind: usize) -> TemplateGraph {
    const NAMES: [&str; 6] = ["X社", "Y社", "日本電気", "NTT", "エー・メルク社", "合弁\"会社\""];
    // at least one entity so that a graph always has fills to score
    let n_entities = rng.gen_range(1..=max_per_kind.max(1));
    let entities: Vec<EntityObject> = (1..=n_entities)
        .map(|id| EntityObject {
            id,
            name: NAMES.choose(rng).unwrap().to_string(),
            aliases: (0..rng.gen_range(0..3)).map(|k| format!("別名{k}")).collect(),
            entity_type: "COMPANY".into(),
        })
        .collect();
    let n_activities = rng.gen_range(0..=max_per_kind);
    let activities: Vec<ActivityObject> = (1..=n_activities)
        .map(|id| ActivityObject {
            id,
            description: ["開発", "販売", "生産"].choose(rng).unwrap().to_string(),
        })
        .collect();
    let n_tieups = rng.gen_range(0..=max_per_kind);
    let tie_ups = (1..=n_tieups)
        .map(|id| {
            let mut ids: Vec<usize> = (1..=n_entities).collect();
            ids.shuffle(rng);
            ids.truncate(rng.gen_range(1..=n_entities.min(3)));
            TieUpObject {
                id,
                entities: ids,
                joint_venture: rng.gen_bool(0.5).then(|| rng.gen_range(1..=n_entities)),
                activities: (1..=n_activities).filter(|_| rng.gen_bool(0.5)).collect(),
                status: if rng.gen_bool(0.5) { Status::Existing } else { Status::Dissolved },
            }
        })
        .collect();
    TemplateGraph {
        doc_id: doc_id.to_string(),
        tie_ups,
        entities,
        activities,
    }
}

/// Per-type aligner that tries every partial one-to-one pairing and keeps
/// one with the most correct fills.
pub fn align_exhaustive(keys: &[&Object], responses: &[&Object], aligned: &Aligned) -> Vec<(usize, usize)> {
    let cor: BTreeMap<(usize, usize), u64> = keys
        .iter()
        .enumerate()
        .flat_map(|(i, k)| {
            responses
                .iter()
                .enumerate()
                .map(move |(j, r)| ((i, j), compare_objects(k, r, aligned).values().map(|c| c.cor).sum()))
        })
        .collect();
    fn go(
        i: usize,
        n: usize,
        m: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        score: u64,
        cor: &BTreeMap<(usize, usize), u64>,
        best: &mut (u64, Vec<(usize, usize)>),
    ) {
        if i == n {
            if score > best.0 {
                *best = (score, cur.clone());
            }
            return;
        }
        go(i + 1, n, m, used, cur, score, cor, best);
        for j in 0..m {
            if !used[j] && cor[&(i, j)] > 0 {
                used[j] = true;
                cur.push((i, j));
                go(i + 1, n, m, used, cur, score + cor[&(i, j)], cor, best);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut best = (0, Vec::new());
    go(0, keys.len(), responses.len(), &mut vec![false; responses.len()], &mut Vec::new(), 0, &cor, &mut best);
    best.1
}

//! Inputs shared by the benchmarks under `benches/`.

use tieup_core::pattern::parse_pattern_file;
use tieup_core::token::parse_corpus;
use tieup_core::{ConceptLexicon, DesignatorLexicon, Document, Extractor, GroupMap};

const DESIGNATORS: &str = include_str!("../../core/data/designators.tsv");
const CONCEPTS: &str = include_str!("../../core/data/concepts.lex");
const PATTERNS: &str = include_str!("../../core/data/patterns.pat");
const CONCEPT_MAP: &str = include_str!("../../core/data/concept_map.tsv");
const TANABE: &str = include_str!("../../core/tests/fixtures/tanabe.tok");
const XYZ: &str = include_str!("../../core/tests/fixtures/xyz.tok");

pub fn shipped_extractor() -> Extractor {
    Extractor::new(
        DesignatorLexicon::parse(DESIGNATORS).expect("designators"),
        ConceptLexicon::parse(CONCEPTS).expect("concepts"),
        parse_pattern_file(PATTERNS).expect("patterns"),
        GroupMap::parse(CONCEPT_MAP).expect("concept map"),
    )
}

/// The sample articles concatenated `copies` times into one document.
pub fn long_document(copies: usize) -> Document {
    let mut sentences = Vec::new();
    for _ in 0..copies {
        for text in [TANABE, XYZ] {
            for doc in parse_corpus(text).expect("fixture") {
                sentences.extend(doc.sentences);
            }
        }
    }
    let pairs = sentences
        .iter()
        .map(|s| s.iter().map(|t| (t.surface.as_str(), t.pos.as_str())).collect())
        .collect();
    Document::from_pairs("bench", pairs)
}

/// The longest sentence of the sample articles.
pub fn long_sentence() -> Document {
    let doc = parse_corpus(TANABE).expect("fixture").remove(0);
    let longest = doc.sentences.into_iter().max_by_key(Vec::len).unwrap_or_default();
    let pairs = vec![longest.iter().map(|t| (t.surface.as_str(), t.pos.as_str())).collect()];
    Document::from_pairs("sentence", pairs)
}

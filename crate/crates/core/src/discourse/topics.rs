use std::collections::BTreeSet;

use super::registry::{CompanyId, CompanyRegistry};
use crate::config::DiscourseConfig;
use crate::token::Document;

/// Topic companies per sentence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopicState {
    pub topics: Vec<BTreeSet<CompanyId>>,
    /// The sentence had no marked company and took the previous topics.
    pub inherited: Vec<bool>,
}

impl TopicState {
    pub fn of(&self, sent_index: usize) -> &BTreeSet<CompanyId> {
        &self.topics[sent_index]
    }
}

/// A company immediately followed by a subject marker is a topic of its
/// sentence. A sentence without one inherits the previous sentence's topics.
pub fn track_topics(doc: &Document, registry: &CompanyRegistry, cfg: &DiscourseConfig) -> TopicState {
    let mut state = TopicState::default();
    for (s, sentence) in doc.sentences.iter().enumerate() {
        let marked: BTreeSet<CompanyId> = sentence
            .windows(2)
            .filter(|w| cfg.is_subject_marker(&w[1].surface))
            .filter_map(|w| registry.company_at(s, w[0].tok_index))
            .collect();
        if marked.is_empty() && s > 0 {
            let prev = state.topics[s - 1].clone();
            state.topics.push(prev);
            state.inherited.push(true);
        } else {
            state.topics.push(marked);
            state.inherited.push(false);
        }
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(sentences: Vec<Vec<(&str, &str)>>) -> (TopicState, CompanyRegistry) {
        let doc = Document::from_pairs("d", sentences);
        let cfg = DiscourseConfig::default();
        let reg = CompanyRegistry::from_document(&doc, &cfg).unify();
        (track_topics(&doc, &reg, &cfg), reg)
    }

    #[test]
    fn marked_company_is_topic() {
        let (t, reg) = run(vec![vec![("X社", "company"), ("は", "particle"), ("最大手", "noun")]]);
        assert_eq!(t.topics[0], BTreeSet::from([reg.entry(1).id]));
        assert!(!t.inherited[0]);
    }

    #[test]
    fn unmarked_sentence_inherits() {
        let (t, _) = run(vec![
            vec![("X社", "company"), ("は", "particle"), ("最大手", "noun"), ("。", "punct")],
            vec![("同社", "noun"), ("の", "particle"), ("社長", "noun"), ("は", "particle"), ("鈴木氏", "person"), ("。", "punct")],
        ]);
        assert_eq!(t.topics[1], BTreeSet::from([CompanyId(1)]));
        assert!(t.inherited[1]);
    }

    #[test]
    fn predicate_position_company_is_missed() {
        let (t, _) = run(vec![
            vec![("Y社", "company"), ("が", "particle"), ("発表", "verbal-nominal")],
            vec![("提携先", "noun"), ("は", "particle"), ("X社", "company"), ("。", "punct")],
        ]);
        assert_eq!(t.topics[1], BTreeSet::from([CompanyId(1)]));
        assert!(t.inherited[1]);
    }

    #[test]
    fn first_sentence_without_topic_is_empty() {
        let (t, _) = run(vec![vec![("新薬", "noun")], vec![("X社", "company")]]);
        assert!(t.topics[0].is_empty());
        assert!(t.topics[1].is_empty());
    }
}

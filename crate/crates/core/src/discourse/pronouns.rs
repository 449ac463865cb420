use std::collections::BTreeSet;

use super::registry::{CompanyId, CompanyRegistry};
use super::topics::TopicState;
use crate::config::DiscourseConfig;
use crate::token::Document;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PronounKind {
    /// 両社, both companies of the current tie-up.
    Both,
    /// 同社, the company.
    Same,
    /// 自社, the company itself.
    Itself,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounReference {
    pub sent_index: usize,
    pub tok_index: usize,
    pub kind: PronounKind,
    /// Empty when the pronoun could not be resolved.
    pub referents: BTreeSet<CompanyId>,
}

/// Resolves company pronouns.
///
/// `current_tieup[s]` holds the partner ids of the tie-up in force at
/// sentence `s` (empty before the first tie-up).
pub fn resolve_pronouns(
    doc: &Document,
    registry: &CompanyRegistry,
    topics: &TopicState,
    current_tieup: &[BTreeSet<CompanyId>],
    cfg: &DiscourseConfig,
) -> Vec<PronounReference> {
    let mut out = Vec::new();
    for (s, sentence) in doc.sentences.iter().enumerate() {
        for tok in sentence {
            let kind = if tok.surface == cfg.pronoun_both {
                PronounKind::Both
            } else if tok.surface == cfg.pronoun_same {
                PronounKind::Same
            } else if tok.surface == cfg.pronoun_self {
                PronounKind::Itself
            } else {
                continue;
            };
            let topic = topics.topics.get(s).cloned().unwrap_or_default();
            let referents = match kind {
                PronounKind::Both => current_tieup.get(s).cloned().unwrap_or_default(),
                PronounKind::Itself => topic,
                PronounKind::Same => {
                    let preceding: Vec<CompanyId> = (0..tok.tok_index)
                        .filter_map(|k| registry.company_at(s, k))
                        .collect();
                    let distinct: BTreeSet<_> = preceding.iter().copied().collect();
                    if distinct.len() >= 2 {
                        BTreeSet::from([*preceding.last().unwrap()])
                    } else {
                        topic
                    }
                }
            };
            out.push(PronounReference {
                sent_index: s,
                tok_index: tok.tok_index,
                kind,
                referents,
            });
        }
    }
    out
}

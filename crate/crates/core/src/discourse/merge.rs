use std::collections::{BTreeMap, BTreeSet};

use super::pronouns::PronounReference;
use super::registry::{CompanyId, CompanyRegistry};
use super::segment::DiscourseSegment;
use super::topics::TopicState;
use crate::concept::{compound_runs, ConceptHit};
use crate::pattern::{PatternMatch, Span, PARTNER_VARIABLE_PREFIX};
use crate::token::Token;

/// Pronoun position → resolved company ids.
pub type Referents = BTreeMap<(usize, usize), BTreeSet<CompanyId>>;

pub fn referent_map(pronouns: &[PronounReference]) -> Referents {
    pronouns
        .iter()
        .map(|p| ((p.sent_index, p.tok_index), p.referents.clone()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConceptSource {
    ConceptSearch,
    Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub slot: String,
    pub span: Span,
    pub text: String,
    /// Companies mentioned in the span, in text order, pronouns resolved.
    pub ids: Vec<CompanyId>,
    /// Last compound run of the span, used when no company is mentioned.
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptInstance {
    pub label: String,
    pub sent_index: usize,
    /// Token index where the instance starts, for ordering.
    pub position: usize,
    pub source: ConceptSource,
    pub rule: Option<String>,
    /// Surface of the index token for pattern instances, the matched run
    /// for concept-search instances.
    pub text: String,
    pub bindings: Vec<Binding>,
    /// Companies bound by partner variables.
    pub partner_ids: BTreeSet<CompanyId>,
    /// Partner ids, or the sentence topics when there are none.
    pub subject_ids: BTreeSet<CompanyId>,
}

impl ConceptInstance {
    /// A pattern instance relating two or more partner companies.
    pub fn is_tieup(&self) -> bool {
        self.source == ConceptSource::Pattern && self.partner_ids.len() >= 2
    }

    pub fn binding(&self, slot: &str) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.slot == slot)
    }

    pub fn from_match(
        m: &PatternMatch,
        sentence: &[Token],
        registry: &CompanyRegistry,
        referents: &Referents,
        topics: &TopicState,
    ) -> Self {
        let s = m.sent_index;
        let bindings: Vec<Binding> = m
            .bindings
            .iter()
            .map(|(slot, span)| {
                let tokens = span.tokens(sentence);
                let mut ids = Vec::new();
                for tok in tokens {
                    let found: Vec<CompanyId> = match referents.get(&(s, tok.tok_index)) {
                        Some(r) => r.iter().copied().collect(),
                        None => registry.company_at(s, tok.tok_index).into_iter().collect(),
                    };
                    for id in found {
                        if !ids.contains(&id) {
                            ids.push(id);
                        }
                    }
                }
                Binding {
                    slot: slot.clone(),
                    span: *span,
                    text: span.text(sentence),
                    ids,
                    head: compound_runs(tokens).pop().map(|r| r.text).unwrap_or_default(),
                }
            })
            .collect();
        let partner_ids: BTreeSet<CompanyId> = bindings
            .iter()
            .filter(|b| b.slot.starts_with(PARTNER_VARIABLE_PREFIX))
            .flat_map(|b| b.ids.iter().copied())
            .collect();
        let subject_ids = if partner_ids.is_empty() {
            topics.topics.get(s).cloned().unwrap_or_default()
        } else {
            partner_ids.clone()
        };
        ConceptInstance {
            label: m.concept.clone(),
            sent_index: s,
            position: m.start(),
            source: ConceptSource::Pattern,
            rule: Some(m.rule.clone()),
            text: sentence[m.index_token].surface.clone(),
            bindings,
            partner_ids,
            subject_ids,
        }
    }

    pub fn from_hit(hit: &ConceptHit, topics: &TopicState) -> Self {
        ConceptInstance {
            label: hit.concept.clone(),
            sent_index: hit.sent_index,
            position: hit.run_start,
            source: ConceptSource::ConceptSearch,
            rule: None,
            text: hit.matched_run.clone(),
            bindings: Vec::new(),
            partner_ids: BTreeSet::new(),
            subject_ids: topics.topics.get(hit.sent_index).cloned().unwrap_or_default(),
        }
    }
}

/// The concepts merged into one segment's tie-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieUpCluster {
    pub segment: DiscourseSegment,
    pub concepts: Vec<ConceptInstance>,
}

/// Attaches every concept inside the segment whose subjects share a company
/// with the segment's tie-up. The rest of the segment's concepts are
/// returned as unattached.
pub fn merge_concepts(
    segment: &DiscourseSegment,
    concepts: &[ConceptInstance],
) -> (TieUpCluster, Vec<ConceptInstance>) {
    let mut attached = Vec::new();
    let mut unattached = Vec::new();
    for c in concepts.iter().filter(|c| segment.contains(c.sent_index)) {
        if c.subject_ids.is_disjoint(&segment.tieup_ids) {
            unattached.push(c.clone());
        } else {
            attached.push(c.clone());
        }
    }
    (
        TieUpCluster {
            segment: segment.clone(),
            concepts: attached,
        },
        unattached,
    )
}

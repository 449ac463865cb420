use std::collections::BTreeSet;
use std::fmt;

use super::merge::ConceptInstance;
use super::registry::CompanyId;
use crate::token::Document;

/// Diagnostic shape of the tie-up discourse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureLabel {
    /// Tie-ups described one after another.
    TypeI,
    /// A tie-up that reappears after others were described.
    TypeII,
    Unlabeled,
}

impl fmt::Display for StructureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureLabel::TypeI => "type-I",
            StructureLabel::TypeII => "type-II",
            StructureLabel::Unlabeled => "unlabeled",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscourseSegment {
    /// First and last sentence, inclusive.
    pub first: usize,
    pub last: usize,
    pub tieup_ids: BTreeSet<CompanyId>,
    pub label: StructureLabel,
}

impl DiscourseSegment {
    pub fn contains(&self, sent_index: usize) -> bool {
        (self.first..=self.last).contains(&sent_index)
    }
}

/// Splits the discourse wherever a tie-up with a different partner set is
/// mentioned. Only instances with two or more partner ids count as tie-ups.
///
/// Sentences before the first tie-up belong to no segment. A document
/// without tie-ups yields one unlabeled segment with no ids.
pub fn segment_discourse(doc: &Document, concepts: &[ConceptInstance]) -> Vec<DiscourseSegment> {
    let last_sentence = doc.sentences.len().saturating_sub(1);
    let mut tieups: Vec<&ConceptInstance> = concepts.iter().filter(|c| c.is_tieup()).collect();
    tieups.sort_by_key(|c| (c.sent_index, c.position));

    let mut segments: Vec<DiscourseSegment> = Vec::new();
    for inst in tieups {
        match segments.last_mut() {
            Some(cur) if cur.tieup_ids == inst.partner_ids => {}
            // one segment per sentence at most; a later differing tie-up in
            // the same sentence does not split it
            Some(cur) if cur.first == inst.sent_index => {}
            cur => {
                if let Some(cur) = cur {
                    cur.last = inst.sent_index - 1;
                }
                segments.push(DiscourseSegment {
                    first: inst.sent_index,
                    last: last_sentence,
                    tieup_ids: inst.partner_ids.clone(),
                    label: StructureLabel::Unlabeled,
                });
            }
        }
    }

    if segments.is_empty() {
        return vec![DiscourseSegment {
            first: 0,
            last: last_sentence,
            tieup_ids: BTreeSet::new(),
            label: StructureLabel::Unlabeled,
        }];
    }
    if segments.len() >= 2 {
        for k in 0..segments.len() {
            let seen = segments[..k].iter().any(|s| s.tieup_ids == segments[k].tieup_ids);
            segments[k].label = if seen { StructureLabel::TypeII } else { StructureLabel::TypeI };
        }
    }
    segments
}

/// Partner ids of the tie-up in force at each sentence.
pub fn current_tieups(segments: &[DiscourseSegment], sentence_count: usize) -> Vec<BTreeSet<CompanyId>> {
    (0..sentence_count)
        .map(|s| {
            segments
                .iter()
                .find(|seg| seg.contains(s))
                .map(|seg| seg.tieup_ids.clone())
                .unwrap_or_default()
        })
        .collect()
}

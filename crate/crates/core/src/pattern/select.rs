use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::PatternMatch;

/// Bucketing for best-match selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// One winner per sentence.
    PerSentence,
    /// One winner per sentence and concept label.
    PerConceptGroup,
}

/// Preference order between two matches; `Less` means `a` is preferred.
///
/// In order: more filled company-name variables, fewer consumed tokens,
/// more matched variables and literals, earlier start, rule name, spans.
pub fn compare_matches(a: &PatternMatch, b: &PatternMatch) -> Ordering {
    b.cname_filled
        .cmp(&a.cname_filled)
        .then(a.consumed.cmp(&b.consumed))
        .then(b.elements_matched.cmp(&a.elements_matched))
        .then(a.start().cmp(&b.start()))
        .then_with(|| a.rule.cmp(&b.rule))
        .then_with(|| a.spans.cmp(&b.spans))
}

/// Picks exactly one winner per bucket. Output is ordered by bucket key.
pub fn select_best(matches: &[PatternMatch], scope: Scope) -> Vec<PatternMatch> {
    let mut buckets: BTreeMap<(usize, &str), &PatternMatch> = BTreeMap::new();
    for m in matches {
        let key = match scope {
            Scope::PerSentence => (m.sent_index, ""),
            Scope::PerConceptGroup => (m.sent_index, m.concept.as_str()),
        };
        buckets
            .entry(key)
            .and_modify(|best| {
                if compare_matches(m, best) == Ordering::Less {
                    *best = m;
                }
            })
            .or_insert(m);
    }
    buckets.into_values().cloned().collect()
}

//! All-matches finite-state recognizer.
//!
//! Each rule is read as a chain of states, one per element. A variable
//! state loops on any token once it has consumed one, `@SKIP` may also be
//! left without consuming, and a literal state advances on exactly one
//! satisfying token. Threads are advanced token by token from every start
//! position; every thread reaching the final state is one match.

use std::fmt;

use super::{PatternElement, PatternMatch, PatternRule};
use crate::token::{pos, Token};

/// Half-open token range `[start, end)` within a sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn tokens<'a>(&self, sentence: &'a [Token]) -> &'a [Token] {
        &sentence[self.start..self.end]
    }

    pub fn text(&self, sentence: &[Token]) -> String {
        self.tokens(sentence).iter().map(|t| t.surface.as_str()).collect()
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone)]
struct Thread {
    elem: usize,
    /// Start of the open variable or skip, if inside one.
    open: Option<usize>,
    spans: Vec<Span>,
}

/// Every match of every rule in the sentence, using the index prefilter.
pub fn match_sentence(sentence: &[Token], rules: &[PatternRule]) -> Vec<PatternMatch> {
    match_sentence_with(sentence, rules, true)
}

pub fn match_sentence_with(sentence: &[Token], rules: &[PatternRule], prefilter: bool) -> Vec<PatternMatch> {
    let mut out = Vec::new();
    for rule in rules {
        if prefilter && !rule.admits(sentence) {
            continue;
        }
        for spans in run_rule(sentence, rule) {
            out.push(build_match(sentence, rule, spans));
        }
    }
    out
}

fn run_rule(sentence: &[Token], rule: &PatternRule) -> Vec<Vec<Span>> {
    let n = sentence.len();
    let k = rule.elements.len();
    let mut accepted = Vec::new();

    for start in 0..=n {
        let mut active = vec![Thread {
            elem: 0,
            open: None,
            spans: Vec::with_capacity(k),
        }];
        for p in start..=n {
            // epsilon moves: close open variables and skips
            let mut closure = Vec::with_capacity(active.len() * 2);
            let mut stack = active;
            while let Some(th) = stack.pop() {
                if th.elem == k {
                    accepted.push(th.spans);
                    continue;
                }
                match (&rule.elements[th.elem], th.open) {
                    (PatternElement::Variable { .. } | PatternElement::Skip, Some(s)) => {
                        let mut next = th.clone();
                        next.spans.push(Span::new(s, p));
                        next.elem += 1;
                        next.open = None;
                        stack.push(next);
                    }
                    (PatternElement::Skip, None) => {
                        let mut next = th.clone();
                        next.spans.push(Span::new(p, p));
                        next.elem += 1;
                        stack.push(next);
                    }
                    _ => {}
                }
                closure.push(th);
            }

            if p == n {
                break;
            }
            let tok = &sentence[p];
            active = Vec::with_capacity(closure.len());
            for mut th in closure {
                match &rule.elements[th.elem] {
                    PatternElement::Literal(lit) => {
                        if lit.matches(tok) {
                            th.spans.push(Span::new(p, p + 1));
                            th.elem += 1;
                            active.push(th);
                        }
                    }
                    PatternElement::Variable { .. } | PatternElement::Skip => {
                        th.open.get_or_insert(p);
                        active.push(th);
                    }
                }
            }
            if active.is_empty() {
                break;
            }
        }
    }
    accepted
}

fn build_match(sentence: &[Token], rule: &PatternRule, spans: Vec<Span>) -> PatternMatch {
    let first = spans.iter().find(|s| !s.is_empty()).map_or(0, |s| s.start);
    let last = spans.iter().rev().find(|s| !s.is_empty()).map_or(0, |s| s.end);
    let mut bindings = Vec::new();
    let mut cname_filled = 0;
    let mut elements_matched = 0;
    for (el, span) in rule.elements.iter().zip(&spans) {
        match el {
            PatternElement::Variable { slot, .. } => {
                bindings.push((slot.clone(), *span));
                elements_matched += 1;
                if el.is_company_variable()
                    && span.tokens(sentence).iter().any(|t| t.pos == pos::COMPANY)
                {
                    cname_filled += 1;
                }
            }
            PatternElement::Literal(_) => elements_matched += 1,
            PatternElement::Skip => {}
        }
    }
    let group = rule.concept_group().to_string();
    PatternMatch {
        rule: rule.name.clone(),
        concept: super::default_label(&group),
        group,
        sent_index: sentence.first().map_or(0, |t| t.sent_index),
        index_token: spans[rule.index_field - 1].start,
        spans,
        bindings,
        consumed: last - first,
        cname_filled,
        elements_matched,
    }
}

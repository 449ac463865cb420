//! End-to-end extraction of one document.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::concept::{find_concepts, ConceptHit, ConceptLexicon};
use crate::config::DiscourseConfig;
use crate::discourse::{
    current_tieups, merge_concepts, referent_map, resolve_pronouns, segment_discourse, track_topics,
    CompanyRegistry, ConceptInstance, DiscourseSegment, PronounReference, Referents, StructureLabel,
    TieUpCluster, TopicState,
};
use crate::pattern::{match_sentence, select_best, GroupMap, PatternMatch, PatternRule, Scope};
use crate::template::{generate_templates, TemplateGraph};
use crate::token::{group_segments, recognize_names, DesignatorLexicon, Document};

/// Intermediate stage that can be printed for inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Matches,
    Topics,
    Registry,
    Segments,
}

impl FromStr for Stage {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "matches" => Ok(Stage::Matches),
            "topics" => Ok(Stage::Topics),
            "registry" => Ok(Stage::Registry),
            "segments" => Ok(Stage::Segments),
            other => Err(format!("unknown stage {other:?} (matches, topics, registry, segments)")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Extractor {
    pub designators: DesignatorLexicon,
    pub concepts: ConceptLexicon,
    pub rules: Vec<PatternRule>,
    pub group_map: GroupMap,
    pub config: DiscourseConfig,
    /// When false, every tie-up instance becomes its own template and
    /// pronouns are left unresolved.
    pub discourse: bool,
}

#[derive(Debug, Clone)]
pub struct Extraction {
    /// The document after name recognition and grouping.
    pub document: Document,
    pub registry: CompanyRegistry,
    pub topics: TopicState,
    pub hits: Vec<ConceptHit>,
    /// Best match per sentence and concept label.
    pub matches: Vec<PatternMatch>,
    pub pronouns: Vec<PronounReference>,
    pub concepts: Vec<ConceptInstance>,
    pub segments: Vec<DiscourseSegment>,
    pub clusters: Vec<TieUpCluster>,
    pub templates: TemplateGraph,
}

impl Extractor {
    pub fn new(
        designators: DesignatorLexicon,
        concepts: ConceptLexicon,
        rules: Vec<PatternRule>,
        group_map: GroupMap,
    ) -> Self {
        Extractor {
            designators,
            concepts,
            rules,
            group_map,
            config: DiscourseConfig::default(),
            discourse: true,
        }
    }

    pub fn extract(&self, doc: &Document) -> Extraction {
        let document = group_segments(&recognize_names(doc, &self.designators));
        let registry = CompanyRegistry::from_document(&document, &self.config).unify();
        let topics = track_topics(&document, &registry, &self.config);

        let mut hits = Vec::new();
        let mut matches = Vec::new();
        for sentence in &document.sentences {
            hits.extend(find_concepts(sentence, &self.concepts));
            let mut found = match_sentence(sentence, &self.rules);
            for m in &mut found {
                m.concept = self.group_map.label(&m.group);
            }
            matches.extend(select_best(&found, Scope::PerConceptGroup));
        }

        let build = |referents: &Referents| -> Vec<ConceptInstance> {
            let mut out: Vec<ConceptInstance> = matches
                .iter()
                .map(|m| ConceptInstance::from_match(m, &document.sentences[m.sent_index], &registry, referents, &topics))
                .chain(hits.iter().map(|h| ConceptInstance::from_hit(h, &topics)))
                .collect();
            out.sort_by_key(|c| (c.sent_index, c.position));
            out
        };

        let (pronouns, concepts, segments, clusters) = if self.discourse {
            // explicit partners fix the segments that the pronouns then
            // resolve against
            let first = build(&Referents::new());
            let provisional = segment_discourse(&document, &first);
            let in_force = current_tieups(&provisional, document.sentences.len());
            let pronouns = resolve_pronouns(&document, &registry, &topics, &in_force, &self.config);
            let concepts = build(&referent_map(&pronouns));
            let segments = segment_discourse(&document, &concepts);
            let clusters: Vec<TieUpCluster> = segments
                .iter()
                .filter(|s| !s.tieup_ids.is_empty())
                .map(|s| merge_concepts(s, &concepts).0)
                .collect();
            (pronouns, concepts, segments, clusters)
        } else {
            let concepts = build(&Referents::new());
            let clusters: Vec<TieUpCluster> = concepts
                .iter()
                .filter(|c| c.is_tieup())
                .map(|t| {
                    let segment = DiscourseSegment {
                        first: t.sent_index,
                        last: t.sent_index,
                        tieup_ids: t.partner_ids.clone(),
                        label: StructureLabel::Unlabeled,
                    };
                    merge_concepts(&segment, &concepts).0
                })
                .collect();
            (Vec::new(), concepts, Vec::new(), clusters)
        };

        let templates = generate_templates(&document.doc_id, &clusters, &registry);
        Extraction {
            document,
            registry,
            topics,
            hits,
            matches,
            pronouns,
            concepts,
            segments,
            clusters,
            templates,
        }
    }
}

impl Extraction {
    /// Plain-text listing of one intermediate stage.
    pub fn dump(&self, stage: Stage) -> String {
        let mut out = String::new();
        let doc = &self.document;
        match stage {
            Stage::Matches => {
                for m in &self.matches {
                    let sentence = &doc.sentences[m.sent_index];
                    let _ = write!(
                        out,
                        "s{} {} {} index={} consumed={} cname={} elements={}",
                        m.sent_index,
                        m.concept,
                        m.rule,
                        sentence[m.index_token].surface,
                        m.consumed,
                        m.cname_filled,
                        m.elements_matched
                    );
                    for (slot, span) in &m.bindings {
                        let _ = write!(out, " {slot}={:?}", span.text(sentence));
                    }
                    out.push('\n');
                }
                for h in &self.hits {
                    let _ = writeln!(out, "s{} {} keyword={} run={:?}", h.sent_index, h.concept, h.keyword, h.matched_run);
                }
            }
            Stage::Topics => {
                for (s, topics) in self.topics.topics.iter().enumerate() {
                    let names = self.names(topics);
                    let how = if self.topics.inherited[s] { "inherited" } else { "marked" };
                    let _ = writeln!(out, "s{s} {how} [{names}]");
                }
                for p in &self.pronouns {
                    let _ = writeln!(
                        out,
                        "s{} t{} {:?} -> [{}]",
                        p.sent_index,
                        p.tok_index,
                        p.kind,
                        self.names(&p.referents)
                    );
                }
            }
            Stage::Registry => {
                for (k, e) in self.registry.entries().iter().enumerate() {
                    let _ = write!(
                        out,
                        "{} {:?} pos={} eg={} id={} at=s{}t{}",
                        k + 1,
                        e.string,
                        e.pos,
                        e.eg,
                        e.id,
                        e.position.0,
                        e.position.1
                    );
                    if let Some(a) = e.alias_of {
                        let _ = write!(out, " alias_of={}", a + 1);
                    }
                    out.push('\n');
                }
            }
            Stage::Segments => {
                for seg in &self.segments {
                    let _ = writeln!(
                        out,
                        "s{}..=s{} {} [{}]",
                        seg.first,
                        seg.last,
                        seg.label,
                        self.names(&seg.tieup_ids)
                    );
                }
                for c in &self.clusters {
                    let labels: Vec<&str> = c.concepts.iter().map(|x| x.label.as_str()).collect();
                    let _ = writeln!(out, "  cluster [{}] {}", self.names(&c.segment.tieup_ids), labels.join(" "));
                }
            }
        }
        out
    }

    fn names(&self, ids: &BTreeSet<crate::discourse::CompanyId>) -> String {
        ids.iter()
            .map(|id| self.registry.root(*id).string.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

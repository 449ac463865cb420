//! Discourse processing: topic companies, reference unification, company
//! pronouns, tie-up segmentation and concept merging.

mod lcs;
mod merge;
mod pronouns;
mod registry;
mod segment;
mod topics;

pub use lcs::lcs_length;
pub use merge::{
    merge_concepts, referent_map, Binding, ConceptInstance, ConceptSource, Referents, TieUpCluster,
};
pub use pronouns::{resolve_pronouns, PronounKind, PronounReference};
pub use registry::{is_english_word, unify_company_references, CompanyEntry, CompanyId, CompanyRegistry};
pub use segment::{current_tieups, segment_discourse, DiscourseSegment, StructureLabel};
pub use topics::{track_topics, TopicState};

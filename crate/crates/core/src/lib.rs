//! Cascaded extraction of corporate tie-up relationships from segmented,
//! POS-tagged Japanese newspaper text.
//!
//! The stages run in this order:
//!
//! 1. [`token`]: read token files, recognize designator-based names and group
//!    name segments into units.
//! 2. [`concept`]: key-word concept search with run-time noun compounding
//!    and boundary anchors.
//! 3. [`pattern`]: the template-pattern language, an all-matches finite-state
//!    matcher and best-match selection.
//! 4. [`discourse`]: topic companies, abbreviation unification, company
//!    pronouns, tie-up segmentation and concept merging.
//! 5. [`template`]: the object graph handed to downstream consumers and its
//!    block serialization.
//! 6. [`score`]: slot-fill alignment and the error / recall-precision metrics.
//!
//! [`pipeline`] wires the stages together for one document.

pub mod concept;
pub mod config;
pub mod discourse;
mod error;
pub mod pattern;
pub mod pipeline;
pub mod score;
pub mod template;
pub mod token;

pub use concept::{ConceptHit, ConceptLexicon};
pub use config::DiscourseConfig;
pub use discourse::{CompanyId, CompanyRegistry, ConceptInstance, DiscourseSegment, TopicState};
pub use error::{Error, Result};
pub use pattern::{GroupMap, PatternMatch, PatternRule};
pub use pipeline::{Extraction, Extractor, Stage};
pub use score::{Metrics, ScoreCounts};
pub use template::{Object, TemplateGraph};
pub use token::{DesignatorLexicon, Document, Token};

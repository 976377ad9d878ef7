//! Deterministic linguistic rules: entity extraction and typing, surface
//! normalization, question-to-predicate rewriting, wh-type classification
//! and date parsing.
//!
//! Everything here is pure once the gazetteers are loaded. The entity
//! extractor sits behind [`EntityTagger`] so a served tagger can replace
//! the rule layers without touching callers.

mod date;
mod entities;
mod gazetteer;
mod normalize;
mod predicate;
pub mod verbs;
mod wh;

use std::ops::Range;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use date::{days_from_civil, parse_date, PartialDate};
pub use entities::RuleTagger;
pub use gazetteer::Gazetteers;
pub use normalize::normalize_surface;
pub use predicate::{contains_phrase, question_to_predicate};
pub use wh::{classify_wh, WhType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NlpError {
    #[error("unsupported question form: {0}")]
    UnsupportedQuestionForm(String),
    #[error("cannot read gazetteer {path}: {detail}")]
    Gazetteer { path: String, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EntityType {
    Person,
    Location,
    Nationality,
    Datetime,
    Number,
    Other,
}

impl EntityType {
    /// Generic noun used when a question or mask refers to an entity of
    /// this type.
    pub fn noun(self) -> &'static str {
        match self {
            EntityType::Person => "person",
            EntityType::Location => "place",
            EntityType::Datetime => "year",
            _ => "one",
        }
    }
}

/// A typed surface span. `span` is a byte range into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntityMention {
    pub surface: String,
    pub normalized: String,
    pub etype: EntityType,
    pub span: Range<usize>,
    pub source: String,
}

impl EntityMention {
    pub fn new(text: &str, span: Range<usize>, etype: EntityType, source: &str) -> Self {
        let surface = text[span.clone()].to_string();
        Self {
            normalized: normalize_surface(&surface),
            surface,
            etype,
            span,
            source: source.to_string(),
        }
    }
}

/// Source of typed entity mentions.
pub trait EntityTagger: Send + Sync {
    fn tag(&self, text: &str) -> Vec<EntityMention>;
}

/// Loaded linguistic resources plus the active entity tagger.
pub struct Nlp {
    gazetteers: Arc<Gazetteers>,
    tagger: Box<dyn EntityTagger>,
}

impl std::fmt::Debug for Nlp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Nlp").finish_non_exhaustive()
    }
}

impl Nlp {
    pub fn new(gazetteers: Gazetteers) -> Self {
        let gazetteers = Arc::new(gazetteers);
        Self {
            tagger: Box::new(RuleTagger::new(gazetteers.clone())),
            gazetteers,
        }
    }

    /// Shared instance over the bundled gazetteers.
    pub fn bundled() -> Arc<Nlp> {
        static BUNDLED: OnceLock<Arc<Nlp>> = OnceLock::new();
        BUNDLED
            .get_or_init(|| Arc::new(Nlp::new(Gazetteers::bundled())))
            .clone()
    }

    pub fn from_dir(dir: &Path) -> Result<Self, NlpError> {
        Ok(Self::new(Gazetteers::load_dir(dir)?))
    }

    pub fn with_tagger(mut self, tagger: Box<dyn EntityTagger>) -> Self {
        self.tagger = tagger;
        self
    }

    pub fn gazetteers(&self) -> &Gazetteers {
        &self.gazetteers
    }

    /// Mentions ordered by span start, non-overlapping.
    pub fn extract_entities(&self, text: &str) -> Vec<EntityMention> {
        self.tagger.tag(text)
    }

    /// Like [`Nlp::extract_entities`] with `source` set on every mention.
    pub fn extract_entities_in(&self, source: &str, text: &str) -> Vec<EntityMention> {
        let mut mentions = self.tagger.tag(text);
        for m in &mut mentions {
            m.source = source.to_string();
        }
        mentions
    }

    pub fn is_stopword(&self, normalized: &str) -> bool {
        self.gazetteers.stopwords.iter().any(|s| s == normalized)
    }
}

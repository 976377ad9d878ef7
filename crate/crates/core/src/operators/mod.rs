//! The eight operators: selection (FindBridge, FindComEnt), generation
//! (QGwithAns, QGwithEnt, DescribeEnt, QuesToSent) and fusion
//! (BridgeBlend, CompBlend).

mod blend;
mod bridge;
mod compare;
mod generation;

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::BackendError;
use crate::corpus::CorpusError;
use crate::nlp::{EntityMention, Nlp, NlpError};

pub use blend::{bridge_blend, Blended};
pub use bridge::{eligible_mentions, find_bridge_table, find_bridge_text, find_com_ent};
pub use compare::{comp_blend, AnswerRule, CompQa, ComparisonTemplate, ComparisonTemplates};
pub use generation::{describe_ent, qg_with_ans, qg_with_ent, ques_to_sent, DEFAULT_RETRIES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("rejected generation: {0}")]
    Rejected(String),
    #[error(transparent)]
    Unsupported(#[from] NlpError),
    #[error("undecidable answer: {0}")]
    Undecidable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl From<CorpusError> for OpError {
    fn from(e: CorpusError) -> Self {
        OpError::Precondition(e.to_string())
    }
}

/// Where an entity sits in a context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Locus {
    Cell { table: String, row: usize, col: usize },
    Span { passage: String, span: Range<usize> },
}

/// An entity shared by two contexts. `mention` is the occurrence in the
/// passage side; for text pairs it is the first-context mention.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BridgeEntity {
    pub mention: EntityMention,
    pub locus_a: Locus,
    pub locus_b: Locus,
}

impl BridgeEntity {
    pub fn cell(&self) -> Option<(usize, usize)> {
        match self.locus_a {
            Locus::Cell { row, col, .. } => Some((row, col)),
            Locus::Span { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SingleHopQ {
    pub question: String,
    pub answer: String,
    pub source: String,
    pub anchored_entity: Option<EntityMention>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Property {
    Birthdate,
    Location,
    Nationality,
    LivePlace,
}

impl Property {
    pub const ALL: [Property; 4] =
        [Property::Birthdate, Property::Location, Property::Nationality, Property::LivePlace];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Birthdate => "BIRTHDATE",
            Property::Location => "LOCATION",
            Property::Nationality => "NATIONALITY",
            Property::LivePlace => "LIVE_PLACE",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComparativeEntity {
    pub mention: EntityMention,
    pub property: Property,
}

/// Whether a normalized surface may serve as a bridge entity.
pub fn is_eligible(normalized: &str, nlp: &Nlp) -> bool {
    if normalized.is_empty() || nlp.is_stopword(normalized) {
        return false;
    }
    let numeric = normalized.chars().all(|c| c.is_ascii_digit() || c == ',' || c == '.');
    !(numeric && normalized.chars().count() < 4)
}

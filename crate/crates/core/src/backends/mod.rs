//! The neural-capability boundary. Operators call a [`Backend`] for
//! question generation, entity description, mask filling and perplexity.
//! [`StubBackend`] is a deterministic rule-based stand-in; [`RemoteBackend`]
//! speaks the model-host HTTP protocol.

mod remote;
mod stub;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nlp::{EntityType, Nlp};

pub use remote::RemoteBackend;
pub use stub::StubBackend;

pub const MASK: &str = "[MASK]";
pub const BACKEND_URL_ENV: &str = "MHQG_BACKEND_URL";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The backend declined the request (HTTP 422 or the stub equivalent).
    #[error("backend rejected request: {error}: {detail}")]
    Rejected { error: String, detail: String },
}

impl BackendError {
    pub(crate) fn rejected(error: &str, detail: impl Into<String>) -> Self {
        BackendError::Rejected { error: error.to_string(), detail: detail.into() }
    }
}

pub trait Backend: Send + Sync {
    /// A question whose answer is `answer`, grounded in `context`.
    fn gen_question_with_answer(&self, context: &str, answer: &str) -> Result<String, BackendError>;

    /// A question mentioning `entity`, and its answer span from `context`.
    fn gen_question_with_entity(
        &self,
        context: &str,
        entity: &str,
    ) -> Result<(String, String), BackendError>;

    /// One sentence about `entity` from a flattened table row.
    fn describe_entity(&self, row: &str, entity: &str) -> Result<String, BackendError>;

    /// A 1–2 word fill for the single `[MASK]` in `text`.
    fn fill_mask(&self, text: &str, hint: EntityType) -> Result<String, BackendError>;

    /// Finite positive score; lower is more fluent.
    fn perplexity(&self, text: &str) -> Result<f64, BackendError>;

    /// Translates QDMR steps into a question. Optional.
    fn qdmr_to_question(&self, _steps: &[String]) -> Result<String, BackendError> {
        Err(BackendError::Unavailable("qdmr translation not supported by this backend".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BackendKind {
    Stub,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendDescriptor {
    pub kind: BackendKind,
    pub endpoint: Option<String>,
    pub timeout_ms: u64,
    pub retries: u32,
    pub seed: u64,
}

impl Default for BackendDescriptor {
    fn default() -> Self {
        Self { kind: BackendKind::Stub, endpoint: None, timeout_ms: 30_000, retries: 2, seed: 0 }
    }
}

impl BackendDescriptor {
    pub fn stub(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn remote(endpoint: impl Into<String>) -> Self {
        Self { kind: BackendKind::Remote, endpoint: Some(endpoint.into()), ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.timeout_ms == 0 {
            return Err("timeout_ms must be positive".into());
        }
        if self.kind == BackendKind::Remote && self.endpoint.as_deref().is_none_or(str::is_empty) {
            return Err(format!("remote backend needs an endpoint (--backend-url or {BACKEND_URL_ENV})"));
        }
        Ok(())
    }

    pub fn build(&self, nlp: Arc<Nlp>) -> Result<Arc<dyn Backend>, String> {
        self.validate()?;
        Ok(match self.kind {
            BackendKind::Stub => Arc::new(StubBackend::new(nlp, self.seed)),
            BackendKind::Remote => Arc::new(RemoteBackend::new(self)),
        })
    }
}

pub(crate) fn require_nonempty(what: &str, s: &str) -> Result<(), BackendError> {
    if s.trim().is_empty() {
        return Err(BackendError::Precondition(format!("{what} is empty")));
    }
    Ok(())
}

pub(crate) fn require_contains(what: &str, haystack: &str, needle: &str) -> Result<(), BackendError> {
    require_nonempty(what, needle)?;
    if !haystack.contains(needle) {
        return Err(BackendError::Precondition(format!("{what} {needle:?} does not occur in input")));
    }
    Ok(())
}

pub(crate) fn require_single_mask(text: &str) -> Result<(), BackendError> {
    let n = text.matches(MASK).count();
    if n != 1 {
        return Err(BackendError::Precondition(format!("expected exactly one {MASK}, found {n}")));
    }
    Ok(())
}

/// True when `s` holds more than one sentence.
pub(crate) fn has_sentence_break(s: &str) -> bool {
    crate::corpus::split_sentences(s).len() > 1
}

pub(crate) fn word_count(s: &str) -> usize {
    s.split_whitespace().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remote_needs_endpoint() {
        let mut d = BackendDescriptor::remote("");
        assert!(d.validate().is_err());
        d.endpoint = Some("http://127.0.0.1:9".into());
        assert!(d.validate().is_ok());
        d.timeout_ms = 0;
        assert!(d.validate().is_err());
    }

    #[test]
    fn mask_counting() {
        assert!(require_single_mask("the [MASK] that won").is_ok());
        assert!(require_single_mask("no mask").is_err());
        assert!(require_single_mask("[MASK] and [MASK]").is_err());
    }

    #[test]
    fn sentence_breaks() {
        assert!(!has_sentence_break("Jenson Button Pos is 4 in 2004 United States Grand Prix."));
        assert!(has_sentence_break("He raced. He won."));
    }
}

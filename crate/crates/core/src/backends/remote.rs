use std::thread;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use super::{
    has_sentence_break, require_contains, require_nonempty, require_single_mask, word_count,
    Backend, BackendDescriptor, BackendError,
};
use crate::nlp::{contains_phrase, EntityType};

/// HTTP client for the model-host protocol.
#[derive(Debug, Clone)]
pub struct RemoteBackend {
    base: String,
    agent: ureq::Agent,
    retries: u32,
    backoff_base: Duration,
}

#[derive(Deserialize)]
struct QuestionReply {
    question: String,
}

#[derive(Deserialize)]
struct QuestionAnswerReply {
    question: String,
    answer: String,
}

#[derive(Deserialize)]
struct SentenceReply {
    sentence: String,
}

#[derive(Deserialize)]
struct FillReply {
    fill: String,
}

#[derive(Deserialize)]
struct ScoreReply {
    score: f64,
}

#[derive(Deserialize)]
struct ErrorReply {
    error: String,
    #[serde(default)]
    detail: String,
}

enum Attempt {
    Done(Result<Value, BackendError>),
    Retry(String),
}

impl RemoteBackend {
    pub fn new(desc: &BackendDescriptor) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_millis(desc.timeout_ms)))
            .http_status_as_error(false)
            .build()
            .into();
        Self {
            base: desc.endpoint.clone().unwrap_or_default().trim_end_matches('/').to_string(),
            agent,
            retries: desc.retries,
            backoff_base: Duration::from_millis(200),
        }
    }

    /// Overrides the first retry delay; later delays double.
    pub fn with_backoff_base(mut self, base: Duration) -> Self {
        self.backoff_base = base;
        self
    }

    fn attempt(&self, url: &str, body: &Value) -> Attempt {
        let mut resp = match self.agent.post(url).send_json(body) {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = resp.status().as_u16();
        let text = match resp.body_mut().read_to_string() {
            Ok(t) => t,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        match status {
            200 => Attempt::Done(
                serde_json::from_str(&text).map_err(|e| BackendError::Protocol(format!("{url}: {e}"))),
            ),
            422 => Attempt::Done(Err(match serde_json::from_str::<ErrorReply>(&text) {
                Ok(r) => BackendError::Rejected { error: r.error, detail: r.detail },
                Err(e) => BackendError::Protocol(format!("{url}: malformed 422 body: {e}")),
            })),
            501 => Attempt::Done(Err(BackendError::Unavailable(format!("{url}: verb disabled")))),
            s if s >= 500 => Attempt::Retry(format!("{url}: HTTP {s}")),
            s => Attempt::Done(Err(BackendError::Protocol(format!("{url}: unexpected HTTP {s}")))),
        }
    }

    fn call<T: DeserializeOwned>(&self, path: &str, body: Value) -> Result<T, BackendError> {
        let url = format!("{}{path}", self.base);
        let mut last = String::new();
        for attempt in 0..=self.retries {
            if attempt > 0 {
                thread::sleep(self.backoff_base * 2u32.saturating_pow(attempt - 1));
            }
            match self.attempt(&url, &body) {
                Attempt::Done(r) => {
                    return r.and_then(|v| {
                        serde_json::from_value(v)
                            .map_err(|e| BackendError::Protocol(format!("{url}: {e}")))
                    })
                }
                Attempt::Retry(msg) => {
                    log::warn!("{url}: attempt {} failed: {msg}", attempt + 1);
                    last = msg;
                }
            }
        }
        Err(BackendError::Unavailable(last))
    }
}

impl Backend for RemoteBackend {
    fn gen_question_with_answer(&self, context: &str, answer: &str) -> Result<String, BackendError> {
        require_nonempty("answer", answer)?;
        let r: QuestionReply = self.call("/v1/qg_ans", json!({"context": context, "answer": answer}))?;
        if r.question.trim().is_empty() {
            return Err(BackendError::Protocol("empty question".into()));
        }
        Ok(r.question)
    }

    fn gen_question_with_entity(&self, context: &str, entity: &str) -> Result<(String, String), BackendError> {
        require_contains("entity", context, entity)?;
        let r: QuestionAnswerReply =
            self.call("/v1/qg_ent", json!({"context": context, "entity": entity}))?;
        if !contains_phrase(&r.question, entity) {
            return Err(BackendError::Protocol(format!("question {:?} lacks entity {entity:?}", r.question)));
        }
        if r.answer.trim().is_empty() || !context.contains(&r.answer) {
            return Err(BackendError::Protocol(format!("answer {:?} is not a span of the context", r.answer)));
        }
        Ok((r.question, r.answer))
    }

    fn describe_entity(&self, row: &str, entity: &str) -> Result<String, BackendError> {
        require_contains("entity", row, entity)?;
        let r: SentenceReply = self.call("/v1/describe", json!({"row": row, "entity": entity}))?;
        if !r.sentence.contains(entity) {
            return Err(BackendError::Protocol(format!("sentence {:?} lacks entity", r.sentence)));
        }
        if has_sentence_break(&r.sentence) {
            return Err(BackendError::Protocol(format!("multi-sentence reply {:?}", r.sentence)));
        }
        Ok(r.sentence)
    }

    fn fill_mask(&self, text: &str, hint: EntityType) -> Result<String, BackendError> {
        require_single_mask(text)?;
        let r: FillReply = self.call("/v1/fill_mask", json!({"text": text, "hint": hint}))?;
        let n = word_count(&r.fill);
        if n == 0 || n > 2 {
            return Err(BackendError::Protocol(format!("fill {:?} has {n} words", r.fill)));
        }
        Ok(r.fill)
    }

    fn perplexity(&self, text: &str) -> Result<f64, BackendError> {
        require_nonempty("text", text)?;
        let r: ScoreReply = self.call("/v1/perplexity", json!({"text": text}))?;
        if !r.score.is_finite() || r.score <= 0.0 {
            return Err(BackendError::Protocol(format!("score {} is not finite and positive", r.score)));
        }
        Ok(r.score)
    }

    fn qdmr_to_question(&self, steps: &[String]) -> Result<String, BackendError> {
        if steps.is_empty() {
            return Err(BackendError::Precondition("empty QDMR program".into()));
        }
        let r: QuestionReply = self.call("/v1/qdmr2q", json!({"steps": steps}))?;
        Ok(r.question)
    }
}

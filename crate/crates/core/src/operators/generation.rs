use super::{BridgeEntity, OpError, SingleHopQ};
use crate::backends::{Backend, BackendError};
use crate::corpus::{flatten_table_row, split_sentences, Passage, Table};
use crate::nlp::{contains_phrase, normalize_surface, question_to_predicate, EntityMention};

/// Attempts QGwithEnt makes before giving up.
pub const DEFAULT_RETRIES: u32 = 3;

fn well_formed(q: &str) -> Result<(), OpError> {
    if q.trim().is_empty() {
        return Err(OpError::Rejected("empty question".into()));
    }
    if !q.trim_end().ends_with('?') {
        return Err(OpError::Rejected(format!("question {q:?} does not end with '?'")));
    }
    Ok(())
}

/// Answer-aware generation: a question over `d` whose answer is `answer`.
pub fn qg_with_ans(d: &Passage, answer: &EntityMention, backend: &dyn Backend) -> Result<SingleHopQ, OpError> {
    if d.text.get(answer.span.clone()) != Some(answer.surface.as_str()) {
        return Err(OpError::Precondition(format!(
            "answer {:?} is not at {:?} in {}",
            answer.surface, answer.span, d.id
        )));
    }
    let question = backend.gen_question_with_answer(&d.text, &answer.surface)?;
    well_formed(&question)?;
    if contains_phrase(&question, &answer.surface) {
        return Err(OpError::Rejected(format!("question {question:?} leaks the answer")));
    }
    Ok(SingleHopQ {
        question,
        answer: answer.surface.clone(),
        source: d.id.clone(),
        anchored_entity: None,
    })
}

/// Entity-aware generation: a question over `d` that mentions `e`. The
/// answer is whatever span the backend picks, distinct from `e`.
pub fn qg_with_ent(
    d: &Passage,
    e: &EntityMention,
    backend: &dyn Backend,
    retries: u32,
) -> Result<SingleHopQ, OpError> {
    if !d.text.contains(&e.surface) {
        return Err(OpError::Precondition(format!("entity {:?} not in {}", e.surface, d.id)));
    }
    let mut last = String::from("no attempts");
    for _ in 0..retries.max(1) {
        let (question, answer) = match backend.gen_question_with_entity(&d.text, &e.surface) {
            Ok(r) => r,
            Err(BackendError::Protocol(msg)) => {
                last = msg;
                continue;
            }
            Err(other) => return Err(other.into()),
        };
        if well_formed(&question).is_err() || !contains_phrase(&question, &e.surface) {
            last = format!("question {question:?} lacks {:?}", e.surface);
            continue;
        }
        if answer.trim().is_empty() || normalize_surface(&answer) == e.normalized {
            last = format!("answer {answer:?} is not distinct from the entity");
            continue;
        }
        return Ok(SingleHopQ {
            question,
            answer,
            source: d.id.clone(),
            anchored_entity: Some(e.clone()),
        });
    }
    Err(OpError::Rejected(last))
}

/// One sentence describing the bridge entity from its table row.
pub fn describe_ent(t: &Table, e: &BridgeEntity, backend: &dyn Backend) -> Result<String, OpError> {
    let (row, col) = e
        .cell()
        .ok_or_else(|| OpError::Precondition("DescribeEnt needs a table locus".into()))?;
    let raw = &t
        .cell(row, col)
        .ok_or_else(|| OpError::Precondition(format!("no cell at ({row}, {col})")))?
        .raw;
    let flat = flatten_table_row(t, row)?;
    let sentence = backend.describe_entity(&flat, raw)?;
    if !sentence.contains(raw.as_str()) {
        return Err(OpError::Rejected(format!("description {sentence:?} lacks {raw:?}")));
    }
    if split_sentences(&sentence).len() != 1 {
        return Err(OpError::Rejected(format!("description {sentence:?} is not one sentence")));
    }
    Ok(sentence)
}

/// Declarative predicate of a single-hop question.
pub fn ques_to_sent(q: &SingleHopQ) -> Result<String, OpError> {
    Ok(question_to_predicate(&q.question, &q.answer)?)
}

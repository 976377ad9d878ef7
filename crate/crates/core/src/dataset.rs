//! Candidate records and their JSONL encoding.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::graph::GraphKind;
use crate::hashing::digest;

/// One executed node on the path that produced a candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceStep {
    pub node: String,
    pub op: String,
    pub inputs: Vec<String>,
    pub output: String,
}

/// A generated question-answer pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateQA {
    pub id: String,
    pub question: String,
    pub answer: String,
    pub kind: GraphKind,
    pub sources: Vec<String>,
    pub perplexity: Option<f64>,
    pub provenance: Vec<ProvenanceStep>,
}

impl CandidateQA {
    /// Builds a candidate whose id hashes its content.
    pub fn new(
        kind: GraphKind,
        question: String,
        answer: String,
        sources: Vec<String>,
        provenance: Vec<ProvenanceStep>,
    ) -> Self {
        let id = candidate_id(kind, &question, &answer, &sources);
        Self { id, question, answer, kind, sources, perplexity: None, provenance }
    }
}

pub fn candidate_id(kind: GraphKind, question: &str, answer: &str, sources: &[String]) -> String {
    digest(&format!("{}\n{question}\n{answer}\n{}", kind.as_str(), sources.join(",")))
}

pub fn write_jsonl<W: Write>(mut w: W, items: &[CandidateQA]) -> std::io::Result<()> {
    for c in items {
        serde_json::to_writer(&mut w, c)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

#[derive(Debug, thiserror::Error)]
pub enum JsonlError {
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Reads one candidate per non-blank line.
pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<CandidateQA>, JsonlError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| JsonlError::Parse { line: i + 1, source })?);
    }
    Ok(out)
}

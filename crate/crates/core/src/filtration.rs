//! Perplexity scoring, deduplication and top-N selection.

use std::cmp::Ordering;
use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::{Backend, BackendError};
use crate::dataset::CandidateQA;
use crate::nlp::normalize_surface;

const MAX_DROPPED_EXAMPLES: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum FilterError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("candidate {0} has no perplexity")]
    UnscoredCandidate(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedExample {
    pub question: String,
    pub score: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub input_count: usize,
    pub deduped_count: usize,
    pub output_count: usize,
    pub score_min: Option<f64>,
    pub score_median: Option<f64>,
    pub score_max: Option<f64>,
    /// Highest-scoring candidates left out by selection.
    pub dropped_examples: Vec<DroppedExample>,
}

/// Attaches a perplexity to every candidate, keeping order.
pub fn score_all(cands: Vec<CandidateQA>, backend: &dyn Backend) -> Result<Vec<CandidateQA>, FilterError> {
    let scores: Vec<Result<f64, BackendError>> =
        cands.par_iter().map(|c| backend.perplexity(&c.question)).collect();
    cands
        .into_iter()
        .zip(scores)
        .map(|(mut c, s)| {
            c.perplexity = Some(s?);
            Ok(c)
        })
        .collect()
}

/// Keeps the first candidate per (normalized question, normalized answer).
pub fn dedup(cands: Vec<CandidateQA>) -> Vec<CandidateQA> {
    let mut seen = HashSet::new();
    cands
        .into_iter()
        .filter(|c| seen.insert((normalize_surface(&c.question), normalize_surface(&c.answer))))
        .collect()
}

fn order(a: &(f64, String, &CandidateQA), b: &(f64, String, &CandidateQA)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then_with(|| a.1.cmp(&b.1))
        .then_with(|| a.2.sources.cmp(&b.2.sources))
        .then_with(|| a.2.id.cmp(&b.2.id))
}

fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0),
    }
}

/// The `n` lowest-perplexity candidates, ascending by (perplexity,
/// normalized question, sources).
pub fn select_top_n(cands: &[CandidateQA], n: usize) -> Result<(Vec<CandidateQA>, FiltrationReport), FilterError> {
    let mut keyed = cands
        .iter()
        .map(|c| {
            let s = c.perplexity.ok_or_else(|| FilterError::UnscoredCandidate(c.id.clone()))?;
            Ok((s, normalize_surface(&c.question), c))
        })
        .collect::<Result<Vec<_>, FilterError>>()?;
    keyed.sort_by(order);
    let scores: Vec<f64> = keyed.iter().map(|k| k.0).collect();
    let keep = n.min(keyed.len());
    let dropped_examples = keyed[keep..]
        .iter()
        .rev()
        .take(MAX_DROPPED_EXAMPLES)
        .map(|(s, _, c)| DroppedExample { question: c.question.clone(), score: *s })
        .collect();
    let report = FiltrationReport {
        input_count: cands.len(),
        deduped_count: cands.len(),
        output_count: keep,
        score_min: scores.first().copied(),
        score_median: median(&scores),
        score_max: scores.last().copied(),
        dropped_examples,
    };
    Ok((keyed[..keep].iter().map(|k| k.2.clone()).collect(), report))
}

/// score, dedup, select.
pub fn filter(
    cands: Vec<CandidateQA>,
    backend: &dyn Backend,
    top_n: usize,
) -> Result<(Vec<CandidateQA>, FiltrationReport), FilterError> {
    let input_count = cands.len();
    let unique = dedup(score_all(cands, backend)?);
    let (out, mut report) = select_top_n(&unique, top_n)?;
    report.input_count = input_count;
    Ok((out, report))
}

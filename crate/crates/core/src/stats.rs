//! Per-kind counts and wh-type distribution.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::dataset::CandidateQA;
use crate::graph::GraphKind;
use crate::nlp::{classify_wh, WhType};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub total: usize,
    pub by_kind: BTreeMap<GraphKind, usize>,
    pub wh_counts: BTreeMap<WhType, usize>,
    pub by_wh: BTreeMap<WhType, f64>,
    pub mean_question_tokens: f64,
}

/// Counts over questions with their kinds.
pub fn compute_stats(items: &[CandidateQA]) -> DatasetStats {
    let mut s = DatasetStats { total: items.len(), ..DatasetStats::default() };
    let mut tokens = 0usize;
    for c in items {
        *s.by_kind.entry(c.kind).or_default() += 1;
        *s.wh_counts.entry(classify_wh(&c.question)).or_default() += 1;
        tokens += c.question.split_whitespace().count();
    }
    if s.total > 0 {
        let n = s.total as f64;
        s.by_wh = s.wh_counts.iter().map(|(k, v)| (*k, *v as f64 / n)).collect();
        s.mean_question_tokens = tokens as f64 / n;
    }
    s
}

/// Absolute per-type difference of the wh fractions.
pub fn compare_distributions(a: &DatasetStats, b: &DatasetStats) -> BTreeMap<WhType, f64> {
    WhType::ALL
        .into_iter()
        .map(|w| {
            let f = |s: &DatasetStats| s.by_wh.get(&w).copied().unwrap_or(0.0);
            (w, (f(a) - f(b)).abs())
        })
        .collect()
}

/// Plain-text histogram of the wh distribution.
pub fn render_histogram(s: &DatasetStats) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "total {}", s.total);
    for w in WhType::ALL {
        let n = s.wh_counts.get(&w).copied().unwrap_or(0);
        let frac = s.by_wh.get(&w).copied().unwrap_or(0.0);
        let bar = "#".repeat((frac * 40.0).round() as usize);
        let _ = writeln!(out, "{:<6} {:>6} {:>6.1}% {bar}", w.as_str(), n, frac * 100.0);
    }
    out
}

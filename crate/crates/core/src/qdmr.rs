//! QDMR-to-question baseline: four-step decomposition templates filled
//! from a linked table, realized by rules or by a backend.

use std::sync::LazyLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::{Backend, BackendError};
use crate::corpus::LinkedTableContext;
use crate::graph::GraphKind;
use crate::hashing::fnv1a64;
use crate::nlp::Nlp;
use crate::operators::{find_com_ent, Property};

#[derive(Debug, Error, PartialEq)]
pub enum QdmrError {
    #[error("insufficient structure: {0}")]
    InsufficientStructure(String),
    #[error("unsupported kind {0} (only table_to_text and text_to_table)")]
    UnsupportedKind(GraphKind),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

/// Values the template was filled with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QdmrSlots {
    pub column_a: String,
    pub column_b: String,
    pub value: String,
    pub title: String,
    pub attribute: String,
    pub predicate: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QdmrProgram {
    pub kind: GraphKind,
    pub steps: Vec<String>,
    pub slots: QdmrSlots,
    pub answer: String,
    pub sources: Vec<String>,
}

static REF_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"#(\d+)").unwrap());

impl QdmrProgram {
    /// Every `#k` in step `i` (1-based) must satisfy 1 ≤ k < i.
    pub fn check(&self) -> Result<(), String> {
        if self.steps.is_empty() {
            return Err("empty program".into());
        }
        for (i, step) in self.steps.iter().enumerate() {
            if !step.starts_with("Return ") {
                return Err(format!("step {} does not start with Return", i + 1));
            }
            for cap in REF_RE.captures_iter(step) {
                let k: usize = cap[1].parse().map_err(|_| format!("bad reference in step {}", i + 1))?;
                if k == 0 || k > i {
                    return Err(format!("step {} references #{k}", i + 1));
                }
            }
        }
        Ok(())
    }
}

fn attribute(p: Property) -> &'static str {
    match p {
        Property::Birthdate => "birthdate",
        Property::Location => "location",
        Property::Nationality => "nationality",
        Property::LivePlace => "live place",
    }
}

fn predicate(p: Property, value: &str) -> String {
    match p {
        Property::Birthdate => format!("born {value}"),
        Property::Location => format!("is located in {value}"),
        Property::Nationality => format!("is {value}"),
        Property::LivePlace => format!("lives in {value}"),
    }
}

/// One program per linked cell whose passage states a comparative
/// attribute. Column B is drawn uniformly from the row's other non-empty
/// columns with a generator seeded from `seed` and the cell position.
pub fn make_qdmr(
    ctx: &LinkedTableContext,
    kind: GraphKind,
    seed: u64,
    nlp: &Nlp,
) -> Result<Vec<QdmrProgram>, QdmrError> {
    if !matches!(kind, GraphKind::TableToText | GraphKind::TextToTable) {
        return Err(QdmrError::UnsupportedKind(kind));
    }
    let t = &ctx.table;
    if t.headers.len() < 2 || t.rows.is_empty() {
        return Err(QdmrError::InsufficientStructure(format!(
            "table {} has {} columns and {} rows",
            t.id,
            t.headers.len(),
            t.rows.len()
        )));
    }
    let mut out = Vec::new();
    for (r, row) in t.rows.iter().enumerate() {
        for (a, cell) in row.iter().enumerate() {
            let Some(d) = cell.linked_passage_ids.iter().find_map(|id| ctx.passages.get(id)) else {
                continue;
            };
            let found = find_com_ent(d, nlp);
            let Some(attr) = Property::ALL.into_iter().find_map(|p| found.iter().find(|c| c.property == p)) else {
                continue;
            };
            let others: Vec<usize> =
                (0..row.len()).filter(|&c| c != a && !row[c].raw.trim().is_empty()).collect();
            if others.is_empty() {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a64(&format!("{}#{r}#{a}", t.id)));
            let b = others[rng.gen_range(0..others.len())];
            let slots = QdmrSlots {
                column_a: t.headers[a].clone(),
                column_b: t.headers[b].clone(),
                value: row[b].raw.clone(),
                title: t.title.clone(),
                attribute: attribute(attr.property).into(),
                predicate: predicate(attr.property, &attr.mention.surface),
            };
            let (steps, answer) = match kind {
                GraphKind::TableToText => (
                    vec![
                        format!("Return {}", slots.column_a),
                        format!("Return #1 in {} {}", slots.column_b, slots.value),
                        format!("Return #2 in {}", slots.title),
                        format!("Return what is the {} of #3", slots.attribute),
                    ],
                    attr.mention.surface.clone(),
                ),
                _ => (
                    vec![
                        format!("Return {}", slots.column_a),
                        format!("Return #1 in {}", slots.title),
                        format!("Return #2 that {}", slots.predicate),
                        format!("Return {} of #3", slots.column_b),
                    ],
                    slots.value.clone(),
                ),
            };
            out.push(QdmrProgram { kind, steps, slots, answer, sources: vec![t.id.clone(), d.id.clone()] });
        }
    }
    Ok(out)
}

/// Composes the question right to left from the program slots.
pub fn realize_rules(p: &QdmrProgram) -> Result<String, QdmrError> {
    p.check().map_err(QdmrError::Precondition)?;
    let s = &p.slots;
    Ok(match p.kind {
        GraphKind::TableToText => format!(
            "What is the {} of the {} that {} is {} in {}?",
            s.attribute, s.column_a, s.column_b, s.value, s.title
        ),
        GraphKind::TextToTable => {
            format!("What is the {} of the {} in {} that {}?", s.column_b, s.column_a, s.title, s.predicate)
        }
        other => return Err(QdmrError::UnsupportedKind(other)),
    })
}

/// Sends the steps to the backend translator.
pub fn realize_remote(p: &QdmrProgram, backend: &dyn Backend) -> Result<String, QdmrError> {
    p.check().map_err(QdmrError::Precondition)?;
    Ok(backend.qdmr_to_question(&p.steps)?)
}

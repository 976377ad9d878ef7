use std::collections::HashSet;
use std::sync::LazyLock;

use regex::Regex;

use super::{is_eligible, BridgeEntity, ComparativeEntity, Locus, Property};
use crate::corpus::{normalize_cell, Passage, Table};
use crate::nlp::{normalize_surface, EntityMention, EntityType, Nlp};

const BIRTH_TRIGGERS: [&str; 2] = ["born", "birth"];
const LIVE_TRIGGERS: [&str; 3] = ["lives", "lived", "hometown"];
const TRIGGER_WINDOW: usize = 8;

static WORD_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[\p{L}\p{N}]+").unwrap());

/// First mention of every eligible normalized surface, in text order.
pub fn eligible_mentions(d: &Passage, nlp: &Nlp) -> Vec<EntityMention> {
    let mut seen = HashSet::new();
    nlp.extract_entities_in(&d.id, &d.text)
        .into_iter()
        .filter(|m| is_eligible(&m.normalized, nlp) && seen.insert(m.normalized.clone()))
        .collect()
}

/// Table × text: one bridge per cell whose normalized value matches an
/// entity mention in the passage, in row-major order.
pub fn find_bridge_table(table: &Table, d: &Passage, nlp: &Nlp) -> Vec<BridgeEntity> {
    let mentions = eligible_mentions(d, nlp);
    let mut out = Vec::new();
    for (r, row) in table.rows.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            let key = normalize_surface(&normalize_cell(&cell.raw));
            if !is_eligible(&key, nlp) {
                continue;
            }
            if let Some(m) = mentions.iter().find(|m| m.normalized == key) {
                out.push(BridgeEntity {
                    mention: m.clone(),
                    locus_a: Locus::Cell { table: table.id.clone(), row: r, col: c },
                    locus_b: Locus::Span { passage: d.id.clone(), span: m.span.clone() },
                });
            }
        }
    }
    out
}

/// Text × text: one bridge per normalized surface mentioned in both,
/// ordered by first mention in `d1`.
pub fn find_bridge_text(d1: &Passage, d2: &Passage, nlp: &Nlp) -> Vec<BridgeEntity> {
    let second = eligible_mentions(d2, nlp);
    eligible_mentions(d1, nlp)
        .into_iter()
        .filter_map(|m| {
            let other = second.iter().find(|o| o.normalized == m.normalized)?;
            Some(BridgeEntity {
                locus_a: Locus::Span { passage: d1.id.clone(), span: m.span.clone() },
                locus_b: Locus::Span { passage: d2.id.clone(), span: other.span.clone() },
                mention: m,
            })
        })
        .collect()
}

/// Typed entities usable for comparison questions.
pub fn find_com_ent(d: &Passage, nlp: &Nlp) -> Vec<ComparativeEntity> {
    let words: Vec<(std::ops::Range<usize>, String)> = WORD_RE
        .find_iter(&d.text)
        .map(|m| (m.range(), m.as_str().to_lowercase()))
        .collect();
    let near = |m: &EntityMention, triggers: &[&str]| -> bool {
        let idx: Vec<usize> = words
            .iter()
            .enumerate()
            .filter(|(_, (r, _))| r.start < m.span.end && m.span.start < r.end)
            .map(|(i, _)| i)
            .collect();
        let (Some(&a), Some(&b)) = (idx.first(), idx.last()) else { return false };
        words.iter().enumerate().any(|(i, (_, w))| {
            triggers.contains(&w.as_str()) && {
                let dist = if i < a { a - i } else { i.saturating_sub(b) };
                dist <= TRIGGER_WINDOW
            }
        })
    };
    nlp.extract_entities_in(&d.id, &d.text)
        .into_iter()
        .filter_map(|m| {
            let property = match m.etype {
                EntityType::Nationality => Property::Nationality,
                EntityType::Datetime if near(&m, &BIRTH_TRIGGERS) => Property::Birthdate,
                EntityType::Location if near(&m, &LIVE_TRIGGERS) => Property::LivePlace,
                EntityType::Location => Property::Location,
                _ => return None,
            };
            Some(ComparativeEntity { mention: m, property })
        })
        .collect()
}

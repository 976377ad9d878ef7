use super::{BridgeEntity, OpError, SingleHopQ};
use crate::backends::{Backend, MASK};

/// BridgeBlend output: the masked intermediate and the filled question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blended {
    pub masked: String,
    pub question: String,
}

fn find_ci(haystack: &str, needle: &str) -> Option<usize> {
    if let Some(i) = haystack.find(needle) {
        return Some(i);
    }
    // case-insensitive fallback; only ASCII folding keeps byte offsets valid
    haystack.to_ascii_lowercase().find(&needle.to_ascii_lowercase())
}

/// `s` without a leading mention of the entity and without final period.
pub(crate) fn strip_description(s: &str, surface: &str) -> String {
    let mut t = s.trim();
    if t.len() >= surface.len() && t[..surface.len()].eq_ignore_ascii_case(surface) && t.is_char_boundary(surface.len()) {
        t = t[surface.len()..].trim_start();
    }
    t.trim_end_matches('.').trim_end().to_string()
}

/// Replaces the first mention of the bridge entity in `q` with
/// "the [MASK] that <s>" and lets the backend fill the mask.
pub fn bridge_blend(
    q: &SingleHopQ,
    s: &str,
    e: &BridgeEntity,
    backend: &dyn Backend,
) -> Result<Blended, OpError> {
    let surface = &e.mention.surface;
    let at = find_ci(&q.question, surface).ok_or_else(|| {
        OpError::Precondition(format!("question {:?} does not contain {surface:?}", q.question))
    })?;
    let predicate = strip_description(s, surface);
    if predicate.is_empty() {
        return Err(OpError::Rejected("empty description".into()));
    }
    let masked = format!(
        "{}the {MASK} that {predicate}{}",
        &q.question[..at],
        &q.question[at + surface.len()..]
    );
    let fill = backend.fill_mask(&masked, e.mention.etype)?;
    let words = fill.split_whitespace().count();
    if words == 0 || words > 2 || fill.contains(MASK) {
        return Err(OpError::Rejected(format!("mask fill {fill:?}")));
    }
    let mut question = masked.replacen(MASK, fill.trim(), 1);
    if at == 0 {
        let mut cs = question.chars();
        if let Some(first) = cs.next() {
            question = first.to_uppercase().chain(cs).collect();
        }
    }
    if !question.ends_with('?') {
        return Err(OpError::Rejected(format!("blended question {question:?} lacks '?'")));
    }
    Ok(Blended { masked, question })
}

use std::collections::HashSet;
use std::ops::Range;
use std::sync::Arc;

use super::{
    require_contains, require_nonempty, require_single_mask, Backend, BackendError,
};
use crate::corpus::{parse_flattened_row, split_sentences, FlatRow};
use crate::hashing::fnv1a64;
use crate::nlp::verbs::{
    base_from_past, base_from_third_person, is_aux, is_strong_verb, is_weak_verb,
};
use crate::nlp::{normalize_surface, parse_date, EntityType, Nlp};

const PREPOSITIONS: [&str; 11] = [
    "in", "on", "at", "for", "from", "by", "with", "to", "of", "since", "during",
];
const DETERMINERS: [&str; 3] = ["the", "a", "an"];

/// Deterministic rule-based backend. Outputs are a pure function of the
/// inputs and the seed.
#[derive(Debug, Clone)]
pub struct StubBackend {
    nlp: Arc<Nlp>,
    seed: u64,
}

#[derive(Debug, Clone)]
struct Tok {
    text: String,
    answer: bool,
}

fn wh_word(etype: EntityType) -> &'static str {
    match etype {
        EntityType::Datetime => "When",
        EntityType::Location => "Where",
        EntityType::Person => "Who",
        _ => "What",
    }
}

fn trim_punct(s: &str) -> &str {
    s.trim_end_matches([',', ';', ':'])
}

/// Index of the fact nearest to `idx`, ties to the earlier one.
fn nearest_other(facts: &[(String, String)], idx: usize) -> Option<usize> {
    (0..facts.len())
        .filter(|&i| i != idx)
        .min_by_key(|&i| (i.abs_diff(idx), i))
}

fn in_title(title: &str) -> String {
    if title.is_empty() {
        String::new()
    } else {
        format!(" in {title}")
    }
}

impl StubBackend {
    pub fn new(nlp: Arc<Nlp>, seed: u64) -> Self {
        Self { nlp, seed }
    }

    pub fn bundled(seed: u64) -> Self {
        Self::new(Nlp::bundled(), seed)
    }

    fn noun_for(&self, etype: EntityType, answer: &str) -> String {
        if etype == EntityType::Other {
            if let Some(last) = answer.split_whitespace().last() {
                let heads = &self.nlp.gazetteers().org_heads;
                if heads.iter().any(|h| h.eq_ignore_ascii_case(last)) {
                    return last.to_lowercase();
                }
            }
        }
        etype.noun().to_string()
    }

    fn etype_of(&self, sentence: &str, span: &Range<usize>) -> EntityType {
        let mentions = self.nlp.extract_entities(sentence);
        if let Some(m) = mentions.iter().find(|m| m.span == *span) {
            return m.etype;
        }
        let surface = &sentence[span.clone()];
        if parse_date(surface).is_some() {
            return EntityType::Datetime;
        }
        mentions
            .iter()
            .find(|m| m.span.start <= span.start && span.end <= m.span.end)
            .map_or(EntityType::Other, |m| m.etype)
    }

    /// Question over one sentence whose answer is the byte span `ans`.
    fn question_in_sentence(&self, sentence: &str, ans: Range<usize>) -> Result<String, BackendError> {
        let etype = self.etype_of(sentence, &ans);
        let answer = &sentence[ans.clone()];
        let body = sentence.trim_end().trim_end_matches(['.', '!', '?']);

        let mut toks: Vec<Tok> = Vec::new();
        let mut paren: Option<Vec<Tok>> = None;
        let mut pos = 0;
        for word in body.split_whitespace() {
            let start = pos + body[pos..].find(word).expect("word from split");
            let end = start + word.len();
            pos = end;
            let tok = Tok { text: word.to_string(), answer: start < ans.end && ans.start < end };
            if let Some(group) = paren.as_mut() {
                let closes = word.ends_with(')');
                group.push(tok);
                if closes {
                    let group = paren.take().unwrap_or_default();
                    if group.iter().any(|t| t.answer) {
                        return self.parenthetical_question(&toks, &group, etype);
                    }
                }
                continue;
            }
            if word.starts_with('(') {
                let closes = word.ends_with(')');
                if closes {
                    if tok.answer {
                        return self.parenthetical_question(&toks, &[tok], etype);
                    }
                } else {
                    paren = Some(vec![tok]);
                }
                continue;
            }
            toks.push(tok);
        }

        let first_ans = toks.iter().position(|t| t.answer).ok_or_else(|| {
            BackendError::rejected("no_question", format!("answer {answer:?} not usable in sentence"))
        })?;
        let last_ans = toks.iter().rposition(|t| t.answer).unwrap_or(first_ans);

        let subject_position = first_ans == 0
            || (first_ans == 1 && DETERMINERS.contains(&toks[0].text.to_lowercase().as_str()));
        if subject_position {
            let rest: Vec<&str> = toks[last_ans + 1..].iter().map(|t| t.text.as_str()).collect();
            let rest = rest.join(" ");
            let rest = rest.trim_start_matches([',', ' ']).trim_end_matches([',', ' ']);
            if rest.is_empty() {
                return Err(BackendError::rejected("no_question", "answer is the whole sentence"));
            }
            return Ok(format!("What {} {rest}?", self.noun_for(etype, answer)));
        }

        let mut cut_from = first_ans;
        if cut_from > 1 && DETERMINERS.contains(&toks[cut_from - 1].text.to_lowercase().as_str()) {
            cut_from -= 1;
        }
        if PREPOSITIONS.contains(&toks[cut_from - 1].text.to_lowercase().as_str()) {
            cut_from -= 1;
        }
        let mut words: Vec<String> = toks[..cut_from]
            .iter()
            .chain(&toks[last_ans + 1..])
            .map(|t| t.text.clone())
            .collect();
        while words.first().is_some_and(|w| !w.chars().any(char::is_alphanumeric)) {
            words.remove(0);
        }
        if let Some(first) = words.first_mut() {
            let lower = first.to_lowercase();
            if self.nlp.is_stopword(&lower) {
                *first = lower;
            }
        }
        let k = (1..words.len())
            .find(|&i| {
                let w = trim_punct(&words[i]);
                is_strong_verb(w) || is_weak_verb(w)
            })
            .ok_or_else(|| BackendError::rejected("no_question", "no verb found"))?;
        let subject: Vec<&str> = words[..k].iter().map(|w| trim_punct(w)).collect();
        let verb = trim_punct(&words[k]);
        let rest: Vec<&str> = words[k + 1..].iter().map(String::as_str).collect();
        let rest = rest.join(" ");
        let rest = rest.trim_end_matches([',', ' ']);
        let (aux, main) = if is_aux(verb) {
            (verb.to_string(), String::new())
        } else if is_strong_verb(verb) {
            ("did".to_string(), base_from_past(verb))
        } else {
            ("does".to_string(), base_from_third_person(verb))
        };
        let mut parts = vec![wh_word(etype).to_string(), aux, subject.join(" ")];
        if !main.is_empty() {
            parts.push(main);
        }
        if !rest.is_empty() {
            parts.push(rest.to_string());
        }
        Ok(format!("{}?", parts.join(" ")))
    }

    /// "X (born 19 January 1980) is ..." with the date as answer.
    fn parenthetical_question(
        &self,
        before: &[Tok],
        group: &[Tok],
        etype: EntityType,
    ) -> Result<String, BackendError> {
        let first = group[0].text.trim_start_matches('(').to_lowercase();
        if first != "born" || before.is_empty() {
            return Err(BackendError::rejected("no_question", "unsupported parenthetical"));
        }
        let subject: Vec<&str> = before.iter().map(|t| t.text.as_str()).collect();
        Ok(format!("{} was {} born?", wh_word(etype), subject.join(" ")))
    }

    fn flat_question_with_answer(&self, row: &FlatRow, answer: &str) -> Result<String, BackendError> {
        let idx = row
            .facts
            .iter()
            .position(|(_, c)| c == answer)
            .or_else(|| {
                let n = normalize_surface(answer);
                row.facts.iter().position(|(_, c)| normalize_surface(c) == n)
            })
            .ok_or_else(|| BackendError::Precondition(format!("answer {answer:?} is not a cell of the row")))?;
        let header = &row.facts[idx].0;
        let title = in_title(&row.title);
        Ok(match nearest_other(&row.facts, idx) {
            Some(k) => {
                let (hk, ck) = &row.facts[k];
                format!("What is the {header} whose {hk} is {ck}{title}?")
            }
            None => format!("What is the {header}{title}?"),
        })
    }

    fn flat_question_with_entity(&self, row: &FlatRow, entity: &str) -> Result<(String, String), BackendError> {
        let idx = row
            .facts
            .iter()
            .position(|(_, c)| c.contains(entity))
            .ok_or_else(|| BackendError::Precondition(format!("entity {entity:?} is not in a cell")))?;
        let k = nearest_other(&row.facts, idx)
            .ok_or_else(|| BackendError::rejected("no_question", "row has no other cell"))?;
        let (hk, ck) = &row.facts[k];
        Ok((format!("What is the {hk} of {entity}{}?", in_title(&row.title)), ck.clone()))
    }

    fn sentence_around(context: &str, pos: usize) -> Option<Range<usize>> {
        split_sentences(context)
            .into_iter()
            .find(|r| r.start <= pos && pos < r.end)
    }
}

impl Backend for StubBackend {
    fn gen_question_with_answer(&self, context: &str, answer: &str) -> Result<String, BackendError> {
        require_contains("answer", context, answer)?;
        if let Some(row) = parse_flattened_row(context) {
            return self.flat_question_with_answer(&row, answer);
        }
        let pos = context.find(answer).expect("checked above");
        let sent = Self::sentence_around(context, pos)
            .filter(|r| pos + answer.len() <= r.end)
            .ok_or_else(|| BackendError::Precondition("answer crosses a sentence boundary".into()))?;
        let local = pos - sent.start..pos - sent.start + answer.len();
        self.question_in_sentence(&context[sent], local)
    }

    fn gen_question_with_entity(&self, context: &str, entity: &str) -> Result<(String, String), BackendError> {
        require_contains("entity", context, entity)?;
        if let Some(row) = parse_flattened_row(context) {
            return self.flat_question_with_entity(&row, entity);
        }
        let target = normalize_surface(entity);
        for (pos, _) in context.match_indices(entity) {
            let Some(sent) = Self::sentence_around(context, pos) else { continue };
            let sentence = &context[sent.clone()];
            let e = pos - sent.start..pos - sent.start + entity.len();
            let mut cands: Vec<_> = self
                .nlp
                .extract_entities(sentence)
                .into_iter()
                .filter(|m| !m.normalized.is_empty() && m.normalized != target)
                .filter(|m| m.span.end <= e.start || m.span.start >= e.end)
                .collect();
            cands.sort_by_key(|m| {
                let gap = if m.span.start >= e.end { m.span.start - e.end } else { e.start - m.span.end };
                (gap, m.span.start)
            });
            for m in cands {
                if let Ok(q) = self.question_in_sentence(sentence, m.span.clone()) {
                    if crate::nlp::contains_phrase(&q, entity) {
                        return Ok((q, m.surface));
                    }
                }
            }
        }
        Err(BackendError::rejected("no_question", format!("no question anchored on {entity:?}")))
    }

    fn describe_entity(&self, row: &str, entity: &str) -> Result<String, BackendError> {
        require_contains("entity", row, entity)?;
        let flat = parse_flattened_row(row)
            .ok_or_else(|| BackendError::Precondition("input is not a flattened table row".into()))?;
        let facts: Vec<String> = flat
            .facts
            .iter()
            .filter(|(_, c)| !c.contains(entity))
            .map(|(h, c)| format!("{h} is {c}"))
            .collect();
        let title = in_title(&flat.title);
        Ok(if facts.is_empty() {
            format!("{entity} appears{title}.")
        } else {
            format!("{entity} {}{title}.", facts.join(" and "))
        })
    }

    fn fill_mask(&self, text: &str, hint: EntityType) -> Result<String, BackendError> {
        require_single_mask(text)?;
        Ok(hint.noun().to_string())
    }

    /// `1 + 0.05 × (h + r)` where `h ∈ [0, 1)` comes from a stable hash of
    /// the text and `r` counts repeated word bigrams.
    fn perplexity(&self, text: &str) -> Result<f64, BackendError> {
        require_nonempty("text", text)?;
        let h = fnv1a64(text) ^ self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let frac = (h % 1_000_000) as f64 / 1_000_000.0;
        Ok(1.0 + 0.05 * (frac + repeated_bigrams(text) as f64))
    }
}

/// Bigram occurrences beyond the first of each distinct bigram, over
/// lowercase punctuation-free tokens.
pub(crate) fn repeated_bigrams(text: &str) -> usize {
    let toks: Vec<String> = text
        .split_whitespace()
        .map(|t| t.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase())
        .filter(|t| !t.is_empty())
        .collect();
    let total = toks.len().saturating_sub(1);
    let distinct: HashSet<(&str, &str)> =
        toks.windows(2).map(|w| (w[0].as_str(), w[1].as_str())).collect();
    total - distinct.len()
}

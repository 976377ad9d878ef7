use std::ops::Range;
use std::sync::{Arc, LazyLock};

use regex::Regex;

use super::{EntityMention, EntityTagger, EntityType, Gazetteers};
use crate::corpus::split_sentences;

const MONTHS: &str = "(?:January|February|March|April|May|June|July|August|September|October|November|December|Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sep|Sept|Oct|Nov|Dec)\\.?";

static DATE_RES: LazyLock<Vec<Regex>> = LazyLock::new(|| {
    [
        format!(r"\b\d{{1,2}}\s+{MONTHS},?\s+\d{{4}}\b"),
        format!(r"\b{MONTHS}\s+\d{{1,2}},\s*\d{{4}}\b"),
        format!(r"\b{MONTHS}\s+\d{{4}}\b"),
        r"\b(?:1\d{3}|20\d{2})\b".to_string(),
    ]
    .iter()
    .map(|p| Regex::new(p).expect("date regex"))
    .collect()
});

static NUMBER_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"\b(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?(?:\s?%|\s(?:percent|million|billion|thousand|km|miles|kg|metres|meters)\b)?",
    )
    .expect("number regex")
});

static TOKEN_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"[\p{L}\p{N}]+(?:['’\-][\p{L}\p{N}]+)*").expect("token regex")
});

const CONNECTORS: [&str; 11] = [
    "of", "de", "da", "del", "von", "van", "der", "la", "le", "du", "al",
];

#[derive(Debug, Clone)]
struct Token {
    span: Range<usize>,
    text: String,
    cap: bool,
    sentence_initial: bool,
}

#[derive(Debug, Clone)]
struct Candidate {
    span: Range<usize>,
    etype: EntityType,
}

/// The layered regex and gazetteer tagger.
#[derive(Debug, Clone)]
pub struct RuleTagger {
    gaz: Arc<Gazetteers>,
    nationalities: Vec<Vec<String>>,
    locations: Vec<Vec<String>>,
    location_heads: Vec<Vec<String>>,
    org_heads: Vec<Vec<String>>,
}

fn split_entries(entries: &[String]) -> Vec<Vec<String>> {
    entries
        .iter()
        .map(|e| TOKEN_RE.find_iter(e).map(|m| m.as_str().to_string()).collect())
        .filter(|v: &Vec<String>| !v.is_empty())
        .collect()
}

fn priority(t: EntityType) -> u8 {
    match t {
        EntityType::Datetime => 0,
        EntityType::Number => 1,
        EntityType::Nationality => 2,
        EntityType::Location => 3,
        EntityType::Person => 4,
        EntityType::Other => 5,
    }
}

impl RuleTagger {
    pub fn new(gaz: Arc<Gazetteers>) -> Self {
        Self {
            nationalities: split_entries(&gaz.nationalities),
            locations: split_entries(&gaz.locations),
            location_heads: split_entries(&gaz.location_heads),
            org_heads: split_entries(&gaz.org_heads),
            gaz,
        }
    }

    fn tokenize(text: &str) -> Vec<Token> {
        let starts: Vec<usize> = split_sentences(text).into_iter().map(|r| r.start).collect();
        let mut next_start = 0;
        let mut tokens = Vec::new();
        for m in TOKEN_RE.find_iter(text) {
            let mut initial = false;
            while next_start < starts.len() && starts[next_start] <= m.start() {
                initial = true;
                next_start += 1;
            }
            let text_tok = m.as_str().to_string();
            let cap = text_tok.chars().next().is_some_and(char::is_uppercase);
            tokens.push(Token {
                span: m.range(),
                text: text_tok,
                cap,
                sentence_initial: initial,
            });
        }
        tokens
    }

    /// Token-sequence gazetteer matches, case-sensitive, whitespace-adjacent.
    fn gazetteer_hits(
        text: &str,
        tokens: &[Token],
        entries: &[Vec<String>],
        etype: EntityType,
        out: &mut Vec<Candidate>,
    ) {
        for i in 0..tokens.len() {
            for entry in entries {
                if i + entry.len() > tokens.len() {
                    continue;
                }
                let window = &tokens[i..i + entry.len()];
                if window.iter().zip(entry).all(|(t, e)| &t.text == e)
                    && adjacent(text, window)
                {
                    out.push(Candidate {
                        span: window[0].span.start..window[window.len() - 1].span.end,
                        etype,
                    });
                }
            }
        }
    }

    /// Maximal runs of capitalized tokens, allowing lowercase connectors
    /// between them. Sentence-initial function words are dropped.
    fn capitalized_runs(&self, text: &str, tokens: &[Token]) -> Vec<Range<usize>> {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            if !tokens[i].cap {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            let mut end = i + 1;
            while j < tokens.len() && adjacent(text, &tokens[j - 1..=j]) {
                if tokens[j].cap {
                    j += 1;
                    end = j;
                } else if CONNECTORS.contains(&tokens[j].text.as_str()) {
                    j += 1;
                } else {
                    break;
                }
            }
            let mut start = i;
            while start < end
                && tokens[start].sentence_initial
                && self.gaz.stopwords.contains(&tokens[start].text.to_lowercase())
            {
                start += 1;
                while start < end && !tokens[start].cap {
                    start += 1;
                }
            }
            if start < end {
                runs.push(start..end);
            }
            i = end.max(i + 1);
        }
        runs
    }

    fn ends_with_any(words: &[&str], entries: &[Vec<String>]) -> bool {
        entries
            .iter()
            .any(|e| e.len() <= words.len() && words[words.len() - e.len()..] == e[..])
    }

    fn contains_any(words: &[&str], entries: &[Vec<String>]) -> bool {
        entries
            .iter()
            .any(|e| e.len() <= words.len() && words.windows(e.len()).any(|w| w == &e[..]))
    }
}

fn adjacent(text: &str, window: &[Token]) -> bool {
    window
        .windows(2)
        .all(|p| text[p[0].span.end..p[1].span.start].chars().all(|c| c == ' '))
        && window
            .windows(2)
            .all(|p| p[1].span.start > p[0].span.end)
}

impl EntityTagger for RuleTagger {
    fn tag(&self, text: &str) -> Vec<EntityMention> {
        let tokens = Self::tokenize(text);
        let mut cands: Vec<Candidate> = Vec::new();

        for re in DATE_RES.iter() {
            for m in re.find_iter(text) {
                cands.push(Candidate { span: m.range(), etype: EntityType::Datetime });
            }
        }
        for m in NUMBER_RE.find_iter(text) {
            cands.push(Candidate { span: m.range(), etype: EntityType::Number });
        }
        Self::gazetteer_hits(text, &tokens, &self.nationalities, EntityType::Nationality, &mut cands);
        Self::gazetteer_hits(text, &tokens, &self.locations, EntityType::Location, &mut cands);

        for run in self.capitalized_runs(text, &tokens) {
            let words: Vec<&str> = tokens[run.clone()].iter().map(|t| t.text.as_str()).collect();
            let span = tokens[run.start].span.start..tokens[run.end - 1].span.end;
            let org = Self::ends_with_any(&words, &self.org_heads);
            let loc_head = Self::ends_with_any(&words, &self.location_heads);
            let cue = run.start > 0 && tokens[run.start - 1].text.eq_ignore_ascii_case("in");
            if loc_head || (cue && !org) {
                cands.push(Candidate { span: span.clone(), etype: EntityType::Location });
            }
            if words.len() < 2 {
                continue;
            }
            let has_connector = words.iter().any(|w| CONNECTORS.contains(w));
            let in_gazetteer = org
                || loc_head
                || Self::contains_any(&words, &self.nationalities)
                || Self::contains_any(&words, &self.locations)
                || Self::contains_any(&words, &self.location_heads)
                || Self::contains_any(&words, &self.org_heads)
                || words.iter().any(|w| DATE_RES[2].is_match(&format!("{w} 2000")));
            let etype = if words.len() <= 4 && !has_connector && !in_gazetteer {
                EntityType::Person
            } else {
                EntityType::Other
            };
            cands.push(Candidate { span, etype });
        }

        cands.sort_by(|a, b| {
            (b.span.len())
                .cmp(&a.span.len())
                .then(priority(a.etype).cmp(&priority(b.etype)))
                .then(a.span.start.cmp(&b.span.start))
        });
        let mut taken: Vec<Candidate> = Vec::new();
        for c in cands {
            if c.span.is_empty() {
                continue;
            }
            if taken
                .iter()
                .all(|t| c.span.end <= t.span.start || c.span.start >= t.span.end)
            {
                taken.push(c);
            }
        }
        taken.sort_by_key(|c| c.span.start);
        taken
            .into_iter()
            .map(|c| EntityMention::new(text, c.span, c.etype, ""))
            .collect()
    }
}

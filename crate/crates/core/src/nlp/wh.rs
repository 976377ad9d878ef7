use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WhType {
    What,
    When,
    Where,
    Which,
    Who,
    How,
    Other,
}

impl WhType {
    pub const ALL: [WhType; 7] = [
        WhType::What,
        WhType::When,
        WhType::Where,
        WhType::Which,
        WhType::Who,
        WhType::How,
        WhType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            WhType::What => "WHAT",
            WhType::When => "WHEN",
            WhType::Where => "WHERE",
            WhType::Which => "WHICH",
            WhType::Who => "WHO",
            WhType::How => "HOW",
            WhType::Other => "OTHER",
        }
    }
}

const PREPOSITIONS: [&str; 15] = [
    "at", "in", "on", "of", "for", "from", "to", "by", "with", "during", "after", "before", "since", "under", "into",
];

fn wh_of(word: &str) -> Option<WhType> {
    Some(match word {
        "what" => WhType::What,
        "when" => WhType::When,
        "where" => WhType::Where,
        "which" => WhType::Which,
        "who" => WhType::Who,
        "how" => WhType::How,
        _ => return None,
    })
}

/// First wh-word among the leading three tokens; failing that, the first
/// wh-word directly after a preposition ("are at what grade?"); else
/// `Other`.
pub fn classify_wh(q: &str) -> WhType {
    let words: Vec<String> = q
        .split_whitespace()
        .map(|tok| tok.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase())
        .collect();
    if let Some(t) = words.iter().take(3).find_map(|w| wh_of(w)) {
        return t;
    }
    words
        .windows(2)
        .find_map(|w| if PREPOSITIONS.contains(&w[0].as_str()) { wh_of(&w[1]) } else { None })
        .unwrap_or(WhType::Other)
}

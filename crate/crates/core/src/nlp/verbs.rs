//! English verb inflection for the handful of forms the rewrite rules need.

/// (base, past) pairs for irregular verbs.
pub const IRREGULAR: &[(&str, &str)] = &[
    ("be", "was"),
    ("become", "became"),
    ("begin", "began"),
    ("bring", "brought"),
    ("build", "built"),
    ("buy", "bought"),
    ("catch", "caught"),
    ("choose", "chose"),
    ("come", "came"),
    ("do", "did"),
    ("draw", "drew"),
    ("drive", "drove"),
    ("eat", "ate"),
    ("fall", "fell"),
    ("feel", "felt"),
    ("fight", "fought"),
    ("find", "found"),
    ("fly", "flew"),
    ("get", "got"),
    ("give", "gave"),
    ("go", "went"),
    ("grow", "grew"),
    ("have", "had"),
    ("hold", "held"),
    ("keep", "kept"),
    ("know", "knew"),
    ("lead", "led"),
    ("leave", "left"),
    ("lose", "lost"),
    ("make", "made"),
    ("meet", "met"),
    ("pay", "paid"),
    ("put", "put"),
    ("ride", "rode"),
    ("rise", "rose"),
    ("run", "ran"),
    ("say", "said"),
    ("see", "saw"),
    ("sell", "sold"),
    ("send", "sent"),
    ("set", "set"),
    ("shoot", "shot"),
    ("sing", "sang"),
    ("sit", "sat"),
    ("speak", "spoke"),
    ("spend", "spent"),
    ("stand", "stood"),
    ("swim", "swam"),
    ("take", "took"),
    ("teach", "taught"),
    ("tell", "told"),
    ("think", "thought"),
    ("throw", "threw"),
    ("understand", "understood"),
    ("win", "won"),
    ("write", "wrote"),
];

/// Regular bases ending in a silent "e" that cannot be recovered from the
/// "-ed" form by the fallback heuristic.
const E_FINAL: &[&str] = &[
    "associate", "base", "celebrate", "close", "compete", "complete", "compose",
    "create", "dance", "debate", "decide", "dedicate", "describe", "die", "divorce",
    "engage", "feature", "finance", "graduate", "hire", "influence", "introduce",
    "issue", "locate", "manage", "merge", "name", "note", "operate", "place", "promote",
    "pursue", "race", "rate", "reduce", "release", "relocate", "rename", "replace",
    "restore", "retire", "score", "share", "stage", "state", "tie", "unite", "use",
    "vote",
];

const AUX: &[&str] = &[
    "is", "was", "are", "were", "has", "had", "have", "did", "does", "do", "can",
    "could", "will", "would", "may", "might", "shall", "should", "must",
];

fn is_vowel(c: char) -> bool {
    "aeiou".contains(c)
}

pub fn past(base: &str) -> String {
    if let Some((_, p)) = IRREGULAR.iter().find(|(b, _)| *b == base) {
        return p.to_string();
    }
    if base.ends_with('e') {
        return format!("{base}d");
    }
    let mut chars = base.chars().rev();
    if let (Some('y'), Some(prev)) = (chars.next(), chars.next()) {
        if !is_vowel(prev) {
            return format!("{}ied", &base[..base.len() - 1]);
        }
    }
    format!("{base}ed")
}

pub fn third_person(base: &str) -> String {
    match base {
        "be" => return "is".into(),
        "have" => return "has".into(),
        _ => {}
    }
    if ["s", "sh", "ch", "x", "z", "o"].iter().any(|s| base.ends_with(s)) {
        return format!("{base}es");
    }
    let mut chars = base.chars().rev();
    if let (Some('y'), Some(prev)) = (chars.next(), chars.next()) {
        if !is_vowel(prev) {
            return format!("{}ies", &base[..base.len() - 1]);
        }
    }
    format!("{base}s")
}

/// Best-effort base form of a past-tense verb.
pub fn base_from_past(p: &str) -> String {
    if let Some((b, _)) = IRREGULAR.iter().find(|(_, x)| *x == p) {
        return b.to_string();
    }
    if let Some(stem) = p.strip_suffix("ied") {
        return format!("{stem}y");
    }
    let Some(stem) = p.strip_suffix("ed") else {
        return p.to_string();
    };
    let with_e = format!("{stem}e");
    if E_FINAL.contains(&with_e.as_str()) {
        return with_e;
    }
    let cs: Vec<char> = stem.chars().collect();
    let n = cs.len();
    if n >= 2 && cs[n - 1] == cs[n - 2] && !is_vowel(cs[n - 1]) && !"lsfz".contains(cs[n - 1]) {
        return cs[..n - 1].iter().collect();
    }
    if stem.ends_with('v') || stem.ends_with('c') || stem.ends_with('u') {
        return with_e;
    }
    stem.to_string()
}

/// Best-effort base form of a third-person singular verb.
pub fn base_from_third_person(v: &str) -> String {
    match v {
        "is" => return "be".into(),
        "has" => return "have".into(),
        "does" => return "do".into(),
        "goes" => return "go".into(),
        _ => {}
    }
    if let Some(stem) = v.strip_suffix("ies") {
        return format!("{stem}y");
    }
    if let Some(stem) = v.strip_suffix("es") {
        if ["s", "sh", "ch", "x", "z"].iter().any(|s| stem.ends_with(s)) {
            return stem.to_string();
        }
    }
    v.strip_suffix('s').unwrap_or(v).to_string()
}

pub fn is_aux(tok: &str) -> bool {
    AUX.contains(&tok)
}

pub fn is_irregular_past(tok: &str) -> bool {
    IRREGULAR.iter().any(|(_, p)| *p == tok)
}

/// Tokens that clearly start a verb phrase: auxiliaries, irregular pasts
/// and "-ed" forms.
pub fn is_strong_verb(tok: &str) -> bool {
    is_lower_word(tok) && (is_aux(tok) || is_irregular_past(tok) || (tok.ends_with("ed") && tok.len() > 3))
}

/// "-s" present-tense forms, which are ambiguous with plural nouns.
pub fn is_weak_verb(tok: &str) -> bool {
    is_lower_word(tok)
        && tok.len() > 3
        && tok.ends_with('s')
        && !tok.ends_with("ss")
        && !tok.ends_with("us")
        && !tok.ends_with("is")
}

pub fn is_lower_word(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| c.is_lowercase() || c == '-' || c == '\'')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn past_forms() {
        assert_eq!(past("join"), "joined");
        assert_eq!(past("release"), "released");
        assert_eq!(past("marry"), "married");
        assert_eq!(past("play"), "played");
        assert_eq!(past("win"), "won");
    }

    #[test]
    fn third_person_forms() {
        assert_eq!(third_person("cross"), "crosses");
        assert_eq!(third_person("fly"), "flies");
        assert_eq!(third_person("play"), "plays");
        assert_eq!(third_person("have"), "has");
    }

    #[test]
    fn base_recovery() {
        for (p, b) in [
            ("joined", "join"),
            ("released", "release"),
            ("won", "win"),
            ("married", "marry"),
            ("completed", "complete"),
            ("moved", "move"),
            ("stopped", "stop"),
            ("crossed", "cross"),
            ("founded", "found"),
            ("produced", "produce"),
            ("played", "play"),
        ] {
            assert_eq!(base_from_past(p), b, "{p}");
        }
        assert_eq!(base_from_third_person("crosses"), "cross");
        assert_eq!(base_from_third_person("plays"), "play");
        assert_eq!(base_from_third_person("flies"), "fly");
    }

    #[test]
    fn past_round_trips_through_base() {
        for b in ["join", "release", "marry", "complete", "win", "cross", "play", "name"] {
            assert_eq!(base_from_past(&past(b)), b);
        }
    }

    #[test]
    fn verb_classes() {
        assert!(is_strong_verb("won"));
        assert!(is_strong_verb("joined"));
        assert!(is_strong_verb("is"));
        assert!(!is_strong_verb("Red"));
        assert!(is_weak_verb("crosses"));
        assert!(!is_weak_verb("class"));
        assert!(!is_weak_verb("bus"));
    }
}

use super::verbs::{is_lower_word, is_strong_verb, is_weak_verb, past, third_person};
use super::NlpError;

const WH: [&str; 6] = ["what", "which", "who", "whom", "when", "where"];
const BE: [&str; 4] = ["is", "was", "are", "were"];
const DO: [&str; 3] = ["did", "does", "do"];
const DETERMINERS: [&str; 6] = ["the", "a", "an", "this", "that", "his"];
const PRONOUNS: [&str; 7] = ["he", "she", "it", "they", "we", "you", "i"];

/// Rewrites a wh-question into a relative-clause predicate for
/// "the [MASK] that <predicate>".
///
/// Three rule families: subject-wh ("What bridge crosses X?"), object-wh
/// with an auxiliary ("What did X join?", "When was X completed?") and
/// copular ("Who was X?"). Anything else is unsupported.
pub fn question_to_predicate(q: &str, answer_entity: &str) -> Result<String, NlpError> {
    let unsupported = || NlpError::UnsupportedQuestionForm(q.to_string());
    let body = q.trim().strip_suffix('?').ok_or_else(unsupported)?.trim_end();
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.len() < 2 {
        return Err(unsupported());
    }
    let wh = tokens[0].to_lowercase();
    if !WH.contains(&wh.as_str()) {
        return Err(unsupported());
    }
    let rest = &tokens[1..];

    let pred = auxiliary(&wh, rest)
        .or_else(|| copular(&wh, rest))
        .or_else(|| subject_wh(&wh, rest))
        .ok_or_else(unsupported)?;

    if pred.is_empty() || pred.contains('?') {
        return Err(unsupported());
    }
    if !answer_entity.trim().is_empty() && contains_phrase(&pred, answer_entity.trim()) {
        return Err(unsupported());
    }
    Ok(pred)
}

/// Case-insensitive containment on token boundaries.
pub fn contains_phrase(haystack: &str, needle: &str) -> bool {
    let h = haystack.to_lowercase();
    let n = needle.to_lowercase();
    if n.is_empty() {
        return false;
    }
    let bytes = h.as_bytes();
    let mut from = 0;
    while let Some(pos) = h[from..].find(&n) {
        let s = from + pos;
        let e = s + n.len();
        let before_ok = h[..s].chars().next_back().is_none_or(|c| !c.is_alphanumeric());
        let after_ok = h[e..].chars().next().is_none_or(|c| !c.is_alphanumeric());
        if before_ok && after_ok {
            return true;
        }
        from = s + h[s..].chars().next().map_or(1, char::len_utf8);
        if from >= bytes.len() {
            break;
        }
    }
    false
}

fn is_cap(tok: &str) -> bool {
    tok.chars().next().is_some_and(char::is_uppercase)
}

/// Length of the subject noun phrase at the start of `toks`, if any.
fn subject_len(toks: &[&str]) -> Option<usize> {
    let first = *toks.first()?;
    let lower = first.to_lowercase();
    if PRONOUNS.contains(&lower.as_str()) {
        return Some(1);
    }
    let start = usize::from(DETERMINERS.contains(&lower.as_str()));
    let mut n = start;
    while n < toks.len() && (is_cap(toks[n]) || (n > start && n + 1 < toks.len() && toks[n] == "of" && is_cap(toks[n + 1]))) {
        n += 1;
    }
    if n > start {
        return Some(n);
    }
    // determiner plus a single common noun: "the bridge"
    if start == 1 && toks.len() > 1 && is_lower_word(toks[1]) {
        return Some(2);
    }
    None
}

fn auxiliary(wh: &str, rest: &[&str]) -> Option<String> {
    // optional noun phrase after what/which: "What album did ..."
    let max_np = if wh == "what" || wh == "which" { 3 } else { 0 };
    let aux_at = (0..=max_np.min(rest.len().saturating_sub(1))).find(|&i| {
        let t = rest[i].to_lowercase();
        DO.contains(&t.as_str()) || (BE.contains(&t.as_str()) && (wh == "when" || wh == "where"))
    })?;
    if rest[..aux_at].iter().any(|t| !is_lower_word(t)) {
        return None;
    }
    let aux = rest[aux_at].to_lowercase();
    let after = &rest[aux_at + 1..];
    let n = subject_len(after)?;
    let subject = after[..n].join(" ");
    let verb_tokens = &after[n..];
    let verb = *verb_tokens.first()?;
    if !is_lower_word(verb) {
        return None;
    }
    if BE.contains(&aux.as_str()) {
        // "When was X completed?" -> "X was completed"
        return Some(format!("{subject} {aux} {}", verb_tokens.join(" ")));
    }
    let inflected = match aux.as_str() {
        "did" => past(verb),
        "does" => third_person(verb),
        _ => verb.to_string(),
    };
    let mut out = vec![subject, inflected];
    out.extend(verb_tokens[1..].iter().map(|s| s.to_string()));
    Some(out.join(" "))
}

fn copular(wh: &str, rest: &[&str]) -> Option<String> {
    if !matches!(wh, "who" | "what" | "which") {
        return None;
    }
    let be = rest[0].to_lowercase();
    if !BE.contains(&be.as_str()) || rest.len() < 2 {
        return None;
    }
    Some(format!("{be} {}", rest[1..].join(" ")))
}

fn subject_wh(wh: &str, rest: &[&str]) -> Option<String> {
    if !matches!(wh, "who" | "what" | "which") {
        return None;
    }
    if is_strong_verb(rest[0]) || (wh == "who" && is_weak_verb(rest[0])) {
        return Some(rest.join(" "));
    }
    if wh == "who" {
        return None;
    }
    let vp = (1..rest.len()).find(|&j| is_strong_verb(rest[j]) || is_weak_verb(rest[j]))?;
    if rest[..vp].iter().any(|t| !is_lower_word(t)) {
        return None;
    }
    Some(rest[vp..].join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(q: &str) -> String {
        question_to_predicate(q, "").unwrap()
    }

    #[test]
    fn subject_wh_forms() {
        assert_eq!(ok("What bridge crosses Youngs Bay?"), "crosses Youngs Bay");
        assert_eq!(
            ok("Who won the Eurovision Song Contest in 1966?"),
            "won the Eurovision Song Contest in 1966"
        );
        assert_eq!(ok("Which team joined the league in 1963?"), "joined the league in 1963");
    }

    #[test]
    fn do_support_forms() {
        assert_eq!(ok("What did Jenson Button join?"), "Jenson Button joined");
        assert_eq!(
            ok("When did Jenson Button join Gals and Pals?"),
            "Jenson Button joined Gals and Pals"
        );
        assert_eq!(
            ok("What album did the Oak Ridge Boys release in 1989?"),
            "the Oak Ridge Boys released in 1989"
        );
        assert_eq!(ok("Where does the bridge cross?"), "the bridge crosses");
        assert_eq!(ok("What did he win?"), "he won");
    }

    #[test]
    fn passive_with_be() {
        assert_eq!(ok("When was the Old Youngs Bay Bridge completed?"), "the Old Youngs Bay Bridge was completed");
    }

    #[test]
    fn copular_forms() {
        assert_eq!(ok("Who was Jenson Button?"), "was Jenson Button");
        assert_eq!(ok("What is the capital of Kerala?"), "is the capital of Kerala");
    }

    #[test]
    fn unsupported_forms() {
        for q in [
            "Is it raining?",
            "How many students attend?",
            "What?",
            "What bridge crosses Youngs Bay",
            "Who Jenson Button?",
        ] {
            assert!(question_to_predicate(q, "").is_err(), "{q}");
        }
    }

    #[test]
    fn predicate_may_not_contain_answer() {
        assert!(question_to_predicate("Who won the contest in 1966?", "1966").is_err());
        assert!(question_to_predicate("Who won the contest in 19667?", "1966").is_ok());
    }

    #[test]
    fn phrase_boundaries() {
        assert!(contains_phrase("won in 1966", "1966"));
        assert!(!contains_phrase("won in 19667", "1966"));
        assert!(contains_phrase("Jenson Button won", "jenson button"));
        assert!(!contains_phrase("anything", ""));
    }
}

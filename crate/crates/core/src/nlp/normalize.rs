use unicode_normalization::UnicodeNormalization;

const ARTICLES: [&str; 3] = ["the", "a", "an"];

/// Canonical comparison key for an entity surface: NFKC, lowercase,
/// no leading/trailing punctuation, no leading article, single spaces.
///
/// Steps repeat until nothing changes so the result is a fixed point.
pub fn normalize_surface(s: &str) -> String {
    let mut current = step(s);
    loop {
        let next = step(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

fn step(s: &str) -> String {
    let folded: String = s.nfkc().collect::<String>().to_lowercase();
    let trimmed = folded.trim_matches(|c: char| !c.is_alphanumeric());
    let mut words: Vec<&str> = trimmed.split_whitespace().collect();
    while words.first().is_some_and(|w| ARTICLES.contains(w)) {
        words.remove(0);
    }
    words.join(" ")
}

use std::fs;
use std::path::Path;

use super::NlpError;

const NATIONALITIES: &str = include_str!("../../data/nationalities.txt");
const LOCATIONS: &str = include_str!("../../data/locations.txt");
const LOCATION_HEADS: &str = include_str!("../../data/location_heads.txt");
const ORG_HEADS: &str = include_str!("../../data/org_heads.txt");
const STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Word lists driving the rule-based tagger. Files hold one entry per line;
/// blank lines and `#` comments are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gazetteers {
    pub nationalities: Vec<String>,
    pub locations: Vec<String>,
    /// Final tokens marking a capitalized run as a place ("Bay", "River").
    pub location_heads: Vec<String>,
    /// Final tokens marking a capitalized run as a non-person name.
    pub org_heads: Vec<String>,
    /// Lowercase function words.
    pub stopwords: Vec<String>,
}

impl Gazetteers {
    pub fn bundled() -> Self {
        Self {
            nationalities: parse(NATIONALITIES),
            locations: parse(LOCATIONS),
            location_heads: parse(LOCATION_HEADS),
            org_heads: parse(ORG_HEADS),
            stopwords: parse(STOPWORDS).into_iter().map(|s| s.to_lowercase()).collect(),
        }
    }

    /// Loads `nationalities.txt`, `locations.txt`, `location_heads.txt`,
    /// `org_heads.txt` and `stopwords.txt` from `dir`. A missing file falls
    /// back to the bundled list.
    pub fn load_dir(dir: &Path) -> Result<Self, NlpError> {
        if !dir.is_dir() {
            return Err(NlpError::Gazetteer {
                path: dir.display().to_string(),
                detail: "not a directory".into(),
            });
        }
        let mut g = Self::bundled();
        let slots: [(&str, &mut Vec<String>); 5] = [
            ("nationalities.txt", &mut g.nationalities),
            ("locations.txt", &mut g.locations),
            ("location_heads.txt", &mut g.location_heads),
            ("org_heads.txt", &mut g.org_heads),
            ("stopwords.txt", &mut g.stopwords),
        ];
        for (name, slot) in slots {
            let path = dir.join(name);
            if !path.exists() {
                continue;
            }
            let text = fs::read_to_string(&path).map_err(|e| NlpError::Gazetteer {
                path: path.display().to_string(),
                detail: e.to_string(),
            })?;
            *slot = parse(&text);
        }
        g.stopwords = g.stopwords.iter().map(|s| s.to_lowercase()).collect();
        Ok(g)
    }
}

fn parse(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks_skipped() {
        assert_eq!(parse("# c\n\n  French \n#x\nGerman"), vec!["French", "German"]);
    }

    #[test]
    fn bundled_lists_present() {
        let g = Gazetteers::bundled();
        assert!(g.nationalities.iter().any(|n| n == "American"));
        assert!(g.locations.iter().any(|n| n == "Kerala"));
        assert!(g.stopwords.iter().all(|s| s == &s.to_lowercase()));
    }

    #[test]
    fn dir_overrides_single_file() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("nationalities.txt"), "# test\nMartian\n").unwrap();
        let g = Gazetteers::load_dir(dir.path()).unwrap();
        assert_eq!(g.nationalities, vec!["Martian"]);
        assert_eq!(g.locations, Gazetteers::bundled().locations);
    }

    #[test]
    fn missing_dir_is_error() {
        assert!(Gazetteers::load_dir(Path::new("/nonexistent/gaz")).is_err());
    }
}

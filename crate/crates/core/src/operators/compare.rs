use std::cmp::Ordering;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{OpError, Property};
use crate::corpus::CorpusError;
use crate::nlp::{normalize_surface, parse_date};

const BUNDLED: &str = include_str!("../../data/comparison_templates.tsv");

/// How a comparison template derives its gold answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerRule {
    /// Name of the entity with the earlier date.
    Earlier,
    /// "Yes" iff both answers agree.
    Same,
    /// The first entity.
    E1,
    /// The second entity.
    E2,
    /// "Yes" iff both answers equal the first one.
    BothA1,
}

impl AnswerRule {
    fn parse(s: &str) -> Option<AnswerRule> {
        Some(match s {
            "earlier" => AnswerRule::Earlier,
            "same" => AnswerRule::Same,
            "e1" => AnswerRule::E1,
            "e2" => AnswerRule::E2,
            "both_a1" => AnswerRule::BothA1,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonTemplate {
    pub property: Property,
    pub template: String,
    pub rule: AnswerRule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonTemplates(Vec<ComparisonTemplate>);

impl ComparisonTemplates {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED, "<bundled>").expect("bundled templates parse")
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CorpusError::Io { path: path.display().to_string(), source: e })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses `property TAB template TAB rule` lines; blank lines and `#`
    /// comments are skipped.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CorpusError> {
        let bad = |n: usize, why: String| CorpusError::MalformedInput {
            index: Some(n + 1),
            detail: format!("{origin}: {why}"),
        };
        let mut out = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let [prop, template, rule] = cols[..] else {
                return Err(bad(n, format!("expected 3 tab-separated fields, got {}", cols.len())));
            };
            let property = Property::parse(prop.trim()).ok_or_else(|| bad(n, format!("unknown property {prop:?}")))?;
            let rule = AnswerRule::parse(rule.trim()).ok_or_else(|| bad(n, format!("unknown rule {rule:?}")))?;
            if !template.contains("{e1}") || !template.contains("{e2}") {
                return Err(bad(n, "template must mention {e1} and {e2}".into()));
            }
            out.push(ComparisonTemplate { property, template: template.to_string(), rule });
        }
        Ok(Self(out))
    }

    pub fn for_property(&self, p: Property) -> impl Iterator<Item = &ComparisonTemplate> {
        self.0.iter().filter(move |t| t.property == p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One instantiated comparison question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompQa {
    pub question: String,
    pub answer: String,
    pub template: String,
}

fn yes_no(b: bool) -> String {
    if b { "Yes" } else { "No" }.to_string()
}

/// Instantiates every template for `prop` over entities `e1`, `e2` whose
/// property values are `a1`, `a2`. Templates whose answer cannot be
/// decided are skipped; if none remain the result is `Undecidable`.
pub fn comp_blend(
    prop: Property,
    e1: &str,
    e2: &str,
    a1: &str,
    a2: &str,
    templates: &ComparisonTemplates,
) -> Result<Vec<CompQa>, OpError> {
    let (n1, n2) = (normalize_surface(a1), normalize_surface(a2));
    let mut out = Vec::new();
    let mut why = format!("no templates for {}", prop.as_str());
    for t in templates.for_property(prop) {
        let answer = match t.rule {
            AnswerRule::Earlier => match (parse_date(a1), parse_date(a2)) {
                (Some(d1), Some(d2)) => match d1.compare(&d2) {
                    Ordering::Less => e1.to_string(),
                    Ordering::Greater => e2.to_string(),
                    Ordering::Equal => {
                        why = format!("dates {a1:?} and {a2:?} tie");
                        continue;
                    }
                },
                _ => {
                    why = format!("cannot parse {a1:?} or {a2:?} as dates");
                    continue;
                }
            },
            AnswerRule::Same | AnswerRule::BothA1 => yes_no(n1 == n2),
            AnswerRule::E1 | AnswerRule::E2 if n1 == n2 => {
                why = format!("both entities share {a1:?}");
                continue;
            }
            AnswerRule::E1 => e1.to_string(),
            AnswerRule::E2 => e2.to_string(),
        };
        let question = t
            .template
            .replace("{e1}", e1)
            .replace("{e2}", e2)
            .replace("{a1}", a1)
            .replace("{a2}", a2);
        out.push(CompQa { question, answer, template: t.template.clone() });
    }
    if out.is_empty() {
        return Err(OpError::Undecidable(why));
    }
    Ok(out)
}

//! Corpus data model and ingestion.
//!
//! Two corpus shapes are supported: tables whose cells link to passages
//! (heterogeneous input) and pairs of titled passages (homogeneous input).
//! Both load from JSON arrays and are immutable once built.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input{}: {detail}", index.map(|i| format!(" at record {i}")).unwrap_or_default())]
    MalformedInput { index: Option<usize>, detail: String },
    #[error("record {index}: cell links to missing passage {passage_id:?}")]
    DanglingLink { index: usize, passage_id: String },
    #[error("record {index}: pair uses the same passage id {id:?} twice")]
    DuplicatePair { index: usize, id: String },
    #[error("row index {index} out of range for table with {rows} rows")]
    IndexOutOfRange { index: usize, rows: usize },
}

/// A titled passage. Sentence spans are byte ranges into `text`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub id: String,
    pub title: String,
    pub text: String,
    #[serde(skip)]
    pub sentences: Vec<Range<usize>>,
}

impl Passage {
    /// Builds a passage and segments its sentences.
    pub fn new(id: impl Into<String>, title: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let sentences = split_sentences(&text);
        Self {
            id: id.into(),
            title: title.into(),
            text,
            sentences,
        }
    }

    /// The sentence span containing byte offset `pos`, if any.
    pub fn sentence_containing(&self, pos: usize) -> Option<Range<usize>> {
        self.sentences
            .iter()
            .find(|s| s.start <= pos && pos < s.end)
            .cloned()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub raw: String,
    #[serde(rename = "links", default)]
    pub linked_passage_ids: Vec<String>,
}

impl Cell {
    pub fn new(raw: impl Into<String>) -> Self {
        Self {
            raw: raw.into(),
            linked_passage_ids: Vec::new(),
        }
    }

    pub fn linked(raw: impl Into<String>, ids: &[&str]) -> Self {
        Self {
            raw: raw.into(),
            linked_passage_ids: ids.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub id: String,
    pub title: String,
    #[serde(default)]
    pub section_title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Checks the structural invariants: non-empty distinct headers and
    /// rectangular rows.
    pub fn check(&self) -> Result<(), String> {
        if self.headers.is_empty() {
            return Err(format!("table {:?} has no headers", self.id));
        }
        let mut seen = BTreeSet::new();
        for h in &self.headers {
            let key = normalize_cell(h).to_lowercase();
            if !seen.insert(key) {
                return Err(format!("table {:?} repeats header {h:?}", self.id));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.headers.len() {
                return Err(format!(
                    "table {:?} row {i} has {} cells, expected {}",
                    self.id,
                    row.len(),
                    self.headers.len()
                ));
            }
        }
        Ok(())
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<&Cell> {
        self.rows.get(row).and_then(|r| r.get(col))
    }
}

/// A table together with the passages its cells link to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkedTableContext {
    pub table: Table,
    pub passages: BTreeMap<String, Passage>,
}

impl LinkedTableContext {
    /// Passages in the order their first link appears in the table
    /// (row-major), followed by any unlinked passages in id order.
    pub fn passages_in_link_order(&self) -> Vec<&Passage> {
        let mut order: Vec<&str> = Vec::new();
        for row in &self.table.rows {
            for cell in row {
                for id in &cell.linked_passage_ids {
                    if !order.contains(&id.as_str()) {
                        order.push(id);
                    }
                }
            }
        }
        let mut out: Vec<&Passage> = order.iter().filter_map(|id| self.passages.get(*id)).collect();
        for (id, p) in &self.passages {
            if !order.contains(&id.as_str()) {
                out.push(p);
            }
        }
        out
    }

    /// Passage ids linked from a given row.
    pub fn row_links(&self, row: usize) -> Vec<&str> {
        self.table
            .rows
            .get(row)
            .map(|cells| {
                cells
                    .iter()
                    .flat_map(|c| c.linked_passage_ids.iter().map(String::as_str))
                    .collect()
            })
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassagePair {
    pub first: Passage,
    pub second: Passage,
}

// Wire records. Passages inside a table record are keyed by id and carry
// no id field of their own.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRecord {
    table: Table,
    #[serde(default)]
    passages: BTreeMap<String, PassageBody>,
}

#[derive(Serialize, Deserialize)]
struct PassageBody {
    title: String,
    text: String,
}

#[derive(Serialize, Deserialize)]
struct PairRecord {
    first: PassageRecord,
    second: PassageRecord,
}

#[derive(Serialize, Deserialize)]
struct PassageRecord {
    id: String,
    title: String,
    text: String,
}

fn read(path: &Path) -> Result<String, CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if bytes.starts_with(&[0xEF, 0xBB, 0xBF]) {
        return Err(CorpusError::MalformedInput {
            index: None,
            detail: "byte-order mark not allowed".into(),
        });
    }
    String::from_utf8(bytes).map_err(|e| CorpusError::MalformedInput {
        index: None,
        detail: format!("not UTF-8: {e}"),
    })
}

fn records(content: &str) -> Result<Vec<serde_json::Value>, CorpusError> {
    match serde_json::from_str::<serde_json::Value>(content) {
        Ok(serde_json::Value::Array(items)) => Ok(items),
        Ok(_) => Err(CorpusError::MalformedInput {
            index: None,
            detail: "top-level value must be an array".into(),
        }),
        Err(e) => Err(CorpusError::MalformedInput {
            index: None,
            detail: e.to_string(),
        }),
    }
}

fn malformed(index: usize, detail: impl ToString) -> CorpusError {
    CorpusError::MalformedInput {
        index: Some(index),
        detail: detail.to_string(),
    }
}

pub fn load_table_corpus(path: &Path) -> Result<Vec<LinkedTableContext>, CorpusError> {
    parse_table_corpus(&read(path)?)
}

pub fn parse_table_corpus(content: &str) -> Result<Vec<LinkedTableContext>, CorpusError> {
    let mut out = Vec::new();
    for (index, value) in records(content)?.into_iter().enumerate() {
        let record: TableRecord = serde_json::from_value(value).map_err(|e| malformed(index, e))?;
        let mut table = record.table;
        table.headers = table.headers.iter().map(|h| normalize_cell(h)).collect();
        for row in &mut table.rows {
            for cell in row.iter_mut() {
                cell.raw = normalize_cell(&cell.raw);
            }
        }
        table.check().map_err(|e| malformed(index, e))?;

        let mut passages = BTreeMap::new();
        for (id, body) in record.passages {
            if body.title.trim().is_empty() {
                return Err(malformed(index, format!("passage {id:?} has an empty title")));
            }
            passages.insert(id.clone(), Passage::new(id, body.title, body.text));
        }
        for row in &table.rows {
            for cell in row {
                for id in &cell.linked_passage_ids {
                    if !passages.contains_key(id) {
                        return Err(CorpusError::DanglingLink {
                            index,
                            passage_id: id.clone(),
                        });
                    }
                }
            }
        }
        out.push(LinkedTableContext { table, passages });
    }
    Ok(out)
}

pub fn load_text_pair_corpus(path: &Path) -> Result<Vec<PassagePair>, CorpusError> {
    parse_text_pair_corpus(&read(path)?)
}

pub fn parse_text_pair_corpus(content: &str) -> Result<Vec<PassagePair>, CorpusError> {
    let mut out = Vec::new();
    for (index, value) in records(content)?.into_iter().enumerate() {
        let record: PairRecord = serde_json::from_value(value).map_err(|e| malformed(index, e))?;
        if record.first.id == record.second.id {
            return Err(CorpusError::DuplicatePair {
                index,
                id: record.first.id,
            });
        }
        for p in [&record.first, &record.second] {
            if p.title.trim().is_empty() {
                return Err(malformed(index, format!("passage {:?} has an empty title", p.id)));
            }
        }
        let conv = |p: PassageRecord| Passage::new(p.id, p.title, p.text);
        out.push(PassagePair {
            first: conv(record.first),
            second: conv(record.second),
        });
    }
    Ok(out)
}

/// Serializes table contexts back into the corpus JSON format.
pub fn table_corpus_to_json(contexts: &[LinkedTableContext]) -> String {
    let records: Vec<TableRecord> = contexts
        .iter()
        .map(|c| TableRecord {
            table: c.table.clone(),
            passages: c
                .passages
                .iter()
                .map(|(id, p)| {
                    (
                        id.clone(),
                        PassageBody {
                            title: p.title.clone(),
                            text: p.text.clone(),
                        },
                    )
                })
                .collect(),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("corpus records always serialize")
}

pub fn pair_corpus_to_json(pairs: &[PassagePair]) -> String {
    let rec = |p: &Passage| PassageRecord {
        id: p.id.clone(),
        title: p.title.clone(),
        text: p.text.clone(),
    };
    let records: Vec<PairRecord> = pairs
        .iter()
        .map(|p| PairRecord {
            first: rec(&p.first),
            second: rec(&p.second),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("corpus records always serialize")
}

/// Trims and collapses internal whitespace runs to a single space.
pub fn normalize_cell(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Linearizes one table row as
/// `<title> ; <section_title> ; <header> is <cell> ; ... .`, skipping empty cells.
pub fn flatten_table_row(table: &Table, row_index: usize) -> Result<String, CorpusError> {
    let row = table.rows.get(row_index).ok_or(CorpusError::IndexOutOfRange {
        index: row_index,
        rows: table.rows.len(),
    })?;
    let mut parts = vec![table.title.clone(), table.section_title.clone()];
    for (header, cell) in table.headers.iter().zip(row) {
        if !cell.raw.is_empty() {
            parts.push(format!("{header} is {}", cell.raw));
        }
    }
    Ok(format!("{} .", parts.join(" ; ")))
}

/// A flattened row read back into its parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatRow {
    pub title: String,
    pub section_title: String,
    /// (header, cell) pairs in column order, empty cells absent.
    pub facts: Vec<(String, String)>,
}

/// Inverse of [`flatten_table_row`]. Returns `None` for text that does not
/// have the flattened shape.
pub fn parse_flattened_row(s: &str) -> Option<FlatRow> {
    let body = s.strip_suffix(" .")?;
    let mut parts = body.split(" ; ");
    let title = parts.next()?.to_string();
    let section_title = parts.next()?.to_string();
    let mut facts = Vec::new();
    for part in parts {
        let (h, c) = part.split_once(" is ")?;
        facts.push((h.to_string(), c.to_string()));
    }
    Some(FlatRow { title, section_title, facts })
}

const ABBREVIATIONS: [&str; 5] = ["Mr.", "Mrs.", "Dr.", "St.", "No."];

/// Splits text into sentence spans at `.`, `?` or `!` followed by
/// whitespace and then an uppercase letter or digit. Known abbreviations
/// never end a sentence.
pub fn split_sentences(text: &str) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut start = None;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    for (k, &(i, c)) in chars.iter().enumerate() {
        if start.is_none() {
            if c.is_whitespace() {
                continue;
            }
            start = Some(i);
        }
        if !matches!(c, '.' | '?' | '!') {
            continue;
        }
        let Some(&(_, ws)) = chars.get(k + 1) else { continue };
        if !ws.is_whitespace() {
            continue;
        }
        let next = chars[k + 1..].iter().find(|(_, ch)| !ch.is_whitespace());
        let Some(&(_, nc)) = next else { continue };
        if !(nc.is_uppercase() || nc.is_ascii_digit()) {
            continue;
        }
        if c == '.' {
            let word_start = text[..i]
                .char_indices()
                .rev()
                .find(|(_, ch)| ch.is_whitespace())
                .map_or(0, |(p, ch)| p + ch.len_utf8());
            let word = &text[word_start..=i];
            if ABBREVIATIONS.contains(&word) {
                continue;
            }
        }
        let s = start.take().unwrap();
        spans.push(s..i + c.len_utf8());
    }
    if let Some(s) = start {
        let end = text.trim_end().len();
        if end > s {
            spans.push(s..end);
        }
    }
    spans
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grand_prix() -> Table {
        Table {
            id: "t1".into(),
            title: "2004 United States Grand Prix".into(),
            section_title: String::new(),
            headers: vec!["Pos".into(), "Driver".into()],
            rows: vec![
                vec![Cell::new("4"), Cell::linked("Jenson Button", &["p1"])],
                vec![Cell::new(""), Cell::new("")],
            ],
        }
    }

    #[test]
    fn flattened_row_parses_back() {
        let t = grand_prix();
        let flat = parse_flattened_row(&flatten_table_row(&t, 0).unwrap()).unwrap();
        assert_eq!(flat.title, t.title);
        assert_eq!(flat.section_title, "");
        assert_eq!(
            flat.facts,
            vec![
                ("Pos".to_string(), "4".to_string()),
                ("Driver".to_string(), "Jenson Button".to_string())
            ]
        );
        let empty = parse_flattened_row(&flatten_table_row(&t, 1).unwrap()).unwrap();
        assert!(empty.facts.is_empty());
        assert!(parse_flattened_row("Jenson Button joined Gals and Pals in 1963.").is_none());
    }

    #[test]
    fn flatten_grand_prix_row() {
        assert_eq!(
            flatten_table_row(&grand_prix(), 0).unwrap(),
            "2004 United States Grand Prix ;  ; Pos is 4 ; Driver is Jenson Button ."
        );
    }

    #[test]
    fn flatten_empty_row_keeps_titles_only() {
        assert_eq!(
            flatten_table_row(&grand_prix(), 1).unwrap(),
            "2004 United States Grand Prix ;  ."
        );
    }

    #[test]
    fn flatten_out_of_range() {
        let t = grand_prix();
        assert!(matches!(
            flatten_table_row(&t, t.rows.len()),
            Err(CorpusError::IndexOutOfRange { index: 2, rows: 2 })
        ));
    }

    #[test]
    fn sentences_split_on_capital_after_period() {
        let text = "Mr. Smith met Dr. Jones. They talked. it continued? Yes! 2004 was good.";
        let spans = split_sentences(text);
        let got: Vec<&str> = spans.iter().map(|r| &text[r.clone()]).collect();
        assert_eq!(
            got,
            vec![
                "Mr. Smith met Dr. Jones.",
                "They talked. it continued?",
                "Yes!",
                "2004 was good."
            ]
        );
    }

    #[test]
    fn sentences_after_multibyte_whitespace() {
        let text = "A b\u{85}Dr. Jones left. He\u{a0}c. Then x.";
        let got: Vec<&str> = split_sentences(text).iter().map(|r| &text[r.clone()]).collect();
        assert_eq!(got, vec!["A b\u{85}Dr. Jones left.", "He\u{a0}c.", "Then x."]);
    }

    #[test]
    fn sentences_of_empty_text() {
        assert!(split_sentences("").is_empty());
        assert!(split_sentences("   ").is_empty());
    }

    #[test]
    fn cell_normalization() {
        assert_eq!(normalize_cell("  Jenson \t  Button "), "Jenson Button");
    }

    #[test]
    fn empty_corpus_loads_empty() {
        assert!(parse_table_corpus("[]").unwrap().is_empty());
        assert!(parse_text_pair_corpus("[]").unwrap().is_empty());
    }

    #[test]
    fn dangling_link_names_passage() {
        let json = r#"[{"table":{"id":"t","title":"T","section_title":"","headers":["A"],
            "rows":[[{"raw":"x","links":["p99"]}]]},"passages":{}}]"#;
        match parse_table_corpus(json) {
            Err(CorpusError::DanglingLink { index, passage_id }) => {
                assert_eq!(index, 0);
                assert_eq!(passage_id, "p99");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_row_is_malformed() {
        let json = r#"[{"table":{"id":"t","title":"T","headers":["A","B"],
            "rows":[[{"raw":"x"}]]},"passages":{}}]"#;
        assert!(matches!(
            parse_table_corpus(json),
            Err(CorpusError::MalformedInput { index: Some(0), .. })
        ));
    }

    #[test]
    fn duplicate_headers_after_normalization() {
        let json = r#"[{"table":{"id":"t","title":"T","headers":["Pos"," pos "],
            "rows":[]},"passages":{}}]"#;
        assert!(parse_table_corpus(json).is_err());
    }

    #[test]
    fn duplicate_pair_rejected() {
        let json = r#"[{"first":{"id":"a","title":"A","text":"x"},
                        "second":{"id":"a","title":"B","text":"y"}}]"#;
        assert!(matches!(
            parse_text_pair_corpus(json),
            Err(CorpusError::DuplicatePair { index: 0, .. })
        ));
    }

    #[test]
    fn non_array_is_malformed() {
        assert!(matches!(
            parse_table_corpus("{}"),
            Err(CorpusError::MalformedInput { index: None, .. })
        ));
    }

    #[test]
    fn link_order_follows_rows() {
        let mut passages = BTreeMap::new();
        passages.insert("a".to_string(), Passage::new("a", "A", "x"));
        passages.insert("b".to_string(), Passage::new("b", "B", "y"));
        let ctx = LinkedTableContext {
            table: Table {
                id: "t".into(),
                title: "T".into(),
                section_title: String::new(),
                headers: vec!["H".into()],
                rows: vec![vec![Cell::linked("x", &["b"])], vec![Cell::linked("y", &["a"])]],
            },
            passages,
        };
        let ids: Vec<&str> = ctx.passages_in_link_order().iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, vec!["b", "a"]);
    }
}

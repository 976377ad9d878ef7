//! Corpus serialization round trips and loader errors on disk.

use std::collections::BTreeMap;
use std::io::Write;

use mhqg_core::corpus::{
    load_table_corpus, load_text_pair_corpus, pair_corpus_to_json, parse_table_corpus, parse_text_pair_corpus,
    table_corpus_to_json, Cell, CorpusError, LinkedTableContext, Passage, PassagePair, Table,
};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = String> {
    "[A-Za-z0-9éü]{1,8}"
}

fn phrase() -> impl Strategy<Value = String> {
    prop::collection::vec(word(), 1..4).prop_map(|w| w.join(" "))
}

fn context() -> impl Strategy<Value = LinkedTableContext> {
    (1usize..4, 0usize..4).prop_flat_map(|(cols, rows)| {
        (
            "[a-z]{1,6}",
            phrase(),
            prop::collection::btree_set("[A-Z][a-z]{1,6}", cols),
            prop::collection::vec(prop::collection::vec((phrase(), any::<bool>()), cols), rows),
        )
            .prop_map(|(id, title, headers, grid)| {
                let mut passages = BTreeMap::new();
                let rows = grid
                    .into_iter()
                    .enumerate()
                    .map(|(r, row)| {
                        row.into_iter()
                            .enumerate()
                            .map(|(c, (raw, link))| {
                                if !link {
                                    return Cell::new(raw);
                                }
                                let pid = format!("p{r}x{c}");
                                passages.insert(pid.clone(), Passage::new(&pid, &raw, format!("{raw} is here. It stays.")));
                                Cell::linked(raw, &[pid.as_str()])
                            })
                            .collect()
                    })
                    .collect();
                let table = Table { id, title, section_title: String::new(), headers: headers.into_iter().collect(), rows };
                LinkedTableContext { table, passages }
            })
    })
}

fn pair() -> impl Strategy<Value = PassagePair> {
    (phrase(), phrase(), ".{0,80}", ".{0,80}").prop_map(|(t1, t2, x1, x2)| PassagePair {
        first: Passage::new("a", t1, x1),
        second: Passage::new("b", t2, x2),
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tables_round_trip(cs in prop::collection::vec(context(), 0..4)) {
        prop_assert_eq!(parse_table_corpus(&table_corpus_to_json(&cs)).unwrap(), cs);
    }

    #[test]
    fn pairs_round_trip(ps in prop::collection::vec(pair(), 0..4)) {
        prop_assert_eq!(parse_text_pair_corpus(&pair_corpus_to_json(&ps)).unwrap(), ps);
    }
}

#[test]
fn bundled_fixtures_load() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
    let tables = load_table_corpus(format!("{root}/tables.json").as_ref()).unwrap();
    let pairs = load_text_pair_corpus(format!("{root}/pairs.json").as_ref()).unwrap();
    assert_eq!((tables.len(), pairs.len()), (2, 3));
    assert_eq!(tables[0].table.title, "2004 United States Grand Prix");
}

#[test]
fn loader_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert!(matches!(load_table_corpus(&missing), Err(CorpusError::Io { .. })));

    let bom = dir.path().join("bom.json");
    std::fs::File::create(&bom).unwrap().write_all(b"\xEF\xBB\xBF[]").unwrap();
    assert!(matches!(load_text_pair_corpus(&bom), Err(CorpusError::MalformedInput { index: None, .. })));

    let latin1 = dir.path().join("latin1.json");
    std::fs::write(&latin1, b"[\"\xE9\"]").unwrap();
    assert!(matches!(load_table_corpus(&latin1), Err(CorpusError::MalformedInput { .. })));

    let untitled = r#"[{"first":{"id":"a","title":" ","text":"x"},"second":{"id":"b","title":"B","text":"y"}}]"#;
    assert!(matches!(parse_text_pair_corpus(untitled), Err(CorpusError::MalformedInput { index: Some(0), .. })));
}

#[test]
fn cells_are_normalized_on_load() {
    let json = r#"[{"table":{"id":"t","title":"T","headers":["  Pos "],"rows":[[{"raw":" 3 \t "}]]}}]"#;
    let c = parse_table_corpus(json).unwrap();
    assert_eq!((c[0].table.headers[0].as_str(), c[0].table.rows[0][0].raw.as_str()), ("Pos", "3"));
}

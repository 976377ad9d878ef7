//! FindBridge against set intersection over planted entities.

use std::collections::BTreeSet;

use mhqg_core::corpus::{Cell, Passage, Table};
use mhqg_core::nlp::Nlp;
use mhqg_core::operators::{find_bridge_table, find_bridge_text};
use proptest::prelude::*;

const FIRST: [&str; 8] = ["Alma", "Corin", "Idris", "Maren", "Tobin", "Ysolde", "Perrin", "Odile"];
const LAST: [&str; 5] = ["Brook", "Vale", "Moss", "Thorne", "Halloway"];
const PLACES: [&str; 4] = ["Paris", "Oregon", "Berlin", "Chicago"];

fn pool() -> Vec<String> {
    let mut v: Vec<String> =
        FIRST.iter().flat_map(|f| LAST.iter().map(move |l| format!("{f} {l}"))).collect();
    v.extend(PLACES.iter().map(|p| p.to_string()));
    v
}

/// Sentences that each plant one or two entities.
fn passage(id: &str, names: &[String]) -> Passage {
    let text = names
        .chunks(2)
        .map(|c| match c {
            [a, b] => format!("{a} met {b} there."),
            [a] => format!("It was {a} who came."),
            _ => unreachable!(),
        })
        .collect::<Vec<_>>()
        .join(" ");
    Passage::new(id, id, text)
}

fn key(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

fn subset() -> impl Strategy<Value = Vec<String>> {
    prop::sample::subsequence(pool(), 1..=10).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn text_bridges_are_the_intersection(a in subset(), b in subset()) {
        let nlp = Nlp::bundled();
        let got: BTreeSet<String> = find_bridge_text(&passage("d1", &a), &passage("d2", &b), &nlp)
            .into_iter()
            .map(|e| e.mention.normalized)
            .collect();
        let kb: BTreeSet<String> = b.iter().map(|s| key(s)).collect();
        let want: BTreeSet<String> = a.iter().map(|s| key(s)).filter(|k| kb.contains(k)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn table_bridges_are_the_intersection(
        text in subset(),
        cells in prop::collection::vec((prop::sample::select(pool()), any::<bool>()), 1..10),
    ) {
        let nlp = Nlp::bundled();
        // half the cells are re-cased and padded
        let rows: Vec<Vec<Cell>> = cells
            .iter()
            .map(|(v, noisy)| {
                let raw = if *noisy { format!("  {}  ", v.to_uppercase().replace(' ', "   ")) } else { v.clone() };
                vec![Cell::new(raw)]
            })
            .collect();
        let table = Table {
            id: "t".into(),
            title: "Roster".into(),
            section_title: String::new(),
            headers: vec!["Name".into()],
            rows,
        };
        let got: BTreeSet<String> = find_bridge_table(&table, &passage("d", &text), &nlp)
            .into_iter()
            .map(|e| e.mention.normalized)
            .collect();
        let kt: BTreeSet<String> = text.iter().map(|s| key(s)).collect();
        let want: BTreeSet<String> = cells.iter().map(|(v, _)| key(v)).filter(|k| kt.contains(k)).collect();
        prop_assert_eq!(got, want);
    }
}

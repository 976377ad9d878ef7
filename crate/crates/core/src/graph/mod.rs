//! Typed operator DAGs: the six builtin reasoning graphs, validation and
//! execution.

mod builtin;
mod exec;
mod value;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use builtin::builtin;
pub use exec::{Engine, ExecConfig, ExecReport, Execution, GraphError, GraphInput, DEFAULT_MAX_FANOUT};
pub use value::{CellRef, EntityValue, QaPair, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    TableOnly,
    TextOnly,
    TableToText,
    TextToTable,
    TextToText,
    Comparison,
}

impl GraphKind {
    pub const ALL: [GraphKind; 6] = [
        GraphKind::TableOnly,
        GraphKind::TextOnly,
        GraphKind::TableToText,
        GraphKind::TextToTable,
        GraphKind::TextToText,
        GraphKind::Comparison,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::TableOnly => "table_only",
            GraphKind::TextOnly => "text_only",
            GraphKind::TableToText => "table_to_text",
            GraphKind::TextToTable => "text_to_table",
            GraphKind::TextToText => "text_to_text",
            GraphKind::Comparison => "comparison",
        }
    }

    /// Accepts `table_to_text` and `TABLE_TO_TEXT` spellings.
    pub fn parse(s: &str) -> Option<GraphKind> {
        let s = s.to_ascii_lowercase().replace('-', "_");
        GraphKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValueKind {
    Table,
    Text,
    Entity,
    EntitySet,
    Question,
    Sentence,
    QaPair,
}

/// Which passage an `InputText` node yields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    /// First passage of a pair.
    First,
    /// Second passage of a pair.
    Second,
    /// Each passage of a pair in turn.
    Each,
    /// Each passage linked from a table, in link order.
    Linked,
}

/// Modality of the first FindBridge argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Table,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", content = "params")]
pub enum Op {
    InputTable,
    InputText { slot: Slot },
    FindBridge { a: Side },
    SelectCell,
    SelectEntity,
    FlattenRow,
    QGwithEnt,
    QGwithAns,
    DescribeEnt,
    QuesToSent,
    BridgeBlend,
    FindComEnt,
    MatchProperty,
    CompBlend,
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::InputTable => "InputTable",
            Op::InputText { .. } => "InputText",
            Op::FindBridge { .. } => "FindBridge",
            Op::SelectCell => "SelectCell",
            Op::SelectEntity => "SelectEntity",
            Op::FlattenRow => "FlattenRow",
            Op::QGwithEnt => "QGwithEnt",
            Op::QGwithAns => "QGwithAns",
            Op::DescribeEnt => "DescribeEnt",
            Op::QuesToSent => "QuesToSent",
            Op::BridgeBlend => "BridgeBlend",
            Op::FindComEnt => "FindComEnt",
            Op::MatchProperty => "MatchProperty",
            Op::CompBlend => "CompBlend",
        }
    }

    pub fn inputs(&self) -> Vec<ValueKind> {
        use ValueKind::*;
        match self {
            Op::InputTable | Op::InputText { .. } => vec![],
            Op::FindBridge { a: Side::Table } => vec![Table, Text],
            Op::FindBridge { a: Side::Text } => vec![Text, Text],
            Op::SelectCell => vec![Table],
            Op::SelectEntity | Op::FindComEnt => vec![Text],
            Op::FlattenRow | Op::DescribeEnt => vec![Table, Entity],
            Op::QGwithEnt | Op::QGwithAns => vec![Text, Entity],
            Op::QuesToSent => vec![Question],
            Op::BridgeBlend => vec![Question, Sentence, Entity],
            Op::MatchProperty => vec![EntitySet, EntitySet],
            Op::CompBlend => vec![Text, Text, Entity, Entity, Question, Question],
        }
    }

    pub fn outputs(&self) -> Vec<ValueKind> {
        use ValueKind::*;
        match self {
            Op::InputTable => vec![Table],
            Op::InputText { .. } | Op::FlattenRow => vec![Text],
            Op::FindBridge { .. } | Op::SelectCell | Op::SelectEntity => vec![Entity],
            Op::QGwithEnt | Op::QGwithAns => vec![Question],
            Op::DescribeEnt | Op::QuesToSent => vec![Sentence],
            Op::BridgeBlend | Op::CompBlend => vec![QaPair],
            Op::FindComEnt => vec![EntitySet],
            Op::MatchProperty => vec![Entity, Entity],
        }
    }

    /// Whether the node needs a table context.
    pub fn needs_table(&self) -> bool {
        matches!(self, Op::InputTable | Op::InputText { slot: Slot::Linked })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    #[serde(flatten)]
    pub op: Op,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub port: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub from_port: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReasoningGraph {
    pub name: GraphKind,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateNode(String),
    UnknownNode { edge: usize, id: String },
    Cycle(Vec<String>),
    DanglingPort { node: String, port: usize },
    PortOutOfRange { node: String, port: usize },
    DuplicatePortEdge { node: String, port: usize },
    KindMismatch { from: String, to: String, port: usize, expected: ValueKind, found: ValueKind },
    NoSink,
    MultipleSinks(Vec<String>),
    BadSink { node: String, kind: ValueKind },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateNode(id) => write!(f, "duplicate node id {id}"),
            Violation::UnknownNode { edge, id } => write!(f, "edge {edge} references unknown node {id}"),
            Violation::Cycle(ids) => write!(f, "cycle: {}", ids.join(",")),
            Violation::DanglingPort { node, port } => write!(f, "dangling port: {node}[{port}]"),
            Violation::PortOutOfRange { node, port } => write!(f, "port out of range: {node}[{port}]"),
            Violation::DuplicatePortEdge { node, port } => write!(f, "port {node}[{port}] has several edges"),
            Violation::KindMismatch { from, to, port, expected, found } => {
                write!(f, "kind mismatch: {from} -> {to}[{port}] expects {expected:?}, got {found:?}")
            }
            Violation::NoSink => write!(f, "no sink node"),
            Violation::MultipleSinks(ids) => write!(f, "several sinks: {}", ids.join(",")),
            Violation::BadSink { node, kind } => write!(f, "sink {node} yields {kind:?}, not a question"),
        }
    }
}

impl ReasoningGraph {
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    fn index(&self) -> HashMap<&str, usize> {
        self.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect()
    }

    pub fn needs_table(&self) -> bool {
        self.nodes.iter().any(|n| n.op.needs_table())
    }

    /// Node indices in topological order, ties broken by declaration
    /// order. `Err` holds the nodes left on or behind a cycle.
    pub fn topo_order(&self) -> Result<Vec<usize>, Vec<usize>> {
        let idx = self.index();
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut succ = vec![Vec::new(); n];
        for e in &self.edges {
            if let (Some(&a), Some(&b)) = (idx.get(e.from.as_str()), idx.get(e.to.as_str())) {
                indeg[b] += 1;
                succ[a].push(b);
            }
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err((0..n).filter(|&i| indeg[i] > 0).collect())
        }
    }

    /// Every structural violation; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for n in &self.nodes {
            if !seen.insert(n.id.as_str()) {
                out.push(Violation::DuplicateNode(n.id.clone()));
            }
        }
        let idx = self.index();
        let mut fed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut has_out = vec![false; self.nodes.len()];
        for (k, e) in self.edges.iter().enumerate() {
            let (a, b) = match (idx.get(e.from.as_str()), idx.get(e.to.as_str())) {
                (Some(&a), Some(&b)) => (a, b),
                (a, _) => {
                    let id = if a.is_none() { &e.from } else { &e.to };
                    out.push(Violation::UnknownNode { edge: k, id: id.clone() });
                    continue;
                }
            };
            has_out[a] = true;
            let ins = self.nodes[b].op.inputs();
            let outs = self.nodes[a].op.outputs();
            if e.port >= ins.len() {
                out.push(Violation::PortOutOfRange { node: e.to.clone(), port: e.port });
                continue;
            }
            if e.from_port >= outs.len() {
                out.push(Violation::PortOutOfRange { node: e.from.clone(), port: e.from_port });
                continue;
            }
            *fed.entry((b, e.port)).or_default() += 1;
            if outs[e.from_port] != ins[e.port] {
                out.push(Violation::KindMismatch {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    port: e.port,
                    expected: ins[e.port],
                    found: outs[e.from_port],
                });
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for p in 0..n.op.inputs().len() {
                match fed.get(&(i, p)).copied().unwrap_or(0) {
                    0 => out.push(Violation::DanglingPort { node: n.id.clone(), port: p }),
                    1 => {}
                    _ => out.push(Violation::DuplicatePortEdge { node: n.id.clone(), port: p }),
                }
            }
        }
        if let Err(stuck) = self.topo_order() {
            out.push(Violation::Cycle(stuck.into_iter().map(|i| self.nodes[i].id.clone()).collect()));
        }
        let sinks: Vec<usize> = (0..self.nodes.len()).filter(|&i| !has_out[i]).collect();
        match sinks[..] {
            [] => out.push(Violation::NoSink),
            [s] => {
                let kinds = self.nodes[s].op.outputs();
                if kinds != [ValueKind::Question] && kinds != [ValueKind::QaPair] {
                    out.push(Violation::BadSink { node: self.nodes[s].id.clone(), kind: kinds[0] });
                }
            }
            _ => out.push(Violation::MultipleSinks(sinks.iter().map(|&i| self.nodes[i].id.clone()).collect())),
        }
        out
    }

    /// The unique sink of a valid graph.
    pub fn sink(&self) -> Option<usize> {
        let idx = self.index();
        let mut has_out = vec![false; self.nodes.len()];
        for e in &self.edges {
            if let Some(&a) = idx.get(e.from.as_str()) {
                has_out[a] = true;
            }
        }
        let sinks: Vec<usize> = (0..self.nodes.len()).filter(|&i| !has_out[i]).collect();
        (sinks.len() == 1).then(|| sinks[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(id: &str, op: Op) -> Node {
        Node { id: id.into(), op }
    }

    fn edge(from: &str, to: &str, port: usize) -> Edge {
        Edge { from: from.into(), to: to.into(), port, from_port: 0 }
    }

    #[test]
    fn kind_names() {
        for k in GraphKind::ALL {
            assert_eq!(GraphKind::parse(k.as_str()), Some(k));
            assert_eq!(GraphKind::parse(&k.as_str().to_uppercase()), Some(k));
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{k}\""));
        }
        assert_eq!(GraphKind::parse("table-to-text"), Some(GraphKind::TableToText));
        assert_eq!(GraphKind::parse("hybrid"), None);
    }

    #[test]
    fn node_json_shape() {
        let n = node("d", Op::InputText { slot: Slot::Linked });
        assert_eq!(
            serde_json::to_string(&n).unwrap(),
            r#"{"id":"d","op":"InputText","params":{"slot":"linked"}}"#
        );
        let unit: Node = serde_json::from_str(r#"{"id":"t","op":"InputTable"}"#).unwrap();
        assert_eq!(unit.op, Op::InputTable);
    }

    #[test]
    fn two_cycle_reported() {
        let g = ReasoningGraph {
            name: GraphKind::TextOnly,
            nodes: vec![node("A", Op::QuesToSent), node("B", Op::QuesToSent)],
            edges: vec![edge("A", "B", 0), edge("B", "A", 0)],
        };
        let v = g.validate();
        assert!(v.iter().any(|x| x.to_string() == "cycle: A,B"), "{v:?}");
    }

    #[test]
    fn sentence_into_table_port() {
        let g = ReasoningGraph {
            name: GraphKind::TableOnly,
            nodes: vec![
                node("d", Op::InputText { slot: Slot::First }),
                node("e", Op::SelectEntity),
                node("q", Op::QGwithAns),
                node("s", Op::QuesToSent),
                node("c", Op::SelectCell),
            ],
            edges: vec![edge("d", "e", 0), edge("d", "q", 0), edge("e", "q", 1), edge("q", "s", 0), edge("s", "c", 0)],
        };
        let v = g.validate();
        assert!(v.contains(&Violation::KindMismatch {
            from: "s".into(),
            to: "c".into(),
            port: 0,
            expected: ValueKind::Table,
            found: ValueKind::Sentence,
        }));
        // SelectCell yields an entity, which is not a question
        assert!(v.iter().any(|x| matches!(x, Violation::BadSink { .. })));
    }

    #[test]
    fn all_violations_reported() {
        let g = ReasoningGraph {
            name: GraphKind::TextOnly,
            nodes: vec![node("q", Op::QGwithAns), node("q", Op::QGwithAns), node("z", Op::QuesToSent)],
            edges: vec![edge("x", "q", 0), edge("z", "z", 0), edge("z", "z", 0), edge("q", "z", 5)],
        };
        let v = g.validate();
        assert!(v.contains(&Violation::DuplicateNode("q".into())));
        assert!(v.contains(&Violation::UnknownNode { edge: 0, id: "x".into() }));
        assert!(v.contains(&Violation::DuplicatePortEdge { node: "z".into(), port: 0 }));
        assert!(v.contains(&Violation::PortOutOfRange { node: "z".into(), port: 5 }));
        assert!(v.iter().any(|x| matches!(x, Violation::DanglingPort { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::Cycle(_))));
    }

    #[test]
    fn topo_order_prefers_declaration_order() {
        let g = builtin(GraphKind::TableToText);
        let order: Vec<&str> = g.topo_order().unwrap().into_iter().map(|i| g.nodes[i].id.as_str()).collect();
        let pos = |id: &str| order.iter().position(|x| *x == id).unwrap();
        for e in &g.edges {
            assert!(pos(&e.from) < pos(&e.to));
        }
    }
}

use super::{Edge, GraphKind, Node, Op, ReasoningGraph, Side, Slot};

fn n(id: &str, op: Op) -> Node {
    Node { id: id.into(), op }
}

fn e(from: &str, to: &str, port: usize) -> Edge {
    Edge { from: from.into(), to: to.into(), port, from_port: 0 }
}

fn e2(from: &str, from_port: usize, to: &str, port: usize) -> Edge {
    Edge { from: from.into(), to: to.into(), port, from_port }
}

/// The wiring of a builtin reasoning graph.
pub fn builtin(kind: GraphKind) -> ReasoningGraph {
    let (nodes, edges) = match kind {
        GraphKind::TableOnly => (
            vec![n("T", Op::InputTable), n("cell", Op::SelectCell), n("row", Op::FlattenRow), n("q", Op::QGwithAns)],
            vec![e("T", "cell", 0), e("T", "row", 0), e("cell", "row", 1), e("row", "q", 0), e("cell", "q", 1)],
        ),
        GraphKind::TextOnly => (
            vec![n("D", Op::InputText { slot: Slot::Each }), n("ent", Op::SelectEntity), n("q", Op::QGwithAns)],
            vec![e("D", "ent", 0), e("D", "q", 0), e("ent", "q", 1)],
        ),
        GraphKind::TableToText => (
            vec![
                n("T", Op::InputTable),
                n("D", Op::InputText { slot: Slot::Linked }),
                n("bridge", Op::FindBridge { a: Side::Table }),
                n("q_text", Op::QGwithEnt),
                n("describe", Op::DescribeEnt),
                n("blend", Op::BridgeBlend),
            ],
            vec![
                e("T", "bridge", 0),
                e("D", "bridge", 1),
                e("D", "q_text", 0),
                e("bridge", "q_text", 1),
                e("T", "describe", 0),
                e("bridge", "describe", 1),
                e("q_text", "blend", 0),
                e("describe", "blend", 1),
                e("bridge", "blend", 2),
            ],
        ),
        GraphKind::TextToTable => (
            vec![
                n("T", Op::InputTable),
                n("D", Op::InputText { slot: Slot::Linked }),
                n("bridge", Op::FindBridge { a: Side::Table }),
                n("row", Op::FlattenRow),
                n("q_table", Op::QGwithEnt),
                n("q_text", Op::QGwithAns),
                n("sent", Op::QuesToSent),
                n("blend", Op::BridgeBlend),
            ],
            vec![
                e("T", "bridge", 0),
                e("D", "bridge", 1),
                e("T", "row", 0),
                e("bridge", "row", 1),
                e("row", "q_table", 0),
                e("bridge", "q_table", 1),
                e("D", "q_text", 0),
                e("bridge", "q_text", 1),
                e("q_text", "sent", 0),
                e("q_table", "blend", 0),
                e("sent", "blend", 1),
                e("bridge", "blend", 2),
            ],
        ),
        GraphKind::TextToText => (
            vec![
                n("D1", Op::InputText { slot: Slot::First }),
                n("D2", Op::InputText { slot: Slot::Second }),
                n("bridge", Op::FindBridge { a: Side::Text }),
                n("q1", Op::QGwithEnt),
                n("q2", Op::QGwithAns),
                n("sent", Op::QuesToSent),
                n("blend", Op::BridgeBlend),
            ],
            vec![
                e("D1", "bridge", 0),
                e("D2", "bridge", 1),
                e("D1", "q1", 0),
                e("bridge", "q1", 1),
                e("D2", "q2", 0),
                e("bridge", "q2", 1),
                e("q2", "sent", 0),
                e("q1", "blend", 0),
                e("sent", "blend", 1),
                e("bridge", "blend", 2),
            ],
        ),
        GraphKind::Comparison => (
            vec![
                n("D1", Op::InputText { slot: Slot::First }),
                n("D2", Op::InputText { slot: Slot::Second }),
                n("com1", Op::FindComEnt),
                n("com2", Op::FindComEnt),
                n("match", Op::MatchProperty),
                n("q1", Op::QGwithAns),
                n("q2", Op::QGwithAns),
                n("blend", Op::CompBlend),
            ],
            vec![
                e("D1", "com1", 0),
                e("D2", "com2", 0),
                e("com1", "match", 0),
                e("com2", "match", 1),
                e("D1", "q1", 0),
                e2("match", 0, "q1", 1),
                e("D2", "q2", 0),
                e2("match", 1, "q2", 1),
                e("D1", "blend", 0),
                e("D2", "blend", 1),
                e2("match", 0, "blend", 2),
                e2("match", 1, "blend", 3),
                e("q1", "blend", 4),
                e("q2", "blend", 5),
            ],
        ),
    };
    ReasoningGraph { name: kind, nodes, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(kind: GraphKind) -> Vec<&'static str> {
        let mut v: Vec<_> = builtin(kind).nodes.iter().map(|n| n.op.name()).collect();
        v.sort();
        v
    }

    #[test]
    fn builtins_validate() {
        for k in GraphKind::ALL {
            let g = builtin(k);
            assert_eq!(g.validate(), vec![], "{k}");
            assert_eq!(g.name, k);
        }
    }

    #[test]
    fn table_to_text_operators() {
        let core: Vec<_> = ops(GraphKind::TableToText)
            .into_iter()
            .filter(|o| !o.starts_with("Input"))
            .collect();
        assert_eq!(core, vec!["BridgeBlend", "DescribeEnt", "FindBridge", "QGwithEnt"]);
    }

    #[test]
    fn comparison_has_two_com_ent() {
        assert_eq!(ops(GraphKind::Comparison).iter().filter(|o| **o == "FindComEnt").count(), 2);
    }

    #[test]
    fn single_hop_graphs_have_one_generator() {
        for k in [GraphKind::TextOnly, GraphKind::TableOnly] {
            let gens = ops(k).into_iter().filter(|o| o.starts_with("QG")).count();
            assert_eq!(gens, 1, "{k}");
        }
    }

    #[test]
    fn modality() {
        assert!(builtin(GraphKind::TableOnly).needs_table());
        assert!(builtin(GraphKind::TextToTable).needs_table());
        assert!(!builtin(GraphKind::TextToText).needs_table());
        assert!(!builtin(GraphKind::Comparison).needs_table());
    }

    #[test]
    fn json_round_trip() {
        for k in GraphKind::ALL {
            let g = builtin(k);
            assert_eq!(ReasoningGraph::from_json(&g.to_json()).unwrap(), g);
        }
    }
}

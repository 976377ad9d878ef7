use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::value::{CellRef, EntityValue, QaPair, Value};
use super::{builtin, GraphKind, Op, ReasoningGraph, Side, Slot, Violation};
use crate::backends::{Backend, BackendError, MASK};
use crate::corpus::{flatten_table_row, LinkedTableContext, Passage, PassagePair, Table};
use crate::dataset::{CandidateQA, ProvenanceStep};
use crate::hashing::digest;
use crate::nlp::{normalize_surface, EntityMention, EntityType, Nlp};
use crate::operators::{
    bridge_blend, comp_blend, describe_ent, eligible_mentions, find_bridge_table, find_bridge_text,
    find_com_ent, qg_with_ans, qg_with_ent, ques_to_sent, BridgeEntity, ComparativeEntity,
    ComparisonTemplates, Locus, OpError, Property, SingleHopQ, DEFAULT_RETRIES,
};

pub const DEFAULT_MAX_FANOUT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecConfig {
    /// Terminated branches explored per context and graph.
    pub max_fanout: usize,
    /// Attempts QGwithEnt makes per call.
    pub retries: u32,
}

impl Default for ExecConfig {
    fn default() -> Self {
        Self { max_fanout: DEFAULT_MAX_FANOUT, retries: DEFAULT_RETRIES }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum GraphInput<'a> {
    Table(&'a LinkedTableContext),
    Pair(&'a PassagePair),
}

impl GraphInput<'_> {
    fn describe(&self) -> &'static str {
        match self {
            GraphInput::Table(_) => "table context",
            GraphInput::Pair(_) => "passage pair",
        }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph {name}: {}", join(.violations))]
    InvalidGraph { name: GraphKind, violations: Vec<Violation> },
    #[error("graph {kind} cannot run on a {input}")]
    ModalityMismatch { kind: GraphKind, input: &'static str },
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Branch accounting for one or more executions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecReport {
    pub branches: usize,
    pub candidates: usize,
    pub dropped: BTreeMap<String, usize>,
}

impl ExecReport {
    pub fn merge(&mut self, other: &ExecReport) {
        self.branches += other.branches;
        self.candidates += other.candidates;
        for (k, v) in &other.dropped {
            *self.dropped.entry(k.clone()).or_default() += v;
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Execution {
    pub candidates: Vec<CandidateQA>,
    pub report: ExecReport,
}

fn drop_reason(e: &OpError) -> &'static str {
    match e {
        OpError::Backend(BackendError::Unavailable(_)) => "backend_unavailable",
        OpError::Backend(BackendError::Protocol(_)) => "backend_protocol",
        OpError::Backend(BackendError::Precondition(_)) => "backend_precondition",
        OpError::Backend(BackendError::Rejected { .. }) => "backend_rejected",
        OpError::Rejected(_) => "rejected",
        OpError::Unsupported(_) => "unsupported_question_form",
        OpError::Undecidable(_) => "undecidable",
        OpError::Precondition(_) => "precondition",
    }
}

type Outs = Vec<Arc<Value>>;

fn value_digest(v: &Value) -> String {
    digest(&serde_json::to_string(v).expect("values serialize"))
}

fn table(v: &Value) -> Result<&Table, OpError> {
    match v {
        Value::Table(t) => Ok(t),
        other => Err(OpError::Precondition(format!("expected TABLE, got {:?}", other.kind()))),
    }
}

fn text(v: &Value) -> Result<&Passage, OpError> {
    match v {
        Value::Text(p) => Ok(p),
        other => Err(OpError::Precondition(format!("expected TEXT, got {:?}", other.kind()))),
    }
}

fn entity(v: &Value) -> Result<&EntityValue, OpError> {
    match v {
        Value::Entity(e) => Ok(e),
        other => Err(OpError::Precondition(format!("expected ENTITY, got {:?}", other.kind()))),
    }
}

fn entity_set(v: &Value) -> Result<&[ComparativeEntity], OpError> {
    match v {
        Value::EntitySet(s) => Ok(s),
        other => Err(OpError::Precondition(format!("expected ENTITY_SET, got {:?}", other.kind()))),
    }
}

fn question(v: &Value) -> Result<&SingleHopQ, OpError> {
    match v {
        Value::Question(q) => Ok(q),
        other => Err(OpError::Precondition(format!("expected QUESTION, got {:?}", other.kind()))),
    }
}

fn sentence(v: &Value) -> Result<&str, OpError> {
    match v {
        Value::Sentence(s) => Ok(s),
        other => Err(OpError::Precondition(format!("expected SENTENCE, got {:?}", other.kind()))),
    }
}

fn cell_ref(t: &Table, b: &BridgeEntity) -> Option<CellRef> {
    let (row, col) = b.cell()?;
    Some(CellRef { header: t.headers.get(col)?.clone(), raw: t.cell(row, col)?.raw.clone() })
}

fn single(v: Value) -> Result<Vec<Outs>, OpError> {
    Ok(vec![vec![Arc::new(v)]])
}

fn fan(vs: impl IntoIterator<Item = Value>) -> Result<Vec<Outs>, OpError> {
    Ok(vs.into_iter().map(|v| vec![Arc::new(v)]).collect())
}

/// Runs reasoning graphs against a backend.
pub struct Engine {
    nlp: Arc<Nlp>,
    backend: Arc<dyn Backend>,
    templates: Arc<ComparisonTemplates>,
    config: ExecConfig,
}

impl Engine {
    pub fn new(nlp: Arc<Nlp>, backend: Arc<dyn Backend>) -> Self {
        Self { nlp, backend, templates: Arc::new(ComparisonTemplates::bundled()), config: ExecConfig::default() }
    }

    pub fn with_config(mut self, config: ExecConfig) -> Self {
        self.config = config;
        self
    }

    pub fn with_templates(mut self, templates: ComparisonTemplates) -> Self {
        self.templates = Arc::new(templates);
        self
    }

    pub fn config(&self) -> ExecConfig {
        self.config
    }

    /// Executes `g` over one context. Branches are explored depth-first
    /// in selection order until `max_fanout` of them have terminated.
    pub fn execute(&self, g: &ReasoningGraph, input: GraphInput<'_>) -> Result<Execution, GraphError> {
        let violations = g.validate();
        if !violations.is_empty() {
            return Err(GraphError::InvalidGraph { name: g.name, violations });
        }
        if g.needs_table() != matches!(input, GraphInput::Table(_)) {
            return Err(GraphError::ModalityMismatch { kind: g.name, input: input.describe() });
        }
        let order = g.topo_order().expect("validated graph is acyclic");
        let pos: BTreeMap<&str, usize> = g.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let mut preds: Vec<Vec<(usize, usize)>> =
            g.nodes.iter().map(|n| vec![(usize::MAX, 0); n.op.inputs().len()]).collect();
        for e in &g.edges {
            preds[pos[e.to.as_str()]][e.port] = (pos[e.from.as_str()], e.from_port);
        }
        let mut run = Run {
            engine: self,
            graph: g,
            input,
            order,
            preds,
            env: vec![None; g.nodes.len()],
            digests: vec![Vec::new(); g.nodes.len()],
            sink: g.sink().expect("validated graph has a sink"),
            out: Execution::default(),
            stop: false,
            fatal: None,
        };
        run.step(0);
        match run.fatal {
            Some(e) => Err(e),
            None => Ok(run.out),
        }
    }

    /// Runs every applicable builtin graph over the corpus: tables first,
    /// then pairs; within an item, in the order of `kinds`.
    pub fn generate_dataset(
        &self,
        kinds: &[GraphKind],
        tables: &[LinkedTableContext],
        pairs: &[PassagePair],
    ) -> Result<Execution, GraphError> {
        let graphs: Vec<ReasoningGraph> = kinds.iter().map(|&k| builtin(k)).collect();
        self.generate_with(&graphs, tables, pairs)
    }

    /// As [`Engine::generate_dataset`] with explicit graphs.
    pub fn generate_with(
        &self,
        graphs: &[ReasoningGraph],
        tables: &[LinkedTableContext],
        pairs: &[PassagePair],
    ) -> Result<Execution, GraphError> {
        let items: Vec<GraphInput<'_>> =
            tables.iter().map(GraphInput::Table).chain(pairs.iter().map(GraphInput::Pair)).collect();
        let per_item: Vec<Result<Execution, GraphError>> = items
            .par_iter()
            .map(|&input| {
                let mut acc = Execution::default();
                for g in graphs.iter().filter(|g| g.needs_table() == matches!(input, GraphInput::Table(_))) {
                    match self.execute(g, input) {
                        Ok(x) => {
                            acc.candidates.extend(x.candidates);
                            acc.report.merge(&x.report);
                        }
                        Err(e @ GraphError::BackendUnavailable(_)) => return Err(e),
                        Err(e) => log::warn!("skipping {} on {}: {e}", g.name, input.describe()),
                    }
                }
                Ok(acc)
            })
            .collect();
        let mut out = Execution::default();
        for r in per_item {
            let x = r?;
            out.candidates.extend(x.candidates);
            out.report.merge(&x.report);
        }
        Ok(out)
    }

    fn cell_entity(&self, t: &Table, row: usize, col: usize) -> Option<EntityValue> {
        let raw = &t.cell(row, col)?.raw;
        if raw.trim().is_empty() {
            return None;
        }
        let tagged = self.nlp.extract_entities(raw);
        let etype = match &tagged[..] {
            [m] if m.surface == raw.trim() => m.etype,
            _ => EntityType::Other,
        };
        Some(EntityValue {
            mention: EntityMention::new(raw, 0..raw.len(), etype, &t.id),
            loci: vec![Locus::Cell { table: t.id.clone(), row, col }],
            cell: Some(CellRef { header: t.headers[col].clone(), raw: raw.clone() }),
            property: None,
        })
    }

    fn run_op(&self, op: &Op, ins: &[Arc<Value>], input: GraphInput<'_>) -> Result<Vec<Outs>, OpError> {
        let backend = self.backend.as_ref();
        let nlp = self.nlp.as_ref();
        match op {
            Op::InputTable => match input {
                GraphInput::Table(c) => single(Value::Table(c.table.clone())),
                GraphInput::Pair(_) => Err(OpError::Precondition("no table in a passage pair".into())),
            },
            Op::InputText { slot } => {
                let ps: Vec<&Passage> = match (slot, input) {
                    (Slot::First, GraphInput::Pair(p)) => vec![&p.first],
                    (Slot::Second, GraphInput::Pair(p)) => vec![&p.second],
                    (Slot::Each, GraphInput::Pair(p)) => vec![&p.first, &p.second],
                    (Slot::Linked, GraphInput::Table(c)) => c.passages_in_link_order(),
                    _ => return Err(OpError::Precondition(format!("slot {slot:?} does not fit the input"))),
                };
                fan(ps.into_iter().map(|p| Value::Text(p.clone())))
            }
            Op::FindBridge { a } => {
                let d = text(&ins[1])?;
                let found: Vec<EntityValue> = match a {
                    Side::Table => {
                        let t = table(&ins[0])?;
                        find_bridge_table(t, d, nlp).iter().map(|b| EntityValue::from_bridge(b, cell_ref(t, b))).collect()
                    }
                    Side::Text => find_bridge_text(text(&ins[0])?, d, nlp)
                        .iter()
                        .map(|b| EntityValue::from_bridge(b, None))
                        .collect(),
                };
                fan(found.into_iter().map(Value::Entity))
            }
            Op::SelectCell => {
                let t = table(&ins[0])?;
                let cells = (0..t.rows.len())
                    .flat_map(|r| (0..t.headers.len()).map(move |c| (r, c)))
                    .filter_map(|(r, c)| self.cell_entity(t, r, c));
                fan(cells.map(Value::Entity))
            }
            Op::SelectEntity => {
                let d = text(&ins[0])?;
                fan(eligible_mentions(d, nlp).iter().map(|m| Value::Entity(EntityValue::from_mention(m))))
            }
            Op::FlattenRow => {
                let t = table(&ins[0])?;
                let Some(Locus::Cell { row, .. }) = entity(&ins[1])?.cell_locus() else {
                    return Err(OpError::Precondition("FlattenRow needs a table entity".into()));
                };
                let flat = flatten_table_row(t, *row)?;
                single(Value::Text(Passage::new(format!("{}#r{row}", t.id), t.title.clone(), flat)))
            }
            Op::QGwithEnt | Op::QGwithAns => {
                let d = text(&ins[0])?;
                let e = entity(&ins[1])?;
                let m = e
                    .anchor_in(d)
                    .ok_or_else(|| OpError::Precondition(format!("{:?} not found in {}", e.mention.surface, d.id)))?;
                let q = if *op == Op::QGwithEnt {
                    qg_with_ent(d, &m, backend, self.config.retries)?
                } else {
                    qg_with_ans(d, &m, backend)?
                };
                single(Value::Question(q))
            }
            Op::DescribeEnt => {
                let s = describe_ent(table(&ins[0])?, &entity(&ins[1])?.to_bridge(), backend)?;
                single(Value::Sentence(s))
            }
            Op::QuesToSent => single(Value::Sentence(ques_to_sent(question(&ins[0])?)?)),
            Op::BridgeBlend => {
                let q = question(&ins[0])?;
                let b = bridge_blend(q, sentence(&ins[1])?, &entity(&ins[2])?.to_bridge(), backend)?;
                single(Value::QaPair(QaPair { question: b.question, answer: q.answer.clone() }))
            }
            Op::FindComEnt => single(Value::EntitySet(find_com_ent(text(&ins[0])?, nlp))),
            Op::MatchProperty => {
                let (s1, s2) = (entity_set(&ins[0])?, entity_set(&ins[1])?);
                let first = |s: &[ComparativeEntity], p: Property| s.iter().find(|c| c.property == p).cloned();
                Ok(Property::ALL
                    .into_iter()
                    .filter_map(|p| Some((first(s1, p)?, first(s2, p)?)))
                    .map(|(x, y)| {
                        vec![
                            Arc::new(Value::Entity(EntityValue::from_comparative(&x))),
                            Arc::new(Value::Entity(EntityValue::from_comparative(&y))),
                        ]
                    })
                    .collect())
            }
            Op::CompBlend => {
                let (d1, d2) = (text(&ins[0])?, text(&ins[1])?);
                let (e1, e2) = (entity(&ins[2])?, entity(&ins[3])?);
                let (q1, q2) = (question(&ins[4])?, question(&ins[5])?);
                let prop = match (e1.property, e2.property) {
                    (Some(p), Some(p2)) if p == p2 => p,
                    _ => return Err(OpError::Precondition("CompBlend needs two entities of one property".into())),
                };
                let qas = comp_blend(prop, &d1.title, &d2.title, &q1.answer, &q2.answer, &self.templates)?;
                fan(qas.into_iter().map(|c| Value::QaPair(QaPair { question: c.question, answer: c.answer })))
            }
        }
    }
}

struct Run<'a> {
    engine: &'a Engine,
    graph: &'a ReasoningGraph,
    input: GraphInput<'a>,
    order: Vec<usize>,
    preds: Vec<Vec<(usize, usize)>>,
    env: Vec<Option<Outs>>,
    digests: Vec<Vec<String>>,
    sink: usize,
    out: Execution,
    stop: bool,
    fatal: Option<GraphError>,
}

impl Run<'_> {
    fn terminate(&mut self) {
        self.out.report.branches += 1;
        if self.out.report.branches >= self.engine.config.max_fanout {
            self.stop = true;
        }
    }

    fn drop_branch(&mut self, reason: &str) {
        *self.out.report.dropped.entry(reason.to_string()).or_default() += 1;
        self.terminate();
    }

    fn step(&mut self, k: usize) {
        if self.stop {
            return;
        }
        if k == self.order.len() {
            self.emit();
            return;
        }
        let i = self.order[k];
        let ins: Vec<Arc<Value>> = self.preds[i]
            .iter()
            .map(|&(n, p)| self.env[n].as_ref().expect("predecessor ran")[p].clone())
            .collect();
        match self.engine.run_op(&self.graph.nodes[i].op, &ins, self.input) {
            Ok(branches) => {
                for outs in branches {
                    if self.stop {
                        break;
                    }
                    self.digests[i] = outs.iter().map(|v| value_digest(v)).collect();
                    self.env[i] = Some(outs);
                    self.step(k + 1);
                }
                self.env[i] = None;
            }
            Err(OpError::Backend(BackendError::Unavailable(msg))) => {
                self.fatal = Some(GraphError::BackendUnavailable(msg));
                self.stop = true;
            }
            Err(e) => {
                log::debug!("{} {}: {e}", self.graph.name, self.graph.nodes[i].id);
                self.drop_branch(drop_reason(&e));
            }
        }
    }

    fn emit(&mut self) {
        let sink = self.env[self.sink].as_ref().expect("sink ran");
        let (q, a) = match sink[0].as_ref() {
            Value::QaPair(p) => (p.question.clone(), p.answer.clone()),
            Value::Question(q) => (q.question.clone(), q.answer.clone()),
            other => unreachable!("validated sink yields {:?}", other.kind()),
        };
        if q.trim().is_empty() || !q.ends_with('?') || q.contains(MASK) || normalize_surface(&a).is_empty() {
            self.drop_branch("malformed_candidate");
            return;
        }
        let mut sources = Vec::new();
        let mut provenance = Vec::with_capacity(self.order.len());
        for &i in &self.order {
            let node = &self.graph.nodes[i];
            if node.op.inputs().is_empty() {
                for v in self.env[i].iter().flatten() {
                    match v.as_ref() {
                        Value::Table(t) => sources.push(t.id.clone()),
                        Value::Text(p) => sources.push(p.id.clone()),
                        _ => {}
                    }
                }
            }
            let inputs = self.preds[i].iter().map(|&(n, p)| self.digests[n][p].clone()).collect();
            let output = match &self.digests[i][..] {
                [one] => one.clone(),
                many => digest(&many.join(",")),
            };
            provenance.push(ProvenanceStep { node: node.id.clone(), op: node.op.name().to_string(), inputs, output });
        }
        self.out.candidates.push(CandidateQA::new(self.graph.name, q, a, sources, provenance));
        self.out.report.candidates += 1;
        self.terminate();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::StubBackend;
    use crate::corpus::Cell;
    use crate::nlp::EntityType;

    fn engine() -> Engine {
        Engine::new(Nlp::bundled(), Arc::new(StubBackend::bundled(0)))
    }

    fn grand_prix() -> LinkedTableContext {
        let p1 = Passage::new(
            "p1",
            "Jenson Button",
            "Jenson Button (born 19 January 1980) is a British racing driver. Jenson Button joined Gals and Pals in 1963.",
        );
        LinkedTableContext {
            table: Table {
                id: "t1".into(),
                title: "2004 United States Grand Prix".into(),
                section_title: String::new(),
                headers: vec!["Pos".into(), "Driver".into()],
                rows: vec![
                    vec![Cell::new("3"), Cell::new("Rubens Barrichello")],
                    vec![Cell::new("4"), Cell::linked("Jenson Button", &["p1"])],
                ],
            },
            passages: [("p1".to_string(), p1)].into_iter().collect(),
        }
    }

    #[test]
    fn table_to_text_single_candidate() {
        let ctx = grand_prix();
        let x = engine().execute(&builtin(GraphKind::TableToText), GraphInput::Table(&ctx)).unwrap();
        assert_eq!(x.candidates.len(), 1);
        let c = &x.candidates[0];
        assert_eq!(c.question, "When was the person that Pos is 4 in 2004 United States Grand Prix born?");
        assert_eq!(c.answer, "19 January 1980");
        assert_eq!(c.sources, vec!["t1", "p1"]);
        assert_eq!(c.kind, GraphKind::TableToText);
        let nodes: Vec<&str> = c.provenance.iter().map(|s| s.node.as_str()).collect();
        assert_eq!(nodes.len(), 6);
        let mut sorted = nodes.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
    }

    #[test]
    fn text_to_table_answer_is_row_cell() {
        let ctx = grand_prix();
        let x = engine().execute(&builtin(GraphKind::TextToTable), GraphInput::Table(&ctx)).unwrap();
        assert_eq!(x.candidates.len(), 1);
        assert_eq!(
            x.candidates[0].question,
            "What is the Pos of the person that is a British racing driver in 2004 United States Grand Prix?"
        );
        assert_eq!(x.candidates[0].answer, "4");
    }

    #[test]
    fn provenance_digests_chain() {
        let ctx = grand_prix();
        let c = &engine().execute(&builtin(GraphKind::TableToText), GraphInput::Table(&ctx)).unwrap().candidates[0];
        let g = builtin(GraphKind::TableToText);
        let out: BTreeMap<&str, &str> = c.provenance.iter().map(|s| (s.node.as_str(), s.output.as_str())).collect();
        for s in &c.provenance {
            let froms: Vec<&str> = g
                .edges
                .iter()
                .filter(|e| e.to == s.node)
                .map(|e| (e.port, e.from.as_str()))
                .collect::<BTreeMap<_, _>>()
                .into_values()
                .collect();
            let expect: Vec<&str> = froms.iter().map(|f| out[f]).collect();
            assert_eq!(s.inputs, expect, "{}", s.node);
        }
    }

    #[test]
    fn zero_bridges_zero_candidates() {
        let mut ctx = grand_prix();
        ctx.passages.get_mut("p1").unwrap().text = "Nobody of note lived here.".into();
        let x = engine().execute(&builtin(GraphKind::TableToText), GraphInput::Table(&ctx)).unwrap();
        assert!(x.candidates.is_empty());
        assert_eq!(x.report.branches, 0);
    }

    #[test]
    fn fanout_cap_keeps_selection_order() {
        let pair = PassagePair {
            first: Passage::new("a", "A", "Arthur Lubin moved to Kerala in 1930 with Tom Jones."),
            second: Passage::new("b", "B", "Nothing."),
        };
        let full = engine().execute(&builtin(GraphKind::TextOnly), GraphInput::Pair(&pair)).unwrap();
        assert!(full.report.branches >= 3, "{:?}", full.report);
        let capped = engine()
            .with_config(ExecConfig { max_fanout: 2, ..ExecConfig::default() })
            .execute(&builtin(GraphKind::TextOnly), GraphInput::Pair(&pair))
            .unwrap();
        assert_eq!(capped.report.branches, 2);
        assert!(capped.candidates.len() <= 2);
        assert_eq!(capped.candidates[..], full.candidates[..capped.candidates.len()]);
    }

    #[test]
    fn modality_and_validity_checked() {
        let ctx = grand_prix();
        assert!(matches!(
            engine().execute(&builtin(GraphKind::TextToText), GraphInput::Table(&ctx)),
            Err(GraphError::ModalityMismatch { .. })
        ));
        let mut g = builtin(GraphKind::TableOnly);
        g.edges.pop();
        assert!(matches!(engine().execute(&g, GraphInput::Table(&ctx)), Err(GraphError::InvalidGraph { .. })));
    }

    struct Down;

    impl Backend for Down {
        fn gen_question_with_answer(&self, _: &str, _: &str) -> Result<String, BackendError> {
            Err(BackendError::Unavailable("down".into()))
        }
        fn gen_question_with_entity(&self, _: &str, _: &str) -> Result<(String, String), BackendError> {
            Err(BackendError::Unavailable("down".into()))
        }
        fn describe_entity(&self, _: &str, _: &str) -> Result<String, BackendError> {
            Err(BackendError::Unavailable("down".into()))
        }
        fn fill_mask(&self, _: &str, _: EntityType) -> Result<String, BackendError> {
            Err(BackendError::Unavailable("down".into()))
        }
        fn perplexity(&self, _: &str) -> Result<f64, BackendError> {
            Err(BackendError::Unavailable("down".into()))
        }
    }

    #[test]
    fn outage_aborts() {
        let ctx = grand_prix();
        let e = Engine::new(Nlp::bundled(), Arc::new(Down));
        assert!(matches!(
            e.execute(&builtin(GraphKind::TableToText), GraphInput::Table(&ctx)),
            Err(GraphError::BackendUnavailable(_))
        ));
        assert!(matches!(
            e.generate_dataset(&[GraphKind::TableOnly], &[ctx], &[]),
            Err(GraphError::BackendUnavailable(_))
        ));
    }

    #[test]
    fn dataset_order_and_empty_corpus() {
        let e = engine();
        assert!(e.generate_dataset(&[GraphKind::TextOnly], &[], &[]).unwrap().candidates.is_empty());
        let ctx = grand_prix();
        let x = e.generate_dataset(&[GraphKind::TableToText, GraphKind::TextToTable], &[ctx], &[]).unwrap();
        let kinds: Vec<GraphKind> = x.candidates.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![GraphKind::TableToText, GraphKind::TextToTable]);
    }
}

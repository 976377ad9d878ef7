use serde::Serialize;

use super::ValueKind;
use crate::corpus::{Passage, Table};
use crate::nlp::EntityMention;
use crate::operators::{BridgeEntity, ComparativeEntity, Locus, Property, SingleHopQ};

/// Header and raw value of the table cell an entity came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellRef {
    pub header: String,
    pub raw: String,
}

/// An entity flowing between nodes, with every place it was seen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntityValue {
    pub mention: EntityMention,
    pub loci: Vec<Locus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<CellRef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property: Option<Property>,
}

impl EntityValue {
    pub fn from_bridge(b: &BridgeEntity, cell: Option<CellRef>) -> Self {
        Self { mention: b.mention.clone(), loci: vec![b.locus_a.clone(), b.locus_b.clone()], cell, property: None }
    }

    pub fn from_mention(m: &EntityMention) -> Self {
        Self {
            mention: m.clone(),
            loci: vec![Locus::Span { passage: m.source.clone(), span: m.span.clone() }],
            cell: None,
            property: None,
        }
    }

    pub fn from_comparative(c: &ComparativeEntity) -> Self {
        Self { property: Some(c.property), ..Self::from_mention(&c.mention) }
    }

    pub fn cell_locus(&self) -> Option<&Locus> {
        self.loci.iter().find(|l| matches!(l, Locus::Cell { .. }))
    }

    /// The operator-level view, table side first.
    pub fn to_bridge(&self) -> BridgeEntity {
        let span = self.loci.iter().find(|l| matches!(l, Locus::Span { .. }));
        let a = self.cell_locus().or(span).or(self.loci.first()).cloned();
        let b = span.or(a.as_ref()).cloned();
        let fallback = Locus::Span { passage: self.mention.source.clone(), span: self.mention.span.clone() };
        BridgeEntity {
            mention: self.mention.clone(),
            locus_a: a.unwrap_or_else(|| fallback.clone()),
            locus_b: b.unwrap_or(fallback),
        }
    }

    /// This entity as a mention inside `d`: a recorded span there, else
    /// the "<header> is <raw>" fact of a flattened row, else the first
    /// exact occurrence of the surface.
    pub fn anchor_in(&self, d: &Passage) -> Option<EntityMention> {
        let etype = self.mention.etype;
        for l in &self.loci {
            if let Locus::Span { passage, span } = l {
                if *passage == d.id && d.text.get(span.clone()).is_some() {
                    return Some(EntityMention::new(&d.text, span.clone(), etype, &d.id));
                }
            }
        }
        if let Some(c) = &self.cell {
            let fact = format!("{} is {}", c.header, c.raw);
            if let Some(i) = d.text.find(&fact) {
                let s = i + c.header.len() + 4;
                return Some(EntityMention::new(&d.text, s..s + c.raw.len(), etype, &d.id));
            }
        }
        let s = d.text.find(&self.mention.surface)?;
        Some(EntityMention::new(&d.text, s..s + self.mention.surface.len(), etype, &d.id))
    }
}

/// A finished multi-hop pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QaPair {
    pub question: String,
    pub answer: String,
}

/// A value on a graph edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Value {
    Table(Table),
    Text(Passage),
    Entity(EntityValue),
    EntitySet(Vec<ComparativeEntity>),
    Question(SingleHopQ),
    Sentence(String),
    QaPair(QaPair),
}

impl Value {
    pub fn kind(&self) -> ValueKind {
        match self {
            Value::Table(_) => ValueKind::Table,
            Value::Text(_) => ValueKind::Text,
            Value::Entity(_) => ValueKind::Entity,
            Value::EntitySet(_) => ValueKind::EntitySet,
            Value::Question(_) => ValueKind::Question,
            Value::Sentence(_) => ValueKind::Sentence,
            Value::QaPair(_) => ValueKind::QaPair,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlp::EntityType;

    fn jenson() -> EntityValue {
        let text = "Jenson Button won.";
        EntityValue {
            mention: EntityMention::new(text, 0..13, EntityType::Person, "p1"),
            loci: vec![
                Locus::Cell { table: "t1".into(), row: 1, col: 1 },
                Locus::Span { passage: "p1".into(), span: 0..13 },
            ],
            cell: Some(CellRef { header: "Driver".into(), raw: "Jenson Button".into() }),
            property: None,
        }
    }

    #[test]
    fn anchors_by_recorded_span() {
        let d = Passage::new("p1", "x", "Jenson Button won.");
        let m = jenson().anchor_in(&d).unwrap();
        assert_eq!((m.span, m.source.as_str()), (0..13, "p1"));
    }

    #[test]
    fn anchors_in_flattened_row_by_header() {
        let d = Passage::new("t1#r1", "x", "GP ;  ; Teammate is Jenson Button ; Driver is Jenson Button .");
        let m = jenson().anchor_in(&d).unwrap();
        assert_eq!(m.span.start, d.text.rfind("Jenson").unwrap());
        assert_eq!(m.surface, "Jenson Button");
    }

    #[test]
    fn anchors_by_surface_or_fails() {
        let mut v = jenson();
        v.cell = None;
        let d = Passage::new("p9", "x", "Later, Jenson Button retired.");
        assert_eq!(v.anchor_in(&d).unwrap().span, 7..20);
        assert!(v.anchor_in(&Passage::new("p8", "x", "Nobody.")).is_none());
    }

    #[test]
    fn bridge_view_puts_cell_first() {
        let b = jenson().to_bridge();
        assert_eq!(b.cell(), Some((1, 1)));
        assert!(matches!(b.locus_b, Locus::Span { .. }));
    }
}

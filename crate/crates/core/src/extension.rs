//! Balancing a diagram with parallel copies of the 2-handle attaching curves.
//!
//! Copy `c` of color `j` runs on the left of every color-`j` edge at depth
//! `c`, passes through each handle next to the edge marker it shadows, and
//! goes under every original strand that crosses the edge.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{
    validate_diagram, Crossing, Endpoint, Event, HeegaardGraph, LinkDiagram, Passage, Role, Side, Sign, Strand,
    ValidationReport, VertexId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("coefficient vector has length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("input diagram is invalid: {0}")]
    Invalid(ValidationReport),
    #[error("synthesized id {0} collides with an existing id")]
    IdCollision(String),
    #[error("color {0} does not close into a cycle")]
    OpenColor(usize),
}

/// Strand-end counts at `V_i^+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VertexBalance {
    pub handle: usize,
    /// Strand ends arriving at `V_i^+`.
    pub forward: usize,
    /// Strand starts leaving `V_i^+`.
    pub backward: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BalanceReport {
    pub vertices: Vec<VertexBalance>,
}

impl BalanceReport {
    pub fn is_balanced(&self) -> bool {
        self.vertices.iter().all(|v| v.forward == v.backward)
    }
}

pub fn balance_report(graph: &HeegaardGraph, diagram: &LinkDiagram) -> BalanceReport {
    let mut vertices: Vec<VertexBalance> =
        (1..=graph.genus).map(|handle| VertexBalance { handle, ..Default::default() }).collect();
    for s in &diagram.strands {
        if s.end.vertex.side == Side::Plus {
            if let Some(v) = vertices.get_mut(s.end.vertex.handle - 1) {
                v.forward += 1;
            }
        }
        if s.start.vertex.side == Side::Plus {
            if let Some(v) = vertices.get_mut(s.start.vertex.handle - 1) {
                v.backward += 1;
            }
        }
    }
    BalanceReport { vertices }
}

pub fn is_balanced(graph: &HeegaardGraph, diagram: &LinkDiagram) -> bool {
    balance_report(graph, diagram).is_balanced()
}

/// One parallel copy of a 2-handle boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyRecord {
    pub color: usize,
    /// 1-based depth.
    pub copy: usize,
    /// Orientation relative to the characteristic curve, `-sign(x_j)`.
    pub orientation: Sign,
    /// Id of the component in the augmented diagram.
    pub component: String,
    /// Ids of the strands making up the copy, in order.
    pub strands: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExtensionPlan {
    pub x: Vec<i64>,
    pub copies: Vec<CopyRecord>,
}

impl ExtensionPlan {
    /// Number of extension components, `sum |x_j|`.
    pub fn k(&self) -> usize {
        self.x.iter().map(|v| v.unsigned_abs() as usize).sum()
    }

    pub fn copies_of(&self, color: usize) -> impl Iterator<Item = &CopyRecord> {
        self.copies.iter().filter(move |c| c.color == color)
    }

    pub fn is_extension_component(&self, id: &str) -> bool {
        self.copies.iter().any(|c| c.component == id)
    }
}

fn strand_id(j: usize, c: usize, l: usize) -> String {
    format!("E{j}_{c}_{l}")
}

fn crossing_id(j: usize, c: usize, l: usize, slot: usize) -> String {
    format!("x{j}_{c}_{l}_{slot}")
}

/// Insert `labels` into the cyclic order right after (or right before) `anchor`.
fn insert_next_to(order: &mut Vec<String>, anchor: &str, labels: Vec<String>, after: bool) {
    let pos = order.iter().position(|x| x == anchor).expect("anchor marker present");
    let at = if after { pos + 1 } else { pos };
    order.splice(at..at, labels);
}

pub fn synthesize_extension_link(
    graph: &HeegaardGraph,
    diagram: &LinkDiagram,
    x: &[i64],
) -> Result<(LinkDiagram, ExtensionPlan), ExtensionError> {
    if x.len() != graph.genus {
        return Err(ExtensionError::WrongLength { expected: graph.genus, found: x.len() });
    }
    let report = validate_diagram(graph, diagram);
    if !report.is_valid() {
        return Err(ExtensionError::Invalid(report));
    }

    let mut out = diagram.clone();
    let mut plan = ExtensionPlan { x: x.to_vec(), copies: Vec::new() };
    if x.iter().all(|v| *v == 0) {
        return Ok((out, plan));
    }

    let mut taken: BTreeSet<String> = BTreeSet::new();
    taken.extend(diagram.strands.iter().map(|s| s.id.clone()));
    taken.extend(diagram.circles.iter().map(|c| c.id.clone()));
    taken.extend(diagram.crossings.iter().map(|c| c.id.clone()));
    for v in graph.vertex_ids() {
        taken.extend(diagram.merged_order(graph, v));
    }
    let mut claim = |id: String| -> Result<String, ExtensionError> {
        if taken.insert(id.clone()) {
            Ok(id)
        } else {
            Err(ExtensionError::IdCollision(id))
        }
    };

    let mut orders: BTreeMap<VertexId, Vec<String>> = BTreeMap::new();
    for v in graph.vertex_ids() {
        orders.insert(v, diagram.merged_order(graph, v));
    }
    let transversals = diagram.edge_transversals();
    // (part, event index) -> crossings to splice in next to that transversal
    let mut splices: BTreeMap<(crate::model::PartRef, usize), Vec<String>> = BTreeMap::new();

    for (j, &xj) in x.iter().enumerate() {
        let color = j + 1;
        let k = xj.unsigned_abs() as usize;
        if k == 0 {
            continue;
        }
        let eps = Sign::from_value(-xj);
        let cycle = graph.color_cycle(color).ok_or(ExtensionError::OpenColor(color))?;

        // attachment labels next to every marker of the cycle
        for &e in &cycle {
            let edge = &graph.edges[e];
            let l = graph.ordinal(e);
            let tails =
                (1..=k).map(|c| claim(format!("{}t", strand_id(color, c, l)))).collect::<Result<Vec<_>, _>>()?;
            let heads =
                (1..=k).rev().map(|c| claim(format!("{}h", strand_id(color, c, l)))).collect::<Result<Vec<_>, _>>()?;
            insert_next_to(orders.get_mut(&edge.tail.vertex).expect("vertex"), &edge.tail.label, tails, true);
            insert_next_to(orders.get_mut(&edge.head.vertex).expect("vertex"), &edge.head.label, heads, false);
        }

        for c in 1..=k {
            let mut record =
                CopyRecord { color, copy: c, orientation: eps, component: String::new(), strands: Vec::new() };
            let n = cycle.len();
            for (pos, &e) in cycle.iter().enumerate() {
                let edge = &graph.edges[e];
                let l = graph.ordinal(e);
                let id = claim(strand_id(color, c, l))?;
                let tail = Endpoint::new(edge.tail.vertex, format!("{id}t"));
                let head = Endpoint::new(edge.head.vertex, format!("{id}h"));

                let mut hits: Vec<(usize, crate::model::PartRef, usize, Sign)> =
                    transversals.get(&edge.id).cloned().unwrap_or_default();
                if eps == Sign::Neg {
                    hits.reverse();
                }
                let mut events = Vec::with_capacity(hits.len());
                for (slot, part, idx, tau) in hits {
                    let xid = claim(crossing_id(color, c, l, slot))?;
                    out.crossings.push(Crossing::new(xid.clone(), tau.flip() * eps));
                    events.push(Event::Crossing { id: xid.clone(), role: Role::Under });
                    splices.entry((part, idx)).or_default().push(xid);
                }

                let (start, end) = match eps {
                    Sign::Pos => (tail, head),
                    Sign::Neg => (head, tail),
                };
                out.strands.push(Strand { id: id.clone(), start, events, end: end.clone() });

                // continue through the handle into the neighbouring edge's copy
                let next = match eps {
                    Sign::Pos => cycle[(pos + 1) % n],
                    Sign::Neg => cycle[(pos + n - 1) % n],
                };
                let next_id = strand_id(color, c, graph.ordinal(next));
                let next_edge = &graph.edges[next];
                let to = match eps {
                    Sign::Pos => Endpoint::new(next_edge.tail.vertex, format!("{next_id}t")),
                    Sign::Neg => Endpoint::new(next_edge.head.vertex, format!("{next_id}h")),
                };
                out.passages.push(Passage { from: end, to });
                record.strands.push(id);
            }
            if eps == Sign::Neg {
                // walk order follows the passages
                record.strands[1..].reverse();
            }
            record.component = record.strands[0].clone();
            plan.copies.push(record);
        }
    }

    // original strands go over the copies: after the transversal when they
    // cross the edge right to left, before it otherwise
    let mut per_part: BTreeMap<crate::model::PartRef, Vec<(usize, Vec<String>)>> = BTreeMap::new();
    for ((part, idx), ids) in splices {
        per_part.entry(part).or_default().push((idx, ids));
    }
    for (part, mut list) in per_part {
        list.sort_by_key(|(idx, _)| std::cmp::Reverse(*idx));
        let events = match part {
            crate::model::PartRef::Strand(k) => &mut out.strands[k].events,
            crate::model::PartRef::Circle(k) => &mut out.circles[k].events,
        };
        for (idx, mut ids) in list {
            let Event::Transversal { sign, .. } = events[idx].clone() else {
                unreachable!("splice index points at a transversal")
            };
            // ids are in copy order 1..k per color; colors never share an edge
            let at = match sign {
                Sign::Pos => idx + 1,
                Sign::Neg => {
                    ids.reverse();
                    idx
                }
            };
            let new: Vec<Event> = ids.into_iter().map(|id| Event::Crossing { id, role: Role::Over }).collect();
            events.splice(at..at, new);
        }
    }

    for (v, order) in orders {
        if order.len() != graph.markers(v).len() || out.vertex_orders.contains_key(&v) {
            out.vertex_orders.insert(v, order);
        }
    }
    out.normalize();
    Ok((out, plan))
}

//! Global realizability check for the locally encoded planar data.
//!
//! The graph, the strands and the crossing/transversal points form one fat
//! graph whose rotation system is fully determined by the cyclic orders at
//! fat vertices and crossings and by the transversal signs. Each connected
//! piece lies on the boundary sphere of the 0-handle iff `V - E + F = 2`.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{CrossingEnd, Endpoint, Event, HeegaardGraph, LinkDiagram, Role, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("dangling reference to {0}")]
    Dangling(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Leg {
    EdgeIn,
    EdgeOut,
    StrandIn,
    StrandOut,
}

#[derive(Default)]
struct Map {
    /// Per node: darts in counterclockwise order.
    nodes: Vec<Vec<usize>>,
    node_of: Vec<usize>,
    partner: Vec<Option<usize>>,
}

impl Map {
    fn add_node(&mut self, degree: usize) -> Vec<usize> {
        let node = self.nodes.len();
        let darts: Vec<usize> = (self.node_of.len()..self.node_of.len() + degree).collect();
        for _ in 0..degree {
            self.node_of.push(node);
            self.partner.push(None);
        }
        self.nodes.push(darts.clone());
        darts
    }

    fn join(&mut self, a: usize, b: usize) -> Result<(), EmbeddingError> {
        if self.partner[a].is_some() || self.partner[b].is_some() || a == b {
            return Err(EmbeddingError::Dangling(format!("dart {a} or {b} joined twice")));
        }
        self.partner[a] = Some(b);
        self.partner[b] = Some(a);
        Ok(())
    }

    /// Sum over connected pieces of their surface genus.
    fn genus(&self) -> Result<usize, EmbeddingError> {
        let n = self.node_of.len();
        let partner: Vec<usize> = self
            .partner
            .iter()
            .enumerate()
            .map(|(d, p)| p.ok_or_else(|| EmbeddingError::Dangling(format!("dart {d}"))))
            .collect::<Result<_, _>>()?;
        let mut next_ccw = vec![0; n];
        for darts in &self.nodes {
            for (k, &d) in darts.iter().enumerate() {
                next_ccw[d] = darts[(k + 1) % darts.len()];
            }
        }
        // components over nodes
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (d, &e) in partner.iter().enumerate() {
            let a = find(&mut parent, self.node_of[d]);
            let b = find(&mut parent, self.node_of[e]);
            parent[a] = b;
        }
        let mut euler: HashMap<usize, i64> = HashMap::new();
        for v in 0..self.nodes.len() {
            let r = find(&mut parent, v);
            *euler.entry(r).or_default() += 1;
        }
        for (d, &e) in partner.iter().enumerate() {
            if d < e {
                let r = find(&mut parent, self.node_of[d]);
                *euler.entry(r).or_default() -= 1;
            }
        }
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let r = find(&mut parent, self.node_of[start]);
            *euler.entry(r).or_default() += 1;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                d = next_ccw[partner[d]];
            }
        }
        Ok(euler.values().map(|chi| ((2 - chi) / 2) as usize).sum())
    }
}

/// Genus of the surface carrying the rotation system of graph plus diagram;
/// zero iff the data is realizable on the sphere.
pub fn embedding_genus(graph: &HeegaardGraph, diagram: &LinkDiagram) -> Result<usize, EmbeddingError> {
    let mut map = Map::default();
    let mut at_vertex: HashMap<Endpoint, usize> = HashMap::new();
    for v in graph.vertex_ids() {
        let order = diagram.merged_order(graph, v);
        let darts = map.add_node(order.len());
        for (label, d) in order.into_iter().zip(darts) {
            at_vertex.insert(Endpoint::new(v, label), d);
        }
    }
    let mut at_crossing: HashMap<(&str, CrossingEnd), usize> = HashMap::new();
    for c in &diagram.crossings {
        let darts = map.add_node(4);
        for (end, d) in c.order.iter().zip(darts) {
            at_crossing.insert((c.id.as_str(), *end), d);
        }
    }
    let mut at_transversal: HashMap<(&str, usize, Leg), usize> = HashMap::new();
    let mut slots_per_edge: HashMap<&str, Vec<usize>> = HashMap::new();
    for events in diagram.all_event_lists() {
        for ev in events {
            if let Event::Transversal { edge, slot, sign } = ev {
                let darts = map.add_node(4);
                let legs = match sign {
                    Sign::Pos => [Leg::EdgeOut, Leg::StrandOut, Leg::EdgeIn, Leg::StrandIn],
                    Sign::Neg => [Leg::EdgeOut, Leg::StrandIn, Leg::EdgeIn, Leg::StrandOut],
                };
                for (leg, d) in legs.iter().zip(darts) {
                    at_transversal.insert((edge.as_str(), *slot, *leg), d);
                }
                slots_per_edge.entry(edge.as_str()).or_default().push(*slot);
            }
        }
    }

    let dangling = |what: String| EmbeddingError::Dangling(what);
    let vertex_dart = |ep: &Endpoint| at_vertex.get(ep).copied().ok_or_else(|| dangling(ep.to_string()));

    for e in &graph.edges {
        let mut slots = slots_per_edge.get(e.id.as_str()).cloned().unwrap_or_default();
        slots.sort_unstable();
        let mut prev = vertex_dart(&e.tail)?;
        for s in slots {
            let key = |leg| at_transversal[&(e.id.as_str(), s, leg)];
            map.join(prev, key(Leg::EdgeIn))?;
            prev = key(Leg::EdgeOut);
        }
        map.join(prev, vertex_dart(&e.head)?)?;
    }

    let event_darts = |ev: &Event| -> Result<(usize, usize), EmbeddingError> {
        match ev {
            Event::Crossing { id, role } => {
                let (i, o) = match role {
                    Role::Over => (CrossingEnd::OverIn, CrossingEnd::OverOut),
                    Role::Under => (CrossingEnd::UnderIn, CrossingEnd::UnderOut),
                };
                let get = |end| at_crossing.get(&(id.as_str(), end)).copied().ok_or_else(|| dangling(id.clone()));
                Ok((get(i)?, get(o)?))
            }
            Event::Transversal { edge, slot, .. } => {
                let get = |leg| {
                    at_transversal.get(&(edge.as_str(), *slot, leg)).copied().ok_or_else(|| dangling(edge.clone()))
                };
                Ok((get(Leg::StrandIn)?, get(Leg::StrandOut)?))
            }
        }
    };

    for s in &diagram.strands {
        let mut prev = vertex_dart(&s.start)?;
        for ev in &s.events {
            let (i, o) = event_darts(ev)?;
            map.join(prev, i)?;
            prev = o;
        }
        map.join(prev, vertex_dart(&s.end)?)?;
    }
    for c in &diagram.circles {
        if c.events.is_empty() {
            let d = map.add_node(2);
            map.join(d[0], d[1])?;
            continue;
        }
        let darts: Vec<(usize, usize)> = c.events.iter().map(event_darts).collect::<Result<_, _>>()?;
        for k in 0..darts.len() {
            map.join(darts[k].1, darts[(k + 1) % darts.len()].0)?;
        }
    }
    map.genus()
}

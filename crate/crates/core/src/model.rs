//! Heegaard graphs and the link diagrams drawn over them.
//!
//! A [`HeegaardGraph`] is the planar fat graph left on the boundary of the
//! unique 0-handle: one pair of fat vertices `V_i^+`, `V_i^-` per 1-handle and
//! colored edges that chain, through the handles, into the attaching curves of
//! the 2-handles. A [`LinkDiagram`] is a tangle projection over such a graph.
//!
//! Planarity is stored locally: cyclic orders at fat vertices, slot orders
//! along edges and cyclic orders at crossings. Cyclic sequences are kept in
//! their lexicographically smallest rotation so that structural equality is
//! equality up to rotation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Which of the two attaching discs of a 1-handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }

    /// Contribution of a pass that enters the handle through this side.
    pub fn pass_value(self) -> i64 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }
}

/// A fat vertex `V_i^s`; `handle` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub handle: usize,
    pub side: Side,
}

impl VertexId {
    pub fn new(handle: usize, side: Side) -> Self {
        VertexId { handle, side }
    }

    pub fn mirror(self) -> Self {
        VertexId { handle: self.handle, side: self.side.opposite() }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.handle, self.side.symbol())
    }
}

/// A labelled point on the boundary circle of a fat vertex: an edge marker or
/// a strand attachment position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub vertex: VertexId,
    pub label: String,
}

impl Endpoint {
    pub fn new(vertex: VertexId, label: impl Into<String>) -> Self {
        Endpoint { vertex, label: label.into() }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.vertex, self.label)
    }
}

/// Orientation sign: crossing handedness, transversal sign, copy orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn from_value(v: i64) -> Sign {
        if v >= 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// Rotate a cyclic sequence so that it starts at its smallest element.
pub fn canonical_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    match seq.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)) {
        None => Vec::new(),
        Some((start, _)) => seq[start..].iter().chain(seq[..start].iter()).cloned().collect(),
    }
}

/// True if `a` and `b` are the same cyclic sequence.
pub fn cyclic_eq<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|shift| (0..a.len()).all(|k| a[(k + shift) % a.len()] == b[k]))
}

/// One piece `e_{j,l}` of the attaching curve of 2-handle `j`, oriented along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub color: usize,
    pub tail: Endpoint,
    pub head: Endpoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeegaardGraph {
    pub genus: usize,
    /// Counterclockwise marker sequence of every fat vertex.
    pub vertices: BTreeMap<VertexId, Vec<String>>,
    /// Per handle `i`: marker of `V_i^+` -> marker of `V_i^-`.
    pub reflection: BTreeMap<usize, BTreeMap<String, String>>,
    pub edges: Vec<Edge>,
}

/// Which end of an edge sits at a marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeEnd {
    Tail,
    Head,
}

impl HeegaardGraph {
    pub fn new(genus: usize) -> Self {
        HeegaardGraph { genus, ..Default::default() }
    }

    /// Put every cyclic sequence in canonical rotation.
    pub fn normalize(&mut self) {
        for markers in self.vertices.values_mut() {
            *markers = canonical_rotation(markers);
        }
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        let g = self.genus;
        (1..=g).flat_map(|i| [VertexId::new(i, Side::Plus), VertexId::new(i, Side::Minus)])
    }

    pub fn markers(&self, v: VertexId) -> &[String] {
        self.vertices.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Image of a marker under the reflection `V_i^s -> V_i^{-s}`.
    pub fn reflect(&self, v: VertexId, marker: &str) -> Option<&str> {
        let map = self.reflection.get(&v.handle)?;
        match v.side {
            Side::Plus => map.get(marker).map(String::as_str),
            Side::Minus => map.iter().find(|(_, m)| m.as_str() == marker).map(|(p, _)| p.as_str()),
        }
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// 1-based ordinal `l` of an edge among the edges of its color, in file order.
    pub fn ordinal(&self, edge: usize) -> usize {
        let color = self.edges[edge].color;
        self.edges[..edge].iter().filter(|e| e.color == color).count() + 1
    }

    /// Map from marker endpoint to the edge end sitting there.
    pub fn marker_owners(&self) -> HashMap<Endpoint, (usize, EdgeEnd)> {
        let mut owners = HashMap::new();
        for (k, e) in self.edges.iter().enumerate() {
            owners.insert(e.tail.clone(), (k, EdgeEnd::Tail));
            owners.insert(e.head.clone(), (k, EdgeEnd::Head));
        }
        owners
    }

    /// The edge that continues edge `k` after it passes through a handle.
    pub fn successor(&self, k: usize) -> Option<usize> {
        let head = &self.edges[k].head;
        let next_marker = self.reflect(head.vertex, &head.label)?;
        let target = Endpoint::new(head.vertex.mirror(), next_marker);
        self.edges.iter().position(|e| e.tail == target)
    }

    /// The closed cycle of edges of one color, starting at its first edge in
    /// file order. `None` if the color does not chain into a single cycle.
    pub fn color_cycle(&self, color: usize) -> Option<Vec<usize>> {
        let first = self.edges.iter().position(|e| e.color == color)?;
        let total = self.edges.iter().filter(|e| e.color == color).count();
        let mut cycle = vec![first];
        let mut cur = first;
        loop {
            let next = self.successor(cur)?;
            if self.edges[next].color != color {
                return None;
            }
            if next == first {
                break;
            }
            if cycle.contains(&next) || cycle.len() > total {
                return None;
            }
            cycle.push(next);
            cur = next;
        }
        (cycle.len() == total).then_some(cycle)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Over,
    Under,
}

/// Something a strand meets in the interior of the 0-handle boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Crossing {
        id: String,
        role: Role,
    },
    /// Transverse intersection with a graph edge. `sign` is `Pos` when the
    /// strand crosses from the right of the edge to its left.
    Transversal {
        edge: String,
        slot: usize,
        sign: Sign,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub id: String,
    pub start: Endpoint,
    pub events: Vec<Event>,
    pub end: Endpoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub id: String,
    pub events: Vec<Event>,
}

/// The four half-strands at a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CrossingEnd {
    OverIn,
    OverOut,
    UnderIn,
    UnderOut,
}

impl CrossingEnd {
    pub const ALL: [CrossingEnd; 4] =
        [CrossingEnd::OverIn, CrossingEnd::OverOut, CrossingEnd::UnderIn, CrossingEnd::UnderOut];

    pub fn role(self) -> Role {
        match self {
            CrossingEnd::OverIn | CrossingEnd::OverOut => Role::Over,
            CrossingEnd::UnderIn | CrossingEnd::UnderOut => Role::Under,
        }
    }

    pub fn is_incoming(self) -> bool {
        matches!(self, CrossingEnd::OverIn | CrossingEnd::UnderIn)
    }

    pub fn name(self) -> &'static str {
        match self {
            CrossingEnd::OverIn => "over-in",
            CrossingEnd::OverOut => "over-out",
            CrossingEnd::UnderIn => "under-in",
            CrossingEnd::UnderOut => "under-out",
        }
    }
}

/// Counterclockwise order of the four ends forced by the crossing sign.
/// A positive crossing has the under-strand pointing 90 degrees
/// counterclockwise from the over-strand.
pub fn crossing_order_for_sign(sign: Sign) -> [CrossingEnd; 4] {
    use CrossingEnd::*;
    let order = match sign {
        Sign::Pos => [OverOut, UnderOut, OverIn, UnderIn],
        Sign::Neg => [OverOut, UnderIn, OverIn, UnderOut],
    };
    let rot = canonical_rotation(&order);
    [rot[0], rot[1], rot[2], rot[3]]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub id: String,
    pub sign: Sign,
    pub order: [CrossingEnd; 4],
}

impl Crossing {
    pub fn new(id: impl Into<String>, sign: Sign) -> Self {
        Crossing { id: id.into(), sign, order: crossing_order_for_sign(sign) }
    }
}

/// The link running through a 1-handle: it leaves the 0-handle at the end of
/// one strand and comes back at the start of another, on the mirror vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Passage {
    pub from: Endpoint,
    pub to: Endpoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinkDiagram {
    /// Merged counterclockwise order of markers and attachment positions.
    /// Vertices without attachments may be omitted.
    pub vertex_orders: BTreeMap<VertexId, Vec<String>>,
    pub strands: Vec<Strand>,
    pub circles: Vec<Circle>,
    pub crossings: Vec<Crossing>,
    pub passages: Vec<Passage>,
}

impl LinkDiagram {
    pub fn normalize(&mut self) {
        for seq in self.vertex_orders.values_mut() {
            *seq = canonical_rotation(seq);
        }
        for c in &mut self.crossings {
            let rot = canonical_rotation(&c.order);
            c.order = [rot[0], rot[1], rot[2], rot[3]];
        }
    }

    pub fn is_empty(&self) -> bool {
        self.strands.is_empty() && self.circles.is_empty()
    }

    /// Merged order at `v`, falling back to the bare graph markers.
    pub fn merged_order(&self, graph: &HeegaardGraph, v: VertexId) -> Vec<String> {
        match self.vertex_orders.get(&v) {
            Some(seq) => seq.clone(),
            None => graph.markers(v).to_vec(),
        }
    }

    pub fn strand(&self, id: &str) -> Option<&Strand> {
        self.strands.iter().find(|s| s.id == id)
    }

    pub fn crossing(&self, id: &str) -> Option<&Crossing> {
        self.crossings.iter().find(|c| c.id == id)
    }

    /// Events of a component part, strands then circles.
    pub fn all_event_lists(&self) -> impl Iterator<Item = &Vec<Event>> {
        self.strands.iter().map(|s| &s.events).chain(self.circles.iter().map(|c| &c.events))
    }

    /// Per edge id: slots of the transversals recorded on strands and circles,
    /// sorted by slot, with the owning component part.
    pub fn edge_transversals(&self) -> BTreeMap<String, Vec<(usize, PartRef, usize, Sign)>> {
        let mut out: BTreeMap<String, Vec<(usize, PartRef, usize, Sign)>> = BTreeMap::new();
        for (part, events) in self.parts() {
            for (k, ev) in events.iter().enumerate() {
                if let Event::Transversal { edge, slot, sign } = ev {
                    out.entry(edge.clone()).or_default().push((*slot, part, k, *sign));
                }
            }
        }
        for list in out.values_mut() {
            list.sort_by_key(|t| t.0);
        }
        out
    }

    pub fn parts(&self) -> impl Iterator<Item = (PartRef, &Vec<Event>)> {
        self.strands
            .iter()
            .enumerate()
            .map(|(k, s)| (PartRef::Strand(k), &s.events))
            .chain(self.circles.iter().enumerate().map(|(k, c)| (PartRef::Circle(k), &c.events)))
    }

    pub fn events(&self, part: PartRef) -> &[Event] {
        match part {
            PartRef::Strand(k) => &self.strands[k].events,
            PartRef::Circle(k) => &self.circles[k].events,
        }
    }
}

/// Index of a strand or circle in a diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartRef {
    Strand(usize),
    Circle(usize),
}

/// A violated invariant.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Issue {
    #[error("vertex {0} is missing")]
    MissingVertex(VertexId),
    #[error("vertex {0} does not exist for genus {1}")]
    UnexpectedVertex(VertexId, usize),
    #[error("vertex {0} carries no edge marker")]
    BareVertex(VertexId),
    #[error("duplicate label {1} on vertex {0}")]
    DuplicateLabel(VertexId, String),
    #[error("reflection of handle {0} is not a bijection between {0}+ and {0}- markers: {1}")]
    ReflectionNotBijective(usize, String),
    #[error("reflection of handle {0} does not reverse the cyclic order")]
    ReflectionOrder(usize),
    #[error("marker {0} is not an endpoint of any edge")]
    UncoveredMarker(Endpoint),
    #[error("marker {0} is used by {1} edge ends")]
    OverusedMarker(Endpoint, usize),
    #[error("edge {0} references unknown marker {1}")]
    UnknownMarker(String, Endpoint),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("edge {0} has color {1} outside 1..={2}")]
    BadColor(String, usize, usize),
    #[error("color {0} has no edges")]
    EmptyColor(usize),
    #[error("edge {0}: continuation through the handle at {1} is not a tail of the same color")]
    BrokenChain(String, Endpoint),
    #[error("color {0} splits into {1} cycles")]
    SplitColor(usize, usize),
    #[error("vertex order at {0} does not contain the graph markers in their cyclic order")]
    MarkerOrder(VertexId),
    #[error("vertex orders at handle {0} are not reflection-consistent")]
    OrderReflection(usize),
    #[error("attachment {0} is not listed in its vertex order")]
    UnlistedAttachment(Endpoint),
    #[error("position {0} is listed but no strand is attached there")]
    UnusedPosition(Endpoint),
    #[error("position {0} carries {1} strand attachments")]
    SharedPosition(Endpoint, usize),
    #[error("duplicate component id {0}")]
    DuplicateComponent(String),
    #[error("passage violates reflection: {0} ~ {1}")]
    PassageReflection(Endpoint, Endpoint),
    #[error("passage {0} ~ {1} must run from a strand end to a strand start")]
    PassageDirection(Endpoint, Endpoint),
    #[error("attachment {0} is in {1} passages")]
    PassageCount(Endpoint, usize),
    #[error("event references unknown crossing {0}")]
    UnknownCrossing(String),
    #[error("crossing {0} needs exactly one over and one under incidence, found {1} over and {2} under")]
    CrossingIncidence(String, usize, usize),
    #[error("duplicate crossing id {0}")]
    DuplicateCrossing(String),
    #[error("crossing {0}: end order {1} does not match its sign")]
    CrossingOrder(String, String),
    #[error("event references unknown edge {0}")]
    UnknownEdge(String),
    #[error("edge {0}: transversal slots {1:?} are not 0..{2}")]
    SlotMismatch(String, Vec<usize>, usize),
    #[error("component walk failed: {0}")]
    OpenComponent(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, issue: Issue) {
        self.issues.push(issue);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (k, issue) in self.issues.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

pub fn validate_graph(graph: &HeegaardGraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let g = graph.genus;

    for v in graph.vertex_ids() {
        match graph.vertices.get(&v) {
            None => report.push(Issue::MissingVertex(v)),
            Some(markers) if markers.is_empty() => report.push(Issue::BareVertex(v)),
            Some(markers) => {
                let mut seen = BTreeSet::new();
                for m in markers {
                    if !seen.insert(m) {
                        report.push(Issue::DuplicateLabel(v, m.clone()));
                    }
                }
            }
        }
    }
    for v in graph.vertices.keys() {
        if v.handle == 0 || v.handle > g {
            report.push(Issue::UnexpectedVertex(*v, g));
        }
    }

    for i in 1..=g {
        let plus = graph.markers(VertexId::new(i, Side::Plus));
        let minus = graph.markers(VertexId::new(i, Side::Minus));
        let empty = BTreeMap::new();
        let map = graph.reflection.get(&i).unwrap_or(&empty);
        let domain: BTreeSet<&String> = map.keys().collect();
        let image: BTreeSet<&String> = map.values().collect();
        let plus_set: BTreeSet<&String> = plus.iter().collect();
        let minus_set: BTreeSet<&String> = minus.iter().collect();
        if domain != plus_set {
            report.push(Issue::ReflectionNotBijective(i, "domain differs from the + markers".into()));
            continue;
        }
        if image != minus_set || image.len() != domain.len() {
            report.push(Issue::ReflectionNotBijective(i, "image differs from the - markers".into()));
            continue;
        }
        let mut mapped: Vec<String> = plus.iter().map(|m| map[m].clone()).collect();
        mapped.reverse();
        if !cyclic_eq(&mapped, minus) {
            report.push(Issue::ReflectionOrder(i));
        }
    }

    let mut ids = BTreeSet::new();
    let mut uses: HashMap<Endpoint, usize> = HashMap::new();
    for e in &graph.edges {
        if !ids.insert(e.id.clone()) {
            report.push(Issue::DuplicateEdge(e.id.clone()));
        }
        if e.color == 0 || e.color > g {
            report.push(Issue::BadColor(e.id.clone(), e.color, g));
        }
        for end in [&e.tail, &e.head] {
            if !graph.markers(end.vertex).contains(&end.label) {
                report.push(Issue::UnknownMarker(e.id.clone(), end.clone()));
            }
            *uses.entry(end.clone()).or_default() += 1;
        }
    }
    for (v, markers) in &graph.vertices {
        for m in markers {
            let ep = Endpoint::new(*v, m.clone());
            match uses.get(&ep).copied().unwrap_or(0) {
                0 => report.push(Issue::UncoveredMarker(ep)),
                1 => {}
                n => report.push(Issue::OverusedMarker(ep, n)),
            }
        }
    }

    if !report.is_valid() {
        return report;
    }

    for color in 1..=g {
        if !graph.edges.iter().any(|e| e.color == color) {
            report.push(Issue::EmptyColor(color));
            continue;
        }
        let mut seen = vec![false; graph.edges.len()];
        let mut cycles = 0;
        let mut broken = false;
        for start in 0..graph.edges.len() {
            if graph.edges[start].color != color || seen[start] {
                continue;
            }
            cycles += 1;
            let mut cur = start;
            loop {
                seen[cur] = true;
                match graph.successor(cur) {
                    Some(next) if graph.edges[next].color == color => {
                        if next == start {
                            break;
                        }
                        if seen[next] {
                            broken = true;
                            break;
                        }
                        cur = next;
                    }
                    _ => {
                        let head = &graph.edges[cur].head;
                        let at = graph
                            .reflect(head.vertex, &head.label)
                            .map(|m| Endpoint::new(head.vertex.mirror(), m))
                            .unwrap_or_else(|| head.clone());
                        report.push(Issue::BrokenChain(graph.edges[cur].id.clone(), at));
                        broken = true;
                        break;
                    }
                }
            }
        }
        if !broken && cycles != 1 {
            report.push(Issue::SplitColor(color, cycles));
        }
    }
    report
}

/// Derived lookup tables for a diagram over a graph.
#[derive(Clone, Debug, Default)]
pub struct DiagramIndex {
    /// Attachment -> (strand index, true if it is the strand's end).
    pub attachments: HashMap<Endpoint, (usize, bool)>,
    /// Strand end attachment -> start attachment it continues into.
    pub passage_from: HashMap<Endpoint, Endpoint>,
    pub passage_to: HashMap<Endpoint, Endpoint>,
    /// Reflection extended to attachment positions (both directions).
    pub position_reflection: HashMap<Endpoint, Endpoint>,
}

impl DiagramIndex {
    pub fn build(graph: &HeegaardGraph, diagram: &LinkDiagram) -> Self {
        let mut idx = DiagramIndex::default();
        for (k, s) in diagram.strands.iter().enumerate() {
            idx.attachments.insert(s.start.clone(), (k, false));
            idx.attachments.insert(s.end.clone(), (k, true));
        }
        for p in &diagram.passages {
            idx.passage_from.insert(p.from.clone(), p.to.clone());
            idx.passage_to.insert(p.to.clone(), p.from.clone());
        }
        for i in 1..=graph.genus {
            if let Some(pairs) = extend_reflection(graph, diagram, i) {
                for (a, b) in pairs {
                    idx.position_reflection.insert(a.clone(), b.clone());
                    idx.position_reflection.insert(b, a);
                }
            }
        }
        idx
    }
}

/// Order-reversing bijection between the merged orders of `V_i^+` and
/// `V_i^-` that agrees with the graph reflection on markers.
fn extend_reflection(graph: &HeegaardGraph, diagram: &LinkDiagram, handle: usize) -> Option<Vec<(Endpoint, Endpoint)>> {
    let vp = VertexId::new(handle, Side::Plus);
    let vm = VertexId::new(handle, Side::Minus);
    let plus = diagram.merged_order(graph, vp);
    let minus = diagram.merged_order(graph, vm);
    if plus.len() != minus.len() || plus.is_empty() {
        return None;
    }
    let n = plus.len();
    let anchor = graph.markers(vp).first()?;
    let ap = plus.iter().position(|x| x == anchor)?;
    let target = graph.reflect(vp, anchor)?;
    let am = minus.iter().position(|x| x == target)?;
    let markers_plus: BTreeSet<&String> = graph.markers(vp).iter().collect();
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let a = &plus[(ap + k) % n];
        let b = &minus[(am + n - k) % n];
        if markers_plus.contains(a) {
            if graph.reflect(vp, a) != Some(b.as_str()) {
                return None;
            }
        } else if graph.markers(vm).contains(b) {
            return None;
        }
        pairs.push((Endpoint::new(vp, a.clone()), Endpoint::new(vm, b.clone())));
    }
    Some(pairs)
}

fn is_cyclic_subsequence(sub: &[String], seq: &[String]) -> bool {
    if sub.is_empty() {
        return true;
    }
    let filtered: Vec<&String> = seq.iter().filter(|x| sub.contains(x)).collect();
    if filtered.len() != sub.len() {
        return false;
    }
    let sub_refs: Vec<&String> = sub.iter().collect();
    cyclic_eq(&filtered, &sub_refs)
}

/// Check a diagram against the graph it is drawn over. The graph is assumed
/// to have passed [`validate_graph`].
pub fn validate_diagram(graph: &HeegaardGraph, diagram: &LinkDiagram) -> ValidationReport {
    let mut report = ValidationReport::default();

    // vertex orders
    for (v, seq) in &diagram.vertex_orders {
        if v.handle == 0 || v.handle > graph.genus {
            report.push(Issue::UnexpectedVertex(*v, graph.genus));
            continue;
        }
        let mut seen = BTreeSet::new();
        for x in seq {
            if !seen.insert(x) {
                report.push(Issue::DuplicateLabel(*v, x.clone()));
            }
        }
        if !is_cyclic_subsequence(graph.markers(*v), seq) {
            report.push(Issue::MarkerOrder(*v));
        }
    }

    // component ids
    let mut comp_ids = BTreeSet::new();
    for id in diagram.strands.iter().map(|s| &s.id).chain(diagram.circles.iter().map(|c| &c.id)) {
        if !comp_ids.insert(id) {
            report.push(Issue::DuplicateComponent(id.clone()));
        }
    }

    // attachments vs vertex orders
    let mut attach_count: HashMap<Endpoint, usize> = HashMap::new();
    for s in &diagram.strands {
        for a in [&s.start, &s.end] {
            *attach_count.entry(a.clone()).or_default() += 1;
            let listed = a.vertex.handle >= 1
                && a.vertex.handle <= graph.genus
                && diagram.merged_order(graph, a.vertex).contains(&a.label)
                && !graph.markers(a.vertex).contains(&a.label);
            if !listed {
                report.push(Issue::UnlistedAttachment(a.clone()));
            }
        }
    }
    for (ep, n) in &attach_count {
        if *n > 1 {
            report.push(Issue::SharedPosition(ep.clone(), *n));
        }
    }
    for (v, seq) in &diagram.vertex_orders {
        for x in seq {
            if graph.markers(*v).contains(x) {
                continue;
            }
            let ep = Endpoint::new(*v, x.clone());
            if !attach_count.contains_key(&ep) {
                report.push(Issue::UnusedPosition(ep));
            }
        }
    }

    // reflection consistency of merged orders
    let mut order_ok = true;
    for i in 1..=graph.genus {
        let vp = VertexId::new(i, Side::Plus);
        let vm = VertexId::new(i, Side::Minus);
        let touched = diagram.vertex_orders.contains_key(&vp) || diagram.vertex_orders.contains_key(&vm);
        if touched && extend_reflection(graph, diagram, i).is_none() {
            report.push(Issue::OrderReflection(i));
            order_ok = false;
        }
    }

    let index = DiagramIndex::build(graph, diagram);

    // passages
    let mut passage_uses: HashMap<Endpoint, usize> = HashMap::new();
    for p in &diagram.passages {
        *passage_uses.entry(p.from.clone()).or_default() += 1;
        *passage_uses.entry(p.to.clone()).or_default() += 1;
        let from_is_end = matches!(index.attachments.get(&p.from), Some((_, true)));
        let to_is_start = matches!(index.attachments.get(&p.to), Some((_, false)));
        if !from_is_end || !to_is_start {
            report.push(Issue::PassageDirection(p.from.clone(), p.to.clone()));
            continue;
        }
        let reflected = p.from.vertex.mirror() == p.to.vertex
            && (!order_ok || index.position_reflection.get(&p.from) == Some(&p.to));
        if !reflected {
            report.push(Issue::PassageReflection(p.from.clone(), p.to.clone()));
        }
    }
    for s in &diagram.strands {
        for a in [&s.start, &s.end] {
            let n = passage_uses.get(a).copied().unwrap_or(0);
            if n != 1 {
                report.push(Issue::PassageCount(a.clone(), n));
            }
        }
    }

    // crossings
    let mut crossing_ids = BTreeSet::new();
    for c in &diagram.crossings {
        if !crossing_ids.insert(c.id.clone()) {
            report.push(Issue::DuplicateCrossing(c.id.clone()));
        }
        let mut ends: Vec<CrossingEnd> = c.order.to_vec();
        ends.sort();
        if ends != CrossingEnd::ALL || !cyclic_eq(&c.order, &crossing_order_for_sign(c.sign)) {
            let text: Vec<&str> = c.order.iter().map(|e| e.name()).collect();
            report.push(Issue::CrossingOrder(c.id.clone(), text.join(",")));
        }
    }
    let mut incidences: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for events in diagram.all_event_lists() {
        for ev in events {
            match ev {
                Event::Crossing { id, role } => {
                    if !crossing_ids.contains(id) {
                        report.push(Issue::UnknownCrossing(id.clone()));
                        continue;
                    }
                    let entry = incidences.entry(id.as_str()).or_default();
                    match role {
                        Role::Over => entry.0 += 1,
                        Role::Under => entry.1 += 1,
                    }
                }
                Event::Transversal { edge, .. } => {
                    if graph.edge(edge).is_none() {
                        report.push(Issue::UnknownEdge(edge.clone()));
                    }
                }
            }
        }
    }
    for c in &diagram.crossings {
        let (o, u) = incidences.get(c.id.as_str()).copied().unwrap_or((0, 0));
        if o != 1 || u != 1 {
            report.push(Issue::CrossingIncidence(c.id.clone(), o, u));
        }
    }

    // edge-side slot lists must agree with the strand-side events
    for (edge, list) in diagram.edge_transversals() {
        if graph.edge(&edge).is_none() {
            continue;
        }
        let slots: Vec<usize> = list.iter().map(|t| t.0).collect();
        if slots.iter().enumerate().any(|(k, s)| *s != k) {
            report.push(Issue::SlotMismatch(edge.clone(), slots.clone(), slots.len()));
        }
    }

    if report.is_valid() {
        if let Err(e) = component_walk_indexed(diagram, &index) {
            report.push(Issue::OpenComponent(e.to_string()));
        }
    }
    report
}

/// A closed component of the link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    Circle(usize),
    /// Strand indices in order; consecutive strands (cyclically) are joined
    /// by a passage through a handle.
    Strands(Vec<usize>),
}

impl Component {
    /// Identifier: the circle id or the id of the first strand.
    pub fn id<'a>(&self, diagram: &'a LinkDiagram) -> &'a str {
        match self {
            Component::Circle(k) => &diagram.circles[*k].id,
            Component::Strands(s) => &diagram.strands[s[0]].id,
        }
    }

    pub fn parts(&self) -> Vec<PartRef> {
        match self {
            Component::Circle(k) => vec![PartRef::Circle(*k)],
            Component::Strands(s) => s.iter().map(|k| PartRef::Strand(*k)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("attachment {0} has no passage")]
    Dangling(Endpoint),
    #[error("passage into {0} does not land on a strand start")]
    BadTarget(Endpoint),
}

/// Close every strand into its link component by following passages.
pub fn component_walk(graph: &HeegaardGraph, diagram: &LinkDiagram) -> Result<Vec<Component>, WalkError> {
    let index = DiagramIndex::build(graph, diagram);
    component_walk_indexed(diagram, &index)
}

fn component_walk_indexed(diagram: &LinkDiagram, index: &DiagramIndex) -> Result<Vec<Component>, WalkError> {
    let mut out = Vec::new();
    let mut seen = vec![false; diagram.strands.len()];
    for start in 0..diagram.strands.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        loop {
            seen[cur] = true;
            cycle.push(cur);
            let end = &diagram.strands[cur].end;
            let to = index.passage_from.get(end).ok_or_else(|| WalkError::Dangling(end.clone()))?;
            let next = match index.attachments.get(to) {
                Some((k, false)) => *k,
                _ => return Err(WalkError::BadTarget(to.clone())),
            };
            if next == start {
                break;
            }
            if seen[next] {
                return Err(WalkError::BadTarget(to.clone()));
            }
            cur = next;
        }
        out.push(Component::Strands(cycle));
    }
    out.extend((0..diagram.circles.len()).map(Component::Circle));
    Ok(out)
}

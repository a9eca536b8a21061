//! The generalized Seifert algorithm.
//!
//! Crossings are smoothed in the oriented way. Strand ends in each fat vertex
//! are then joined by non-crossing chords, mirrored on the partner vertex, and
//! the resulting closed curves bound discs in the 0-handle. Pairing bands run
//! through the 1-handles and half-twisted bands restore the crossings.
//! Extension components are capped by discs parallel to the 2-handle cores.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::extension::{is_balanced, synthesize_extension_link, ExtensionError, ExtensionPlan};
use crate::homology::{link_class, relator_matrix, solve_extension_coefficients, HomologyError};
use crate::model::{
    component_walk, validate_diagram, CrossingEnd, DiagramIndex, Endpoint, Event, HeegaardGraph, LinkDiagram, PartRef,
    Role, Side, Sign, ValidationReport, VertexId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("vertex {vertex} is unbalanced: {forward} forward ends, {backward} backward ends")]
    UnbalancedVertex { vertex: VertexId, forward: usize, backward: usize },
    #[error("open chain at {0}: the curve system does not close")]
    OpenChain(String),
    #[error("diagram is invalid: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

/// Non-crossing perfect matching of a cyclic `+`/`-` sequence by repeatedly
/// pairing adjacent opposite signs. Pairs are `(plus index, minus index)`.
pub fn match_cyclic(signs: &[Sign]) -> Option<Vec<(usize, usize)>> {
    let mut stack: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for (k, s) in signs.iter().enumerate() {
        match stack.last() {
            Some(&top) if signs[top] != *s => {
                stack.pop();
                pairs.push(if *s == Sign::Pos { (k, top) } else { (top, k) });
            }
            _ => stack.push(k),
        }
    }
    stack.is_empty().then_some(pairs)
}

/// A chord inside a fat vertex from a strand end to a strand start.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chord {
    pub end: Endpoint,
    pub start: Endpoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairingMatching {
    pub chords: BTreeMap<VertexId, Vec<Chord>>,
}

impl PairingMatching {
    /// Number of chords on the `V^+` vertices, one pairing band each.
    pub fn band_count(&self) -> usize {
        self.chords.iter().filter(|(v, _)| v.side == Side::Plus).map(|(_, c)| c.len()).sum()
    }
}

pub fn pairing_matching(graph: &HeegaardGraph, diagram: &LinkDiagram) -> Result<PairingMatching, SeifertError> {
    let index = DiagramIndex::build(graph, diagram);
    let mut matching = PairingMatching::default();
    for i in 1..=graph.genus {
        let vp = VertexId::new(i, Side::Plus);
        let mut attached: Vec<(String, Sign)> = diagram
            .merged_order(graph, vp)
            .into_iter()
            .filter_map(|label| {
                let ep = Endpoint::new(vp, label.clone());
                index.attachments.get(&ep).map(|(_, is_end)| (label, if *is_end { Sign::Pos } else { Sign::Neg }))
            })
            .collect();
        if attached.is_empty() {
            continue;
        }
        let first = attached.iter().enumerate().min_by(|a, b| a.1 .0.cmp(&b.1 .0)).map(|(k, _)| k).unwrap_or(0);
        attached.rotate_left(first);
        let signs: Vec<Sign> = attached.iter().map(|a| a.1).collect();
        let Some(pairs) = match_cyclic(&signs) else {
            let forward = signs.iter().filter(|s| **s == Sign::Pos).count();
            return Err(SeifertError::UnbalancedVertex { vertex: vp, forward, backward: signs.len() - forward });
        };
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (e, s) in pairs {
            let end = Endpoint::new(vp, attached[e].0.clone());
            let start = Endpoint::new(vp, attached[s].0.clone());
            let missing = |ep: &Endpoint| SeifertError::OpenChain(ep.to_string());
            let mirror_start = index.passage_from.get(&end).cloned().ok_or_else(|| missing(&end))?;
            let mirror_end = index.passage_to.get(&start).cloned().ok_or_else(|| missing(&start))?;
            minus.push(Chord { end: mirror_end, start: mirror_start });
            plus.push(Chord { end, start });
        }
        matching.chords.insert(vp, plus);
        matching.chords.insert(vp.mirror(), minus);
    }
    Ok(matching)
}

/// Where a segment of the resolved system starts or stops.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegmentEnd {
    Attachment(Endpoint),
    Port(String, CrossingEnd),
    /// A circle without crossings closes on itself.
    Closed,
}

/// A piece of a strand or circle between consecutive crossings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub part: PartRef,
    pub start: SegmentEnd,
    pub end: SegmentEnd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedCrossing {
    pub id: String,
    pub sign: Sign,
    /// Segments joined by the smoothing: (over-in, under-out) and (under-in, over-out).
    pub joins: [(usize, usize); 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResolvedSystem {
    pub segments: Vec<Segment>,
    pub crossings: Vec<ResolvedCrossing>,
    /// Segment following each segment across a smoothed crossing or a closed circle.
    pub next: HashMap<usize, usize>,
}

fn ports(role: Role) -> (CrossingEnd, CrossingEnd) {
    match role {
        Role::Over => (CrossingEnd::OverIn, CrossingEnd::OverOut),
        Role::Under => (CrossingEnd::UnderIn, CrossingEnd::UnderOut),
    }
}

pub fn resolve_crossings(diagram: &LinkDiagram) -> Result<ResolvedSystem, SeifertError> {
    let mut sys = ResolvedSystem::default();
    for (part, events) in diagram.parts() {
        let cuts: Vec<(String, Role)> = events
            .iter()
            .filter_map(|ev| match ev {
                Event::Crossing { id, role } => Some((id.clone(), *role)),
                Event::Transversal { .. } => None,
            })
            .collect();
        match part {
            PartRef::Strand(k) => {
                let s = &diagram.strands[k];
                let mut start = SegmentEnd::Attachment(s.start.clone());
                for (id, role) in &cuts {
                    let (i, o) = ports(*role);
                    sys.segments.push(Segment { part, start, end: SegmentEnd::Port(id.clone(), i) });
                    start = SegmentEnd::Port(id.clone(), o);
                }
                sys.segments.push(Segment { part, start, end: SegmentEnd::Attachment(s.end.clone()) });
            }
            PartRef::Circle(_) => {
                if cuts.is_empty() {
                    let k = sys.segments.len();
                    sys.segments.push(Segment { part, start: SegmentEnd::Closed, end: SegmentEnd::Closed });
                    sys.next.insert(k, k);
                    continue;
                }
                let m = cuts.len();
                for c in 0..m {
                    let (id0, role0) = &cuts[c];
                    let (id1, role1) = &cuts[(c + 1) % m];
                    sys.segments.push(Segment {
                        part,
                        start: SegmentEnd::Port(id0.clone(), ports(*role0).1),
                        end: SegmentEnd::Port(id1.clone(), ports(*role1).0),
                    });
                }
            }
        }
    }
    let starts: HashMap<&SegmentEnd, usize> = sys.segments.iter().enumerate().map(|(k, s)| (&s.start, k)).collect();
    let ends: HashMap<&SegmentEnd, usize> = sys.segments.iter().enumerate().map(|(k, s)| (&s.end, k)).collect();
    let mut next = Vec::new();
    for c in &diagram.crossings {
        let find = |map: &HashMap<&SegmentEnd, usize>, end| {
            let key = SegmentEnd::Port(c.id.clone(), end);
            map.get(&key).copied().ok_or_else(|| SeifertError::OpenChain(format!("crossing {} {}", c.id, end.name())))
        };
        let a = (find(&ends, CrossingEnd::OverIn)?, find(&starts, CrossingEnd::UnderOut)?);
        let b = (find(&ends, CrossingEnd::UnderIn)?, find(&starts, CrossingEnd::OverOut)?);
        next.push(a);
        next.push(b);
        sys.crossings.push(ResolvedCrossing { id: c.id.clone(), sign: c.sign, joins: [a, b] });
    }
    sys.next.extend(next);
    Ok(sys)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeifertCircles {
    /// Segment indices of each circle, in traversal order.
    pub circles: Vec<Vec<usize>>,
    pub circle_of: Vec<usize>,
}

impl SeifertCircles {
    pub fn count(&self) -> usize {
        self.circles.len()
    }
}

/// Close the resolved curves with the chords of the matching.
pub fn count_seifert_circles(sys: &ResolvedSystem, matching: &PairingMatching) -> Result<SeifertCircles, SeifertError> {
    let mut next = sys.next.clone();
    let starts: HashMap<&SegmentEnd, usize> = sys.segments.iter().enumerate().map(|(k, s)| (&s.start, k)).collect();
    let ends: HashMap<&SegmentEnd, usize> = sys.segments.iter().enumerate().map(|(k, s)| (&s.end, k)).collect();
    for chords in matching.chords.values() {
        for ch in chords {
            let open = |ep: &Endpoint| SeifertError::OpenChain(ep.to_string());
            let a = *ends.get(&SegmentEnd::Attachment(ch.end.clone())).ok_or_else(|| open(&ch.end))?;
            let b = *starts.get(&SegmentEnd::Attachment(ch.start.clone())).ok_or_else(|| open(&ch.start))?;
            next.insert(a, b);
        }
    }
    let n = sys.segments.len();
    let mut circle_of = vec![usize::MAX; n];
    let mut circles = Vec::new();
    for s in 0..n {
        if circle_of[s] != usize::MAX {
            continue;
        }
        let id = circles.len();
        let mut members = Vec::new();
        let mut cur = s;
        loop {
            if circle_of[cur] != usize::MAX {
                if cur == s {
                    break;
                }
                return Err(SeifertError::OpenChain(format!("segment {cur} reached twice")));
            }
            circle_of[cur] = id;
            members.push(cur);
            cur = *next.get(&cur).ok_or_else(|| SeifertError::OpenChain(format!("{:?}", sys.segments[cur].end)))?;
        }
        circles.push(members);
    }
    Ok(SeifertCircles { circles, circle_of })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BandKind {
    /// Rectangular band through handle `handle` spanning a chord and its mirror.
    Pairing { handle: usize, chord: Chord },
    /// Half-twisted band at a smoothed crossing.
    Twist { crossing: String, handedness: Sign },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    pub kind: BandKind,
    pub circles: (usize, usize),
}

/// Disc capping an extension component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cap {
    pub component: String,
    pub circles: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpanningSurface {
    pub h0: usize,
    pub h1_pairing: usize,
    pub h1_twist: usize,
    pub h2: usize,
    pub chi: i64,
    /// Components of the original link.
    pub boundary: usize,
    pub genus: usize,
    /// Connected components of the surface.
    pub components: usize,
    pub x: Vec<i64>,
    /// Circle index -> ids of the link components running along it.
    pub circles: Vec<Vec<String>>,
    pub bands: Vec<Band>,
    pub caps: Vec<Cap>,
}

impl SpanningSurface {
    pub fn h1(&self) -> usize {
        self.h1_pairing + self.h1_twist
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

pub fn assemble_surface(
    graph: &HeegaardGraph,
    diagram: &LinkDiagram,
    plan: &ExtensionPlan,
    matching: &PairingMatching,
) -> Result<SpanningSurface, SeifertError> {
    let sys = resolve_crossings(diagram)?;
    let circles = count_seifert_circles(&sys, matching)?;
    let components = component_walk(graph, diagram).map_err(|e| SeifertError::OpenChain(e.to_string()))?;

    let mut component_of_part: HashMap<PartRef, usize> = HashMap::new();
    for (k, c) in components.iter().enumerate() {
        for p in c.parts() {
            component_of_part.insert(p, k);
        }
    }
    let circle_of_attachment = |ep: &Endpoint, as_end: bool| -> Result<usize, SeifertError> {
        let key = SegmentEnd::Attachment(ep.clone());
        sys.segments
            .iter()
            .position(|s| if as_end { s.end == key } else { s.start == key })
            .map(|k| circles.circle_of[k])
            .ok_or_else(|| SeifertError::OpenChain(ep.to_string()))
    };

    let mut bands = Vec::new();
    for (v, chords) in &matching.chords {
        if v.side != Side::Plus {
            continue;
        }
        let mirror = &matching.chords[&v.mirror()];
        for (ch, m) in chords.iter().zip(mirror) {
            let a = circle_of_attachment(&ch.end, true)?;
            let b = circle_of_attachment(&m.end, true)?;
            bands.push(Band { kind: BandKind::Pairing { handle: v.handle, chord: ch.clone() }, circles: (a, b) });
        }
    }
    for rc in &sys.crossings {
        let a = circles.circle_of[rc.joins[0].0];
        let b = circles.circle_of[rc.joins[1].0];
        bands.push(Band { kind: BandKind::Twist { crossing: rc.id.clone(), handedness: rc.sign }, circles: (a, b) });
    }

    let mut circle_components: Vec<BTreeSet<String>> = vec![BTreeSet::new(); circles.count()];
    for (k, seg) in sys.segments.iter().enumerate() {
        let comp = &components[component_of_part[&seg.part]];
        circle_components[circles.circle_of[k]].insert(comp.id(diagram).to_string());
    }

    let mut caps = Vec::new();
    for copy in &plan.copies {
        let cs: BTreeSet<usize> = sys
            .segments
            .iter()
            .enumerate()
            .filter(|(_, s)| components[component_of_part[&s.part]].id(diagram) == copy.component)
            .map(|(k, _)| circles.circle_of[k])
            .collect();
        caps.push(Cap { component: copy.component.clone(), circles: cs.into_iter().collect() });
    }

    // surface components: circles joined by bands and caps
    let n = circles.count();
    let mut parent: Vec<usize> = (0..n).collect();
    for b in &bands {
        let (x, y) = (find(&mut parent, b.circles.0), find(&mut parent, b.circles.1));
        parent[x] = y;
    }
    for c in &caps {
        for w in c.circles.windows(2) {
            let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[x] = y;
        }
    }
    let mut chi_of: BTreeMap<usize, i64> = BTreeMap::new();
    for c in 0..n {
        *chi_of.entry(find(&mut parent, c)).or_default() += 1;
    }
    for b in &bands {
        *chi_of.entry(find(&mut parent, b.circles.0)).or_default() -= 1;
    }
    for c in &caps {
        if let Some(first) = c.circles.first() {
            *chi_of.entry(find(&mut parent, *first)).or_default() += 1;
        }
    }
    let mut mu_of: BTreeMap<usize, i64> = BTreeMap::new();
    let mut boundary = 0usize;
    for comp in &components {
        let id = comp.id(diagram);
        if plan.is_extension_component(id) {
            continue;
        }
        boundary += 1;
        let first_seg = sys
            .segments
            .iter()
            .position(|s| comp.parts().contains(&s.part))
            .ok_or_else(|| SeifertError::OpenChain(id.to_string()))?;
        *mu_of.entry(find(&mut parent, circles.circle_of[first_seg])).or_default() += 1;
    }
    let mut genus = 0usize;
    for (root, chi) in &chi_of {
        let twice = 2 - chi - mu_of.get(root).copied().unwrap_or(0);
        if twice < 0 || twice % 2 != 0 {
            return Err(SeifertError::OpenChain(format!("surface piece with chi {chi} is not orientable")));
        }
        genus += (twice / 2) as usize;
    }

    let h1_pairing = matching.band_count();
    let h1_twist = sys.crossings.len();
    let h2 = plan.k();
    Ok(SpanningSurface {
        h0: n,
        h1_pairing,
        h1_twist,
        h2,
        chi: n as i64 - (h1_pairing + h1_twist) as i64 + h2 as i64,
        boundary,
        genus,
        components: chi_of.len(),
        x: plan.x.clone(),
        circles: circle_components.into_iter().map(|s| s.into_iter().collect()).collect(),
        bands,
        caps,
    })
}

/// Everything the pipeline produced for one input diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertRun {
    pub class: Vec<i64>,
    pub augmented: LinkDiagram,
    pub plan: ExtensionPlan,
    pub matching: PairingMatching,
    pub surface: SpanningSurface,
}

/// Balance the diagram with its extension link and build the spanning surface.
pub fn generalized_seifert(graph: &HeegaardGraph, diagram: &LinkDiagram) -> Result<SeifertRun, SeifertError> {
    let report = validate_diagram(graph, diagram);
    if !report.is_valid() {
        return Err(SeifertError::Invalid(report));
    }
    let class = link_class(graph, diagram);
    let x = solve_extension_coefficients(&relator_matrix(graph), &class)?;
    let (augmented, plan) = synthesize_extension_link(graph, diagram, &x)?;
    debug_assert!(is_balanced(graph, &augmented));
    let matching = pairing_matching(graph, &augmented)?;
    let surface = assemble_surface(graph, &augmented, &plan, &matching)?;
    Ok(SeifertRun { class, augmented, plan, matching, surface })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Circle, Crossing};

    fn chords_interleave(a: (usize, usize), b: (usize, usize)) -> bool {
        let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
        let inside = |x: usize| a0 < x && x < a1;
        inside(b.0) != inside(b.1)
    }

    #[test]
    fn single_pair_gives_one_chord() {
        assert_eq!(match_cyclic(&[Sign::Pos, Sign::Neg]), Some(vec![(0, 1)]));
    }

    #[test]
    fn nested_pairs() {
        use Sign::*;
        let mut pairs = match_cyclic(&[Pos, Pos, Neg, Neg]).unwrap();
        pairs.sort();
        // 1-based chords (2,3) and (1,4)
        assert_eq!(pairs, vec![(0, 3), (1, 2)]);
        assert!(!chords_interleave(pairs[0], pairs[1]));
    }

    #[test]
    fn unbalanced_sequence_has_no_matching() {
        use Sign::*;
        assert_eq!(match_cyclic(&[Pos, Pos, Pos, Neg]), None);
    }

    fn kink(sign: Sign) -> LinkDiagram {
        let mut d = LinkDiagram::default();
        d.crossings.push(Crossing::new("x", sign));
        d.circles.push(Circle {
            id: "k".into(),
            events: vec![
                Event::Crossing { id: "x".into(), role: Role::Over },
                Event::Crossing { id: "x".into(), role: Role::Under },
            ],
        });
        d
    }

    #[test]
    fn kink_resolves_into_two_circles() {
        let sys = resolve_crossings(&kink(Sign::Pos)).unwrap();
        let circles = count_seifert_circles(&sys, &PairingMatching::default()).unwrap();
        assert_eq!(circles.count(), 2);
    }

    #[test]
    fn crossing_free_circle_is_one_seifert_circle() {
        let mut d = LinkDiagram::default();
        d.circles.push(Circle { id: "o".into(), events: vec![] });
        let g = HeegaardGraph::new(0);
        let run = generalized_seifert(&g, &d).unwrap();
        assert_eq!((run.surface.h0, run.surface.h1(), run.surface.h2), (1, 0, 0));
        assert_eq!((run.surface.chi, run.surface.boundary, run.surface.genus), (1, 1, 0));
    }

    #[test]
    fn kink_bounds_a_disc() {
        let g = HeegaardGraph::new(0);
        let run = generalized_seifert(&g, &kink(Sign::Neg)).unwrap();
        assert_eq!((run.surface.h0, run.surface.h1_twist, run.surface.chi, run.surface.genus), (2, 1, 1, 0));
    }

    #[test]
    fn empty_diagram_gives_empty_surface() {
        let g = HeegaardGraph::new(0);
        let run = generalized_seifert(&g, &LinkDiagram::default()).unwrap();
        assert_eq!(run.surface, SpanningSurface::default());
    }
}

//! Deterministic SVG pictures of a graph with an optional diagram on top.
//!
//! Fat vertices sit on a circle with each `V_i^+` next to its `V_i^-`,
//! markers evenly spaced counterclockwise. Crossings have no geometry of
//! their own, so they are spread on an inner circle. The picture shows the
//! combinatorics only and makes no attempt to avoid clutter.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::model::{Endpoint, Event, HeegaardGraph, LinkDiagram, PartRef, Role, VertexId};
use crate::seifert::SeifertCircles;

const SIZE: f64 = 800.0;
const VERTEX_RADIUS: f64 = 36.0;
const STUB: f64 = 24.0;
const GAP: f64 = 9.0;

const EDGE_COLORS: [&str; 8] = ["#d95f02", "#1b1b1b", "#1f78b4", "#33a02c", "#e7298a", "#6a3d9a", "#b15928", "#a6761d"];
const CIRCLE_COLORS: [&str; 12] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999", "#66c2a5", "#fc8d62",
    "#8da0cb", "#e78ac3",
];

type Pt = (f64, f64);

fn lerp(a: Pt, b: Pt, t: f64) -> Pt {
    (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t)
}

fn dist(a: Pt, b: Pt) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Move `from` toward `to` by `d`, stopping halfway at most.
fn toward(from: Pt, to: Pt, d: f64) -> Pt {
    let len = dist(from, to);
    if len == 0.0 {
        return from;
    }
    lerp(from, to, (d / len).min(0.5))
}

fn polyline(points: &[Pt]) -> String {
    points.iter().map(|p| format!("{:.2},{:.2}", p.0, p.1)).collect::<Vec<_>>().join(" ")
}

/// Point at fraction `t` of the length of a polyline.
fn along(points: &[Pt], t: f64) -> Pt {
    let total: f64 = points.windows(2).map(|w| dist(w[0], w[1])).sum();
    let mut left = total * t;
    for w in points.windows(2) {
        let d = dist(w[0], w[1]);
        if left <= d && d > 0.0 {
            return lerp(w[0], w[1], left / d);
        }
        left -= d;
    }
    *points.last().expect("non-empty polyline")
}

struct Layout {
    center: Pt,
    vertex_center: HashMap<VertexId, Pt>,
    attach: HashMap<Endpoint, (Pt, Pt)>,
    edge_path: Vec<Vec<Pt>>,
    crossing: HashMap<String, Pt>,
}

impl Layout {
    fn new(graph: &HeegaardGraph, diagram: &LinkDiagram) -> Layout {
        let center = (SIZE / 2.0, SIZE / 2.0);
        let ids: Vec<VertexId> = graph.vertex_ids().collect();
        let ring = SIZE * 0.36;
        let mut vertex_center = HashMap::new();
        let mut attach = HashMap::new();
        for (k, v) in ids.iter().enumerate() {
            let a = 2.0 * PI * k as f64 / ids.len().max(1) as f64 - PI / 2.0;
            let c = (center.0 + ring * a.cos(), center.1 + ring * a.sin());
            vertex_center.insert(*v, c);
            let order = diagram.merged_order(graph, *v);
            for (j, label) in order.iter().enumerate() {
                // screen y points down, so counterclockwise means decreasing angle
                let b = a - 2.0 * PI * j as f64 / order.len() as f64;
                let p = (c.0 + VERTEX_RADIUS * b.cos(), c.1 + VERTEX_RADIUS * b.sin());
                let q = (c.0 + (VERTEX_RADIUS + STUB) * b.cos(), c.1 + (VERTEX_RADIUS + STUB) * b.sin());
                attach.insert(Endpoint::new(*v, label.clone()), (p, q));
            }
        }
        let edge_path = graph
            .edges
            .iter()
            .map(|e| {
                let (p, ps) = attach[&e.tail];
                let (q, qs) = attach[&e.head];
                let mid = lerp(lerp(ps, qs, 0.5), center, 0.35);
                vec![p, ps, mid, qs, q]
            })
            .collect();
        let mut crossing = HashMap::new();
        let n = diagram.crossings.len();
        let inner = if ids.is_empty() { SIZE * 0.3 } else { ring * 0.45 };
        for (k, c) in diagram.crossings.iter().enumerate() {
            let a = 2.0 * PI * k as f64 / n.max(1) as f64 + PI / 7.0;
            crossing.insert(c.id.clone(), (center.0 + inner * a.cos(), center.1 + inner * a.sin()));
        }
        Layout { center, vertex_center, attach, edge_path, crossing }
    }
}

/// Waypoints of one part, split at crossings into the same pieces as the
/// segments of `resolve_crossings`. Under-passes leave a gap.
fn pieces(graph: &HeegaardGraph, diagram: &LinkDiagram, layout: &Layout, part: PartRef) -> Vec<Vec<Pt>> {
    let mut transversal_at: HashMap<(String, usize), Pt> = HashMap::new();
    for (edge, list) in diagram.edge_transversals() {
        let path = &layout.edge_path[graph.edge_index(&edge).expect("validated edge")];
        let n = list.len();
        for (i, (slot, ..)) in list.into_iter().enumerate() {
            transversal_at.insert((edge.clone(), slot), along(path, (i + 1) as f64 / (n + 1) as f64));
        }
    }
    let mut points: Vec<Pt> = Vec::new();
    let mut cuts: Vec<(usize, bool)> = Vec::new();
    if let PartRef::Strand(k) = part {
        let (p, q) = layout.attach[&diagram.strands[k].start];
        points.extend([p, q]);
    }
    for ev in diagram.events(part) {
        match ev {
            Event::Transversal { edge, slot, .. } => points.push(transversal_at[&(edge.clone(), *slot)]),
            Event::Crossing { id, role } => {
                cuts.push((points.len(), *role == Role::Under));
                points.push(layout.crossing[id]);
            }
        }
    }
    let closed = matches!(part, PartRef::Circle(_));
    if let PartRef::Strand(k) = part {
        let (p, q) = layout.attach[&diagram.strands[k].end];
        points.extend([q, p]);
    }
    let n = points.len();
    // inclusive; wraps around, all the way when `from == to`
    let take = |from: usize, to: usize| -> Vec<Pt> {
        let mut v = vec![points[from]];
        let mut i = from;
        loop {
            i = (i + 1) % n;
            v.push(points[i]);
            if i == to {
                return v;
            }
        }
    };
    let mut out: Vec<(Vec<Pt>, bool, bool)> = Vec::new();
    if closed {
        if cuts.is_empty() {
            let mut v = points.clone();
            v.push(points[0]);
            return vec![v];
        }
        for c in 0..cuts.len() {
            let (a, ua) = cuts[c];
            let (b, ub) = cuts[(c + 1) % cuts.len()];
            out.push((take(a, b), ua, ub));
        }
    } else {
        let mut prev = (0, false);
        for &cut in &cuts {
            out.push((take(prev.0, cut.0), prev.1, cut.1));
            prev = cut;
        }
        out.push((take(prev.0, n - 1), prev.1, false));
    }
    out.into_iter()
        .map(|(mut v, gap_start, gap_end)| {
            if gap_start && v.len() > 1 {
                v[0] = toward(v[0], v[1], GAP);
            }
            let m = v.len();
            if gap_end && m > 1 {
                v[m - 1] = toward(v[m - 1], v[m - 2], GAP);
            }
            v
        })
        .collect()
}

fn part_id(diagram: &LinkDiagram, part: PartRef) -> &str {
    match part {
        PartRef::Strand(k) => &diagram.strands[k].id,
        PartRef::Circle(k) => &diagram.circles[k].id,
    }
}

/// Render a graph with an optional diagram over it. The overlay colors the
/// diagram by Seifert circle (segments in the order of `resolve_crossings`).
pub fn render_svg(graph: &HeegaardGraph, diagram: Option<&LinkDiagram>, overlay: Option<&SeifertCircles>) -> String {
    let empty = LinkDiagram::default();
    let diagram = diagram.unwrap_or(&empty);
    let layout = Layout::new(graph, diagram);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    for (k, e) in graph.edges.iter().enumerate() {
        let color = EDGE_COLORS[(e.color - 1) % EDGE_COLORS.len()];
        writeln!(
            out,
            r#"<polyline class="edge" data-id="{}" data-color="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            e.id,
            e.color,
            polyline(&layout.edge_path[k])
        )
        .unwrap();
    }
    for v in graph.vertex_ids() {
        let c = layout.vertex_center[&v];
        writeln!(
            out,
            r##"<circle class="fat-vertex" data-id="{v}" cx="{:.2}" cy="{:.2}" r="{VERTEX_RADIUS}" fill="#f4f4f4" stroke="#444"/>"##,
            c.0, c.1
        )
        .unwrap();
        writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{v}</text>"#, c.0, c.1 + 5.0)
            .unwrap();
    }
    let mut markers: Vec<(&Endpoint, &(Pt, Pt))> = layout.attach.iter().collect();
    markers.sort_by(|a, b| a.0.cmp(b.0));
    for (ep, (p, _)) in markers {
        writeln!(
            out,
            r#"<circle class="marker" data-id="{ep}" cx="{:.2}" cy="{:.2}" r="2.5" fill="black"/>"#,
            p.0, p.1
        )
        .unwrap();
    }

    let mut segment = 0usize;
    let parts: Vec<PartRef> = diagram.parts().map(|(p, _)| p).collect();
    for part in parts {
        let id = part_id(diagram, part);
        let is_closed_empty = matches!(part, PartRef::Circle(k) if diagram.circles[k].events.is_empty());
        if is_closed_empty {
            let (color, tag) = seifert_style(overlay, segment);
            writeln!(
                out,
                r#"<circle class="component" data-id="{id}"{tag} cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="{color}" stroke-width="2.5"/>"#,
                layout.center.0,
                layout.center.1,
                SIZE * 0.12
            )
            .unwrap();
            segment += 1;
            continue;
        }
        for piece in pieces(graph, diagram, &layout, part) {
            let (color, tag) = seifert_style(overlay, segment);
            writeln!(
                out,
                r#"<polyline class="component" data-id="{id}"{tag} points="{}" fill="none" stroke="{color}" stroke-width="2.5"/>"#,
                polyline(&piece)
            )
            .unwrap();
            segment += 1;
        }
    }

    let mut colors: Vec<usize> = graph.edges.iter().map(|e| e.color).collect();
    colors.sort_unstable();
    colors.dedup();
    for (k, c) in colors.iter().enumerate() {
        let y = 20.0 + 18.0 * k as f64;
        let color = EDGE_COLORS[(c - 1) % EDGE_COLORS.len()];
        writeln!(out, r#"<line x1="12" y1="{y}" x2="36" y2="{y}" stroke="{color}" stroke-width="3"/>"#).unwrap();
        writeln!(out, r#"<text x="42" y="{:.1}" font-size="13">2-handle {c}</text>"#, y + 4.0).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn seifert_style(overlay: Option<&SeifertCircles>, segment: usize) -> (&'static str, String) {
    match overlay.and_then(|o| o.circle_of.get(segment)) {
        Some(&c) => (CIRCLE_COLORS[c % CIRCLE_COLORS.len()], format!(r#" data-seifert="{c}""#)),
        None => ("#222222", String::new()),
    }
}

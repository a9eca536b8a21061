//! Flat plat presentations and their Heegaard graphs.
//!
//! The plane carries `n` disjoint simple arcs whose endpoints (feet) sit on a
//! base line; `n` bridges above the plane join the feet in pairs. A bridge's
//! shadow is the segment between its feet, and an arc passing under a bridge
//! crosses that segment northward or southward. Away from the shadows the
//! arcs are free to wander; only the crossings with shadows are recorded.
//!
//! The genus-`n` handlebody above the plane splits along the unknotting discs
//! of the bridges (co-cores) into one 0-handle and `n` 1-handles. A curve in
//! the plane passes through 1-handle `b` each time it crosses the shadow of
//! `b`; running over a bridge along its tube does not meet the co-core.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::model::{Edge, Endpoint, HeegaardGraph, Side, Sign, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bridge {
    /// 1-based.
    pub index: usize,
    /// Feet positions on the base line, left then right.
    pub feet: (i64, i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnderPass {
    pub bridge: usize,
    /// Crossing sign with respect to the component orientations.
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatArc {
    pub id: String,
    pub from: i64,
    pub to: i64,
    pub unders: Vec<UnderPass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlatPlat {
    pub bridges: Vec<Bridge>,
    pub arcs: Vec<PlatArc>,
    /// 1-based component index -> surgery coefficient.
    pub framings: BTreeMap<usize, i64>,
}

impl FlatPlat {
    pub fn bridge(&self, index: usize) -> Option<&Bridge> {
        self.bridges.iter().find(|b| b.index == index)
    }

    fn bridge_of_foot(&self, foot: i64) -> Option<&Bridge> {
        self.bridges.iter().find(|b| b.feet.0 == foot || b.feet.1 == foot)
    }

    fn arc_at_foot(&self, foot: i64) -> Option<(usize, bool)> {
        self.arcs.iter().enumerate().find_map(|(k, a)| {
            if a.from == foot {
                Some((k, true))
            } else if a.to == foot {
                Some((k, false))
            } else {
                None
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlatIssue {
    #[error("bridge {0} is listed twice")]
    DuplicateBridge(usize),
    #[error("bridge {0} needs two distinct feet, left one first")]
    BadFeet(usize),
    #[error("bridges {0} and {1} have overlapping shadows")]
    OverlappingShadows(usize, usize),
    #[error("foot {0} is used by {1} arc ends")]
    FootCoverage(i64, usize),
    #[error("arc {0} ends at {1}, which is not a bridge foot")]
    NotAFoot(String, i64),
    #[error("arc {0} passes under unknown bridge {1}")]
    UnknownBridge(String, usize),
    #[error("arcs cannot be drawn disjointly in the plane")]
    NotPlanar,
    #[error("too many layouts to search ({0})")]
    SearchTooLarge(u128),
    #[error("framing given for component {0}, which does not exist")]
    UnknownComponent(usize),
    #[error("duplicate arc id {0}")]
    DuplicateArc(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlatError {
    #[error("invalid plat: {}", .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<PlatIssue>),
    #[error("need {needed} neighborhood curves but only {available} arcs qualify")]
    InsufficientCurves { needed: usize, available: usize },
    #[error("component {component}: writhe {writhe} differs from framing {framing}")]
    FramingMismatch { component: usize, writhe: i64, framing: i64 },
    #[error("component {0} has no framing")]
    MissingFraming(usize),
    #[error("characteristic curve {0} never crosses a co-core")]
    CurveMissesCoCores(usize),
    #[error("no characteristic curve passes under bridge {0}")]
    UnusedHandle(usize),
}

/// A link component: arcs and bridges in traversal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatComponent {
    /// (arc index, `Pos` if traversed as written)
    pub arcs: Vec<(usize, Sign)>,
    /// (bridge index, `Pos` if traversed left to right)
    pub bridges: Vec<(usize, Sign)>,
}

/// Feet coverage and bridge sanity, without orientation or planarity.
fn structural_issues(plat: &FlatPlat) -> Vec<PlatIssue> {
    let mut issues = Vec::new();
    let mut seen = BTreeMap::new();
    for b in &plat.bridges {
        if seen.insert(b.index, ()).is_some() {
            issues.push(PlatIssue::DuplicateBridge(b.index));
        }
        if b.feet.0 >= b.feet.1 {
            issues.push(PlatIssue::BadFeet(b.index));
        }
    }
    for (k, a) in plat.bridges.iter().enumerate() {
        for b in &plat.bridges[k + 1..] {
            if a.feet.0 <= b.feet.1 && b.feet.0 <= a.feet.1 {
                issues.push(PlatIssue::OverlappingShadows(a.index, b.index));
            }
        }
    }
    let mut ids = BTreeMap::new();
    let mut uses: BTreeMap<i64, usize> = BTreeMap::new();
    for b in &plat.bridges {
        uses.entry(b.feet.0).or_default();
        uses.entry(b.feet.1).or_default();
    }
    for a in &plat.arcs {
        if ids.insert(a.id.clone(), ()).is_some() {
            issues.push(PlatIssue::DuplicateArc(a.id.clone()));
        }
        for foot in [a.from, a.to] {
            match uses.get_mut(&foot) {
                Some(n) => *n += 1,
                None => issues.push(PlatIssue::NotAFoot(a.id.clone(), foot)),
            }
        }
        for u in &a.unders {
            if plat.bridge(u.bridge).is_none() {
                issues.push(PlatIssue::UnknownBridge(a.id.clone(), u.bridge));
            }
        }
    }
    for (foot, n) in uses {
        if n != 1 {
            issues.push(PlatIssue::FootCoverage(foot, n));
        }
    }
    issues
}

fn components_unchecked(plat: &FlatPlat) -> Vec<PlatComponent> {
    let mut done = vec![false; plat.arcs.len()];
    let mut out = Vec::new();
    for start in 0..plat.arcs.len() {
        if done[start] {
            continue;
        }
        let mut comp = PlatComponent { arcs: Vec::new(), bridges: Vec::new() };
        let (mut arc, mut forward) = (start, true);
        loop {
            done[arc] = true;
            comp.arcs.push((arc, if forward { Sign::Pos } else { Sign::Neg }));
            let a = &plat.arcs[arc];
            let foot = if forward { a.to } else { a.from };
            let b = plat.bridge_of_foot(foot).expect("validated foot");
            let other = if b.feet.0 == foot { b.feet.1 } else { b.feet.0 };
            comp.bridges.push((b.index, if other > foot { Sign::Pos } else { Sign::Neg }));
            let (next, next_forward) = plat.arc_at_foot(other).expect("validated foot");
            if next == start {
                break;
            }
            arc = next;
            forward = next_forward;
        }
        out.push(comp);
    }
    out
}

/// Components by alternately following arcs and bridges, each oriented by
/// its lowest-indexed arc as written.
pub fn link_components(plat: &FlatPlat) -> Result<Vec<PlatComponent>, PlatError> {
    let issues = structural_issues(plat);
    if !issues.is_empty() {
        return Err(PlatError::Invalid(issues));
    }
    Ok(components_unchecked(plat))
}

struct Orientation {
    arc_dir: Vec<Sign>,
    arc_component: Vec<usize>,
    bridge_dir: HashMap<usize, Sign>,
    bridge_component: HashMap<usize, usize>,
}

fn orientation(comps: &[PlatComponent], arcs: usize) -> Orientation {
    let mut o = Orientation {
        arc_dir: vec![Sign::Pos; arcs],
        arc_component: vec![0; arcs],
        bridge_dir: HashMap::new(),
        bridge_component: HashMap::new(),
    };
    for (c, comp) in comps.iter().enumerate() {
        for &(a, d) in &comp.arcs {
            o.arc_dir[a] = d;
            o.arc_component[a] = c;
        }
        for &(b, d) in &comp.bridges {
            o.bridge_dir.insert(b, d);
            o.bridge_component.insert(b, c);
        }
    }
    o
}

/// Whether each under-pass crosses the base line northward, in the written
/// direction of its arc.
fn written_north(plat: &FlatPlat, o: &Orientation) -> Vec<Vec<bool>> {
    plat.arcs
        .iter()
        .enumerate()
        .map(|(k, a)| a.unders.iter().map(|u| (u.sign * o.bridge_dir[&u.bridge] * o.arc_dir[k]) == Sign::Pos).collect())
        .collect()
}

/// Sum of the signs of the crossings of a component with itself.
pub fn writhe(plat: &FlatPlat, component: usize) -> Result<i64, PlatError> {
    let comps = link_components(plat)?;
    let o = orientation(&comps, plat.arcs.len());
    Ok(plat
        .arcs
        .iter()
        .enumerate()
        .filter(|(k, _)| o.arc_component[*k] == component)
        .flat_map(|(_, a)| a.unders.iter())
        .filter(|u| o.bridge_component[&u.bridge] == component)
        .map(|u| u.sign.value())
        .sum())
}

/// A concrete planar drawing of the arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatLayout {
    /// Per arc, per under-pass: 1-based rank along the bridge shadow, left to right.
    pub rank: Vec<Vec<usize>>,
    /// Per arc, per under-pass: crosses northward in the written direction.
    pub north: Vec<Vec<bool>>,
}

/// Above this many candidate layouts the planarity search gives up.
pub const LAYOUT_LIMIT: u128 = 1_000_000;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Find a drawing with disjoint arcs by choosing the order of the under-pass
/// points along each shadow. Away from the shadows an arc may cross the base
/// line freely, so only the cyclic orders at the crossing points matter.
pub fn realize(plat: &FlatPlat) -> Result<PlatLayout, PlatError> {
    let comps = link_components(plat)?;
    let o = orientation(&comps, plat.arcs.len());
    let north = written_north(plat, &o);

    let mut by_bridge: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (k, a) in plat.arcs.iter().enumerate() {
        for (u, up) in a.unders.iter().enumerate() {
            by_bridge.entry(up.bridge).or_default().push((k, u));
        }
    }
    let mut count: u128 = 1;
    for list in by_bridge.values() {
        for f in 1..=list.len() as u128 {
            count = count.saturating_mul(f);
        }
    }
    if count > LAYOUT_LIMIT {
        return Err(PlatError::Invalid(vec![PlatIssue::SearchTooLarge(count)]));
    }

    let bridges: Vec<usize> = by_bridge.keys().copied().collect();
    let perms: Vec<Vec<Vec<usize>>> = bridges.iter().map(|b| permutations(by_bridge[b].len())).collect();
    let mut choice = vec![0usize; bridges.len()];
    loop {
        let mut rank: Vec<Vec<usize>> = plat.arcs.iter().map(|a| vec![0; a.unders.len()]).collect();
        for (bi, b) in bridges.iter().enumerate() {
            for (pos, &idx) in perms[bi][choice[bi]].iter().enumerate() {
                let (k, u) = by_bridge[b][idx];
                rank[k][u] = pos + 1;
            }
        }
        let layout = PlatLayout { rank, north: north.clone() };
        if planar(plat, &layout) {
            return Ok(layout);
        }
        // odometer over the bridge permutations
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Err(PlatError::Invalid(vec![PlatIssue::NotPlanar]));
            }
            choice[i] += 1;
            if choice[i] < perms[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Shadows and arcs as a graph with a rotation system; the layout is
/// drawable exactly when every connected piece has Euler characteristic 2.
fn planar(plat: &FlatPlat, layout: &PlatLayout) -> bool {
    // vertices: feet, then under-pass points
    let mut foot_vertex: HashMap<i64, usize> = HashMap::new();
    for b in &plat.bridges {
        for f in [b.feet.0, b.feet.1] {
            let next = foot_vertex.len();
            foot_vertex.insert(f, next);
        }
    }
    let mut point_vertex: Vec<Vec<usize>> = Vec::new();
    let mut v = foot_vertex.len();
    for a in &plat.arcs {
        point_vertex.push((v..v + a.unders.len()).collect());
        v += a.unders.len();
    }
    // rotation slots at an under-pass point, counterclockwise
    const EAST: usize = 0;
    const NORTH: usize = 1;
    const WEST: usize = 2;
    const SOUTH: usize = 3;
    let mut rot: Vec<Vec<Option<usize>>> = vec![Vec::new(); v];
    for r in rot.iter_mut().skip(foot_vertex.len()) {
        *r = vec![None; 4];
    }
    let mut ends: Vec<(usize, usize)> = Vec::new();
    let attach = |rot: &mut Vec<Vec<Option<usize>>>, x: usize, slot: Option<usize>, dart: usize| match slot {
        Some(s) => rot[x][s] = Some(dart),
        None => rot[x].push(Some(dart)),
    };
    let mut add_edge = |rot: &mut Vec<Vec<Option<usize>>>, a: (usize, Option<usize>), b: (usize, Option<usize>)| {
        let e = ends.len();
        ends.push((a.0, b.0));
        attach(rot, a.0, a.1, 2 * e);
        attach(rot, b.0, b.1, 2 * e + 1);
    };
    for b in &plat.bridges {
        let mut along: Vec<(usize, usize)> = Vec::new();
        for (k, a) in plat.arcs.iter().enumerate() {
            for (u, up) in a.unders.iter().enumerate() {
                if up.bridge == b.index {
                    along.push((layout.rank[k][u], point_vertex[k][u]));
                }
            }
        }
        along.sort();
        let mut prev = (foot_vertex[&b.feet.0], None);
        for &(_, p) in &along {
            add_edge(&mut rot, prev, (p, Some(WEST)));
            prev = (p, Some(EAST));
        }
        add_edge(&mut rot, prev, (foot_vertex[&b.feet.1], None));
    }
    for (k, a) in plat.arcs.iter().enumerate() {
        let mut prev = (foot_vertex[&a.from], None);
        for (u, &p) in point_vertex[k].iter().enumerate() {
            let n = layout.north[k][u];
            add_edge(&mut rot, prev, (p, Some(if n { SOUTH } else { NORTH })));
            prev = (p, Some(if n { NORTH } else { SOUTH }));
        }
        add_edge(&mut rot, prev, (foot_vertex[&a.to], None));
    }
    let rot: Vec<Vec<usize>> =
        rot.into_iter().map(|r| r.into_iter().map(|d| d.expect("all slots filled")).collect()).collect();

    let darts = 2 * ends.len();
    let origin = |d: usize| if d.is_multiple_of(2) { ends[d / 2].0 } else { ends[d / 2].1 };
    let mut pos = vec![0; darts];
    for r in &rot {
        for (i, &d) in r.iter().enumerate() {
            pos[d] = i;
        }
    }
    let mut seen = vec![false; darts];
    let mut faces = 0usize;
    for start in 0..darts {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            let back = d ^ 1;
            let at = origin(back);
            let r = &rot[at];
            d = r[(pos[back] + 1) % r.len()];
        }
    }
    let mut parent: Vec<usize> = (0..v).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in &ends {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        parent[ra] = rb;
    }
    let pieces = (0..v).filter(|&x| root(&mut parent, x) == x).count();
    v + faces == ends.len() + 2 * pieces
}

/// Everything wrong with a plat; empty when it can be drawn.
pub fn validate_plat(plat: &FlatPlat) -> Vec<PlatIssue> {
    let issues = structural_issues(plat);
    if !issues.is_empty() {
        return issues;
    }
    let comps = components_unchecked(plat);
    let mut issues: Vec<PlatIssue> = plat
        .framings
        .keys()
        .filter(|c| **c == 0 || **c > comps.len())
        .map(|c| PlatIssue::UnknownComponent(*c))
        .collect();
    match realize(plat) {
        Ok(_) => {}
        Err(PlatError::Invalid(more)) => issues.extend(more),
        Err(_) => unreachable!("realize only reports layout issues"),
    }
    issues
}

/// A 2-handle attaching curve of the compiled graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveChoice {
    /// A link component (0-based index).
    Component(usize),
    /// Boundary of a regular neighborhood of an arc, counterclockwise.
    Neighborhood(usize),
}

/// The link components, topped up with neighborhood curves of arcs whose
/// feet lie on different bridges. A component spanning `k` bridges lends at
/// most `k - 1` of its arcs: the neighborhood curves of all `k` arcs of one
/// component are homologically dependent.
pub fn select_characteristic_curves(plat: &FlatPlat) -> Result<Vec<CurveChoice>, PlatError> {
    let comps = link_components(plat)?;
    let o = orientation(&comps, plat.arcs.len());
    let needed = plat.bridges.len() - comps.len();
    let mut quota: Vec<usize> = comps.iter().map(|c| c.bridges.len() - 1).collect();
    let mut picked = Vec::new();
    for (k, a) in plat.arcs.iter().enumerate() {
        if picked.len() == needed {
            break;
        }
        let separate = plat.bridge_of_foot(a.from).map(|b| b.index) != plat.bridge_of_foot(a.to).map(|b| b.index);
        let c = o.arc_component[k];
        if separate && quota[c] > 0 {
            quota[c] -= 1;
            picked.push(k);
        }
    }
    if picked.len() < needed {
        return Err(PlatError::InsufficientCurves { needed, available: picked.len() });
    }
    let mut curves: Vec<CurveChoice> = (0..comps.len()).map(CurveChoice::Component).collect();
    curves.extend(picked.into_iter().map(CurveChoice::Neighborhood));
    Ok(curves)
}

/// Position of a crossing point along a shadow: (bridge, major, minor).
/// Major 0 is next to the left foot, `1..=m` are the under-pass points in
/// order, `m + 1` is next to the right foot; minor separates the curves that
/// share a neighbourhood.
type ShadowKey = (usize, usize, i8);

#[derive(Debug, Clone, Copy)]
struct CrossPoint {
    key: ShadowKey,
    north: bool,
}

/// Turning counterclockwise around a foot, a curve crosses the shadow once:
/// northward next to a left foot, southward next to a right foot.
fn foot_point(plat: &FlatPlat, foot: i64, by_bridge_len: &HashMap<usize, usize>) -> CrossPoint {
    let b = plat.bridge_of_foot(foot).expect("validated foot");
    let m = by_bridge_len.get(&b.index).copied().unwrap_or(0);
    if foot == b.feet.0 {
        CrossPoint { key: (b.index, 0, 1), north: true }
    } else {
        CrossPoint { key: (b.index, m + 1, -1), north: false }
    }
}

fn curve_points(
    plat: &FlatPlat,
    layout: &PlatLayout,
    comps: &[PlatComponent],
    choice: CurveChoice,
    by_bridge_len: &HashMap<usize, usize>,
) -> Vec<CrossPoint> {
    let mut pts = Vec::new();
    match choice {
        CurveChoice::Component(c) => {
            for &(k, dir) in &comps[c].arcs {
                let a = &plat.arcs[k];
                let mut idx: Vec<usize> = (0..a.unders.len()).collect();
                if dir == Sign::Neg {
                    idx.reverse();
                }
                for u in idx {
                    let north = layout.north[k][u] == (dir == Sign::Pos);
                    pts.push(CrossPoint { key: (a.unders[u].bridge, layout.rank[k][u], 0), north });
                }
            }
        }
        CurveChoice::Neighborhood(k) => {
            let a = &plat.arcs[k];
            let m = a.unders.len();
            // right-hand side, from the `from` foot to the `to` foot
            for u in 0..m {
                let n = layout.north[k][u];
                pts.push(CrossPoint { key: (a.unders[u].bridge, layout.rank[k][u], if n { 1 } else { -1 }), north: n });
            }
            pts.push(foot_point(plat, a.to, by_bridge_len));
            // left-hand side, back again
            for u in (0..m).rev() {
                let n = layout.north[k][u];
                pts.push(CrossPoint {
                    key: (a.unders[u].bridge, layout.rank[k][u], if n { -1 } else { 1 }),
                    north: !n,
                });
            }
            pts.push(foot_point(plat, a.from, by_bridge_len));
        }
    }
    pts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledPlat {
    pub graph: HeegaardGraph,
    pub curves: Vec<CurveChoice>,
    pub writhes: Vec<i64>,
}

/// Build the Heegaard graph of the surgery described by the plat. Framings
/// must match writhes unless `allow_framing_mismatch` is set.
pub fn compile_heegaard_graph(plat: &FlatPlat, allow_framing_mismatch: bool) -> Result<CompiledPlat, PlatError> {
    let issues = validate_plat(plat);
    if !issues.is_empty() {
        return Err(PlatError::Invalid(issues));
    }
    let comps = link_components(plat)?;
    let writhes: Vec<i64> = (0..comps.len()).map(|c| writhe(plat, c)).collect::<Result<_, _>>()?;
    if !allow_framing_mismatch {
        for (c, w) in writhes.iter().enumerate() {
            let framing = *plat.framings.get(&(c + 1)).ok_or(PlatError::MissingFraming(c + 1))?;
            if framing != *w {
                return Err(PlatError::FramingMismatch { component: c + 1, writhe: *w, framing });
            }
        }
    }
    let curves = select_characteristic_curves(plat)?;
    let layout = realize(plat)?;
    let mut by_bridge_len: HashMap<usize, usize> = HashMap::new();
    for a in &plat.arcs {
        for u in &a.unders {
            *by_bridge_len.entry(u.bridge).or_default() += 1;
        }
    }

    let point_lists: Vec<Vec<CrossPoint>> =
        curves.iter().map(|&choice| curve_points(plat, &layout, &comps, choice, &by_bridge_len)).collect();
    for (j, pts) in point_lists.iter().enumerate() {
        if pts.is_empty() {
            return Err(PlatError::CurveMissesCoCores(j + 1));
        }
    }

    // marker names along each shadow, left to right
    let mut keys: BTreeMap<usize, Vec<ShadowKey>> = BTreeMap::new();
    for p in point_lists.iter().flatten() {
        keys.entry(p.key.0).or_default().push(p.key);
    }
    if let Some(b) = plat.bridges.iter().find(|b| !keys.contains_key(&b.index)) {
        return Err(PlatError::UnusedHandle(b.index));
    }
    let mut names: HashMap<ShadowKey, usize> = HashMap::new();
    for list in keys.values_mut() {
        list.sort();
        for (k, key) in list.iter().enumerate() {
            names.insert(*key, k + 1);
        }
    }
    let mut sorted: Vec<&Bridge> = plat.bridges.iter().collect();
    sorted.sort_by_key(|b| b.feet.0);
    let handle_of: HashMap<usize, usize> = sorted.iter().enumerate().map(|(h, b)| (b.index, h + 1)).collect();

    let n = plat.bridges.len();
    let mut graph = HeegaardGraph::new(n);
    for b in &plat.bridges {
        let h = handle_of[&b.index];
        let count = keys.get(&b.index).map_or(0, Vec::len);
        let plus: Vec<String> = (1..=count).map(|k| format!("p{k}")).collect();
        let minus: Vec<String> = (1..=count).rev().map(|k| format!("p{k}'")).collect();
        graph.reflection.insert(h, (1..=count).map(|k| (format!("p{k}"), format!("p{k}'"))).collect());
        graph.vertices.insert(VertexId::new(h, Side::Plus), plus);
        graph.vertices.insert(VertexId::new(h, Side::Minus), minus);
    }
    // crossing northward leaves the south copy (V+) and enters from the north copy (V-)
    let entry = |p: &CrossPoint| {
        let h = handle_of[&p.key.0];
        let k = names[&p.key];
        if p.north {
            Endpoint::new(VertexId::new(h, Side::Plus), format!("p{k}"))
        } else {
            Endpoint::new(VertexId::new(h, Side::Minus), format!("p{k}'"))
        }
    };
    let exit = |p: &CrossPoint| {
        let h = handle_of[&p.key.0];
        let k = names[&p.key];
        if p.north {
            Endpoint::new(VertexId::new(h, Side::Minus), format!("p{k}'"))
        } else {
            Endpoint::new(VertexId::new(h, Side::Plus), format!("p{k}"))
        }
    };
    for (j, pts) in point_lists.iter().enumerate() {
        let q = pts.len();
        for l in 0..q {
            graph.edges.push(Edge {
                id: format!("c{}_{}", j + 1, l + 1),
                color: j + 1,
                tail: exit(&pts[l]),
                head: entry(&pts[(l + 1) % q]),
            });
        }
    }
    graph.normalize();
    Ok(CompiledPlat { graph, curves, writhes })
}

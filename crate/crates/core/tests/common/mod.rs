//! Fixture loading and random fixture generation shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::path::PathBuf;
use std::sync::OnceLock;

use heegaard_seifert::embedding::embedding_genus;
use heegaard_seifert::format::{parse_hg, parse_tgl};
use heegaard_seifert::homology::relator_matrix;
use heegaard_seifert::model::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn graph(name: &str) -> HeegaardGraph {
    let g = parse_hg(&fixture(name)).unwrap();
    assert!(validate_graph(&g).is_valid(), "{name}: {}", validate_graph(&g));
    g
}

pub fn diagram(g: &HeegaardGraph, name: &str) -> LinkDiagram {
    let d = parse_tgl(&fixture(name), g).unwrap();
    assert!(validate_diagram(g, &d).is_valid(), "{name}: {}", validate_diagram(g, &d));
    d
}

/// Naive cofactor-expansion determinant. Only for tiny matrices.
pub fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

/// Graph from per-color pass lists `(handle, ±1)` and, per handle, the marker
/// number given to each pass in order of appearance. A positive pass enters
/// through `V+`.
pub fn build_graph(genus: usize, colors: &[Vec<(usize, i64)>], assign: &[Vec<usize>]) -> HeegaardGraph {
    let mut graph = HeegaardGraph::new(genus);
    let mut counts = vec![0usize; genus];
    for c in colors {
        for &(h, _) in c {
            counts[h - 1] += 1;
        }
    }
    for h in 1..=genus {
        let n = counts[h - 1];
        graph.vertices.insert(VertexId::new(h, Side::Plus), (1..=n).map(|k| format!("p{k}")).collect());
        graph.vertices.insert(VertexId::new(h, Side::Minus), (1..=n).rev().map(|k| format!("p{k}'")).collect());
        graph.reflection.insert(h, (1..=n).map(|k| (format!("p{k}"), format!("p{k}'"))).collect());
    }
    let ep = |h: usize, plus: bool, m: usize| {
        if plus {
            Endpoint::new(VertexId::new(h, Side::Plus), format!("p{m}"))
        } else {
            Endpoint::new(VertexId::new(h, Side::Minus), format!("p{m}'"))
        }
    };
    let mut seen = vec![0usize; genus];
    for (ci, c) in colors.iter().enumerate() {
        let row: Vec<(usize, i64, usize)> = c
            .iter()
            .map(|&(h, s)| {
                let m = assign[h - 1][seen[h - 1]] + 1;
                seen[h - 1] += 1;
                (h, s, m)
            })
            .collect();
        for l in 0..row.len() {
            let (h0, s0, m0) = row[l];
            let (h1, s1, m1) = row[(l + 1) % row.len()];
            graph.edges.push(Edge {
                id: format!("e{}_{}", ci + 1, l + 1),
                color: ci + 1,
                tail: ep(h0, s0 < 0, m0),
                head: ep(h1, s1 > 0, m1),
            });
        }
    }
    graph.normalize();
    graph
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
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

fn pass_lists(genus: usize, max_len: usize) -> Vec<Vec<(usize, i64)>> {
    let atoms: Vec<(usize, i64)> = (1..=genus).flat_map(|h| [(h, 1), (h, -1)]).collect();
    let mut out: Vec<Vec<(usize, i64)>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max_len {
        out = out.iter().flat_map(|p| atoms.iter().map(move |a| [p.clone(), vec![*a]].concat())).collect();
        all.extend(out.iter().cloned());
    }
    all
}

/// Small planar graphs of homology spheres: every genus-1 graph with at most
/// three passes, every genus-2 graph with at most two passes per color, and
/// the Poincaré graph.
pub fn zhs_pool() -> &'static [HeegaardGraph] {
    static POOL: OnceLock<Vec<HeegaardGraph>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut pool = Vec::new();
        let mut consider = |genus: usize, colors: Vec<Vec<(usize, i64)>>| {
            let mut counts = vec![0usize; genus];
            for c in &colors {
                for &(h, _) in c {
                    counts[h - 1] += 1;
                }
            }
            if counts.contains(&0) {
                return;
            }
            let per_handle: Vec<Vec<Vec<usize>>> = counts.iter().map(|&n| permutations(n)).collect();
            let mut choice = vec![0usize; genus];
            loop {
                let assign: Vec<Vec<usize>> = (0..genus).map(|h| per_handle[h][choice[h]].clone()).collect();
                let g = build_graph(genus, &colors, &assign);
                if validate_graph(&g).is_valid() {
                    let rows = relator_matrix(&g).to_rows();
                    if cofactor_det(&rows).abs() == 1 && embedding_genus(&g, &LinkDiagram::default()) == Ok(0) {
                        pool.push(g);
                    }
                }
                let mut h = 0;
                while h < genus {
                    choice[h] += 1;
                    if choice[h] < per_handle[h].len() {
                        break;
                    }
                    choice[h] = 0;
                    h += 1;
                }
                if h == genus {
                    break;
                }
            }
        };
        for c in pass_lists(1, 3) {
            consider(1, vec![c]);
        }
        let lists = pass_lists(2, 2);
        for a in &lists {
            for b in &lists {
                consider(2, vec![a.clone(), b.clone()]);
            }
        }
        pool.push(graph("poincare.hg"));
        pool.dedup();
        pool
    })
}

/// Faces of the graph drawn on the sphere with the fat vertices as discs.
pub struct Faces {
    /// Per edge: (face right of tail to head, face on its left).
    pub sides: Vec<(usize, usize)>,
    /// Face holding the boundary arc after the k-th marker of a vertex.
    sector: HashMap<(VertexId, usize), usize>,
    pub count: usize,
}

impl Faces {
    pub fn new(g: &HeegaardGraph) -> Faces {
        let mut node = HashMap::new();
        for v in g.vertex_ids() {
            for m in g.markers(v) {
                let n = node.len();
                node.insert((v, m.clone()), n);
            }
        }
        // Each node has three darts in ccw order: edge, next boundary arc, previous boundary arc.
        let mut ends: Vec<(usize, usize)> = Vec::new();
        let mut rot = vec![[usize::MAX; 3]; node.len()];
        let mut boundary = HashMap::new();
        for v in g.vertex_ids() {
            let ms = g.markers(v);
            for k in 0..ms.len() {
                let a = node[&(v, ms[k].clone())];
                let b = node[&(v, ms[(k + 1) % ms.len()].clone())];
                ends.push((a, b));
                let e = ends.len() - 1;
                rot[a][1] = 2 * e;
                rot[b][2] = 2 * e + 1;
                boundary.insert((v, k), 2 * e);
            }
        }
        let mut edge_dart = Vec::new();
        for ed in &g.edges {
            let a = node[&(ed.tail.vertex, ed.tail.label.clone())];
            let b = node[&(ed.head.vertex, ed.head.label.clone())];
            ends.push((a, b));
            let e = ends.len() - 1;
            rot[a][0] = 2 * e;
            rot[b][0] = 2 * e + 1;
            edge_dart.push(2 * e);
        }
        let origin = |d: usize| if d.is_multiple_of(2) { ends[d / 2].0 } else { ends[d / 2].1 };
        let darts = 2 * ends.len();
        let mut pos = vec![0; darts];
        for r in &rot {
            for (i, &d) in r.iter().enumerate() {
                pos[d] = i;
            }
        }
        let mut face = vec![usize::MAX; darts];
        let mut count = 0;
        for start in 0..darts {
            if face[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            while face[d] == usize::MAX {
                face[d] = count;
                let back = d ^ 1;
                d = rot[origin(back)][(pos[back] + 1) % 3];
            }
            count += 1;
        }
        Faces {
            sides: edge_dart.iter().map(|&d| (face[d], face[d ^ 1])).collect(),
            sector: boundary.into_iter().map(|(k, d)| (k, face[d])).collect(),
            count,
        }
    }

    pub fn sector(&self, v: VertexId, k: usize) -> usize {
        self.sector[&(v, k)]
    }

    /// Edge crossings available from a face: (edge, sign, face reached).
    fn moves(&self, at: usize) -> Vec<(usize, Sign, usize)> {
        let mut out = Vec::new();
        for (e, &(r, l)) in self.sides.iter().enumerate() {
            if r == at {
                out.push((e, Sign::Pos, l));
            }
            if l == at && l != r {
                out.push((e, Sign::Neg, r));
            }
        }
        out
    }

    fn shortest(&self, from: usize, to: usize) -> Option<Vec<(usize, Sign)>> {
        let mut prev: HashMap<usize, (usize, usize, Sign)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; self.count];
        seen[from] = true;
        while let Some(f) = queue.pop_front() {
            if f == to {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (p, e, s) = prev[&cur];
                    path.push((e, s));
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for (e, s, next) in self.moves(f) {
                if !seen[next] {
                    seen[next] = true;
                    prev.insert(next, (f, e, s));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// A random detour of up to `wander` steps, then the shortest way home.
    pub fn random_walk(&self, rng: &mut StdRng, from: usize, to: usize, wander: usize) -> Option<Vec<(usize, Sign)>> {
        let mut walk = Vec::new();
        let mut at = from;
        for _ in 0..rng.gen_range(0..=wander) {
            let moves = self.moves(at);
            if moves.is_empty() {
                break;
            }
            let (e, s, next) = moves[rng.gen_range(0..moves.len())];
            walk.push((e, s));
            at = next;
        }
        walk.extend(self.shortest(at, to)?);
        Some(walk)
    }
}

/// A loop through 1-handle `h`: leaves `V_h^-` at `t`, wanders over the graph
/// and comes back through `V_h^+` at `s`. Returns `None` when the random
/// choices do not give a planar diagram.
pub fn random_loop(g: &HeegaardGraph, rng: &mut StdRng, wander: usize) -> Option<LinkDiagram> {
    let h = rng.gen_range(1..=g.genus);
    let (vp, vm) = (VertexId::new(h, Side::Plus), VertexId::new(h, Side::Minus));
    let (mp, mm) = (g.markers(vp).to_vec(), g.markers(vm).to_vec());
    let (ip, im) = (rng.gen_range(0..mp.len()), rng.gen_range(0..mm.len()));
    let faces = Faces::new(g);
    let walk = faces.random_walk(rng, faces.sector(vm, im), faces.sector(vp, ip), wander)?;
    let reversed = rng.gen_bool(0.5);
    let mut total = vec![0usize; g.edges.len()];
    for (e, _) in &walk {
        total[*e] += 1;
    }
    let mut count = vec![0usize; g.edges.len()];
    let events = walk
        .iter()
        .map(|&(e, sign)| {
            let k = count[e];
            count[e] += 1;
            let slot = if reversed { total[e] - 1 - k } else { k };
            Event::Transversal { edge: g.edges[e].id.clone(), slot, sign }
        })
        .collect();
    let mut op = mp;
    op.insert(ip + 1, "s".into());
    let mut om = mm;
    om.insert(im + 1, "t".into());
    let mut d = LinkDiagram::default();
    d.vertex_orders.insert(vp, op);
    d.vertex_orders.insert(vm, om);
    d.strands.push(Strand { id: "K".into(), start: Endpoint::new(vm, "t"), events, end: Endpoint::new(vp, "s") });
    d.passages.push(Passage { from: Endpoint::new(vp, "s"), to: Endpoint::new(vm, "t") });
    d.normalize();
    (validate_diagram(g, &d).is_valid() && embedding_genus(g, &d) == Ok(0)).then_some(d)
}

/// A ZHS graph from the pool with a planar loop over it, drawn from `seed`.
pub fn random_zhs_fixture(seed: u64) -> (HeegaardGraph, LinkDiagram) {
    let pool = zhs_pool();
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let g = &pool[rng.gen_range(0..pool.len())];
        for wander in [10, 4, 0] {
            if let Some(d) = random_loop(g, &mut rng, wander) {
                return (g.clone(), d);
            }
        }
    }
}

/// Closure of a braid word over the genus-0 graph. Letters are `(i, sign)`
/// for the generator exchanging positions `i` and `i + 1` (0-based). In a
/// positive letter the strand moving right goes over.
pub fn braid_closure(strands: usize, word: &[(usize, Sign)]) -> LinkDiagram {
    let mut d = LinkDiagram::default();
    for (k, &(_, sign)) in word.iter().enumerate() {
        d.crossings.push(Crossing::new(format!("c{}", k + 1), sign));
    }
    let mut done = vec![false; strands];
    for start in 0..strands {
        if done[start] {
            continue;
        }
        let mut events = Vec::new();
        let mut p = start;
        loop {
            done[p] = true;
            for (k, &(i, sign)) in word.iter().enumerate() {
                let role = if p == i {
                    p = i + 1;
                    if sign == Sign::Pos {
                        Role::Over
                    } else {
                        Role::Under
                    }
                } else if p == i + 1 {
                    p = i;
                    if sign == Sign::Pos {
                        Role::Under
                    } else {
                        Role::Over
                    }
                } else {
                    continue;
                };
                events.push(Event::Crossing { id: format!("c{}", k + 1), role });
            }
            if p == start {
                break;
            }
        }
        d.circles.push(Circle { id: format!("k{}", d.circles.len() + 1), events });
    }
    d.normalize();
    d
}

/// Cycles of the braid permutation, i.e. link components of the closure.
pub fn braid_components(strands: usize, word: &[(usize, Sign)]) -> usize {
    let mut perm: Vec<usize> = (0..strands).collect();
    for &(i, _) in word {
        perm.swap(i, i + 1);
    }
    let mut seen = vec![false; strands];
    let mut cycles = 0;
    for s in 0..strands {
        if !seen[s] {
            cycles += 1;
            let mut p = s;
            while !seen[p] {
                seen[p] = true;
                p = perm[p];
            }
        }
    }
    cycles
}

/// Classical Seifert circles of an oriented PD code. Each crossing is
/// `[a, b, c, d]` counterclockwise from the incoming under edge `a`; edge
/// labels increase along the orientation. Returns (circles, crossings).
pub fn pd_seifert(pd: &[[usize; 4]]) -> (usize, usize) {
    let n_edges = 2 * pd.len();
    let next = |e: usize| e % n_edges + 1;
    let mut succ: HashMap<usize, usize> = HashMap::new();
    for &[a, b, c, d] in pd {
        // The over strand runs b -> d or d -> b; smoothing sends each
        // incoming edge to the other strand's outgoing edge.
        let (over_in, over_out) = if next(b) == d { (b, d) } else { (d, b) };
        succ.insert(a, over_out);
        succ.insert(over_in, c);
    }
    let mut seen = vec![false; n_edges + 1];
    let mut circles = 0;
    for e in 1..=n_edges {
        if seen[e] {
            continue;
        }
        circles += 1;
        let mut x = e;
        while !seen[x] {
            seen[x] = true;
            x = succ[&x];
        }
    }
    (circles, pd.len())
}

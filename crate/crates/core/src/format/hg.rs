//! `.hg`: Heegaard graphs.
//!
//! ```text
//! genus 1
//! vertex 1+ : a
//! vertex 1- : a'
//! reflect 1 : a->a'
//! edge e1 color 1 1-.a' -> 1+.a
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{comma_items, is_ident, lines, list_after_colon, parse_endpoint, parse_vertex, ParseError, Sink};
use crate::model::{canonical_rotation, Edge, HeegaardGraph, VertexId};

pub fn parse_hg(text: &str) -> Result<HeegaardGraph, ParseError> {
    let mut sink = Sink::default();
    let mut genus: Option<(usize, usize)> = None;
    let mut graph = HeegaardGraph::default();
    let mut vertex_lines: BTreeMap<VertexId, (usize, usize)> = BTreeMap::new();
    let mut edge_refs = Vec::new();
    let mut reflect_lines = Vec::new();
    let mut buf = String::new();

    for line in lines(text) {
        let n = line.number;
        let head = line.tokens[0];
        match head.text {
            "genus" => {
                if line.tokens.len() != 2 {
                    sink.error(n, head.col, "expected `genus <g>`");
                    continue;
                }
                match line.tokens[1].text.parse::<usize>() {
                    Ok(g) if genus.is_none() => genus = Some((g, n)),
                    Ok(_) => sink.error(n, head.col, "duplicate genus line"),
                    Err(_) => sink.error(n, line.tokens[1].col, "genus must be a non-negative integer"),
                }
            }
            "vertex" => {
                if line.tokens.len() < 4 || line.tokens[2].text != ":" {
                    sink.error(n, head.col, "expected `vertex <i><+|-> : <marker>,...`");
                    continue;
                }
                let Some(v) = parse_vertex(line.tokens[1].text) else {
                    sink.error(n, line.tokens[1].col, format!("bad vertex `{}`", line.tokens[1].text));
                    continue;
                };
                if vertex_lines.insert(v, (n, line.tokens[1].col)).is_some() {
                    sink.error(n, line.tokens[1].col, format!("duplicate vertex {v}"));
                    continue;
                }
                let list = list_after_colon(&line, 2, &mut buf).expect("checked length");
                let mut markers = Vec::new();
                for item in comma_items(list) {
                    if is_ident(item.text) {
                        markers.push(item.text.to_string());
                    } else {
                        sink.error(n, item.col, format!("bad marker `{}`", item.text));
                    }
                }
                graph.vertices.insert(v, markers);
            }
            "reflect" => {
                if line.tokens.len() < 4 || line.tokens[2].text != ":" {
                    sink.error(n, head.col, "expected `reflect <i> : <m>-><m>,...`");
                    continue;
                }
                let Ok(i) = line.tokens[1].text.parse::<usize>() else {
                    sink.error(n, line.tokens[1].col, "bad handle index");
                    continue;
                };
                if graph.reflection.contains_key(&i) {
                    sink.error(n, line.tokens[1].col, format!("duplicate reflect for handle {i}"));
                    continue;
                }
                let list = list_after_colon(&line, 2, &mut buf).expect("checked length");
                let mut map = BTreeMap::new();
                for item in comma_items(list) {
                    match item.text.split_once("->") {
                        Some((a, b)) if is_ident(a) && is_ident(b) => {
                            if map.insert(a.to_string(), b.to_string()).is_some() {
                                sink.error(n, item.col, format!("marker {a} reflected twice"));
                            }
                        }
                        _ => sink.error(n, item.col, format!("bad reflection pair `{}`", item.text)),
                    }
                }
                reflect_lines.push((i, n, line.tokens[1].col));
                graph.reflection.insert(i, map);
            }
            "edge" => {
                let t = &line.tokens;
                if t.len() != 7 || t[2].text != "color" || t[5].text != "->" {
                    sink.error(n, head.col, "expected `edge <id> color <j> <v>.<m> -> <v>.<m>`");
                    continue;
                }
                if !is_ident(t[1].text) {
                    sink.error(n, t[1].col, format!("bad edge id `{}`", t[1].text));
                    continue;
                }
                let Ok(color) = t[3].text.parse::<usize>() else {
                    sink.error(n, t[3].col, "bad color");
                    continue;
                };
                let (Some(tail), Some(head_ep)) = (parse_endpoint(t[4].text), parse_endpoint(t[6].text)) else {
                    let bad = if parse_endpoint(t[4].text).is_none() { t[4] } else { t[6] };
                    sink.error(n, bad.col, format!("bad endpoint `{}`", bad.text));
                    continue;
                };
                if graph.edges.iter().any(|e| e.id == t[1].text) {
                    sink.error(n, t[1].col, format!("duplicate edge id {}", t[1].text));
                    continue;
                }
                edge_refs.push((n, t[4].col, t[6].col, t[3].col));
                graph.edges.push(Edge { id: t[1].text.to_string(), color, tail, head: head_ep });
            }
            other => sink.error(n, head.col, format!("unknown record `{other}`")),
        }
    }

    let Some((g, _)) = genus else {
        sink.error(1, 1, "missing genus");
        return sink.finish(graph);
    };
    graph.genus = g;
    for (v, (n, col)) in &vertex_lines {
        if v.handle > g {
            sink.error(*n, *col, format!("vertex {v} exceeds genus {g}"));
        }
    }
    for (i, n, col) in reflect_lines {
        if i == 0 || i > g {
            sink.error(n, col, format!("handle {i} outside 1..={g}"));
        }
    }
    for (e, (n, tcol, hcol, ccol)) in graph.edges.iter().zip(edge_refs) {
        if e.color == 0 || e.color > g {
            sink.error(n, ccol, format!("color {} outside 1..={g}", e.color));
        }
        for (ep, col) in [(&e.tail, tcol), (&e.head, hcol)] {
            if !graph.markers(ep.vertex).contains(&ep.label) {
                sink.error(n, col, format!("unknown marker {ep}"));
            }
        }
    }
    graph.normalize();
    sink.finish(graph)
}

pub fn serialize_hg(graph: &HeegaardGraph) -> String {
    let mut out = String::new();
    writeln!(out, "genus {}", graph.genus).unwrap();
    for (v, markers) in &graph.vertices {
        writeln!(out, "vertex {v} : {}", canonical_rotation(markers).join(",")).unwrap();
    }
    for (i, map) in &graph.reflection {
        let pairs: Vec<String> = map.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        writeln!(out, "reflect {i} : {}", pairs.join(",")).unwrap();
    }
    for e in &graph.edges {
        writeln!(out, "edge {} color {} {} -> {}", e.id, e.color, e.tail, e.head).unwrap();
    }
    out
}

//! `.tgl`: link diagrams over a Heegaard graph.
//!
//! ```text
//! vertex 1+ : a,p
//! vertex 1- : a',q
//! crossing x1 sign + order over-in,under-in,over-out,under-out
//! strand s : 1-.q te1:0:+ 1+.p
//! circle c : xx1:over xx1:under
//! passage 1+.p ~ 1-.q
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{comma_items, is_ident, lines, list_after_colon, parse_endpoint, parse_vertex, ParseError, Sink, Token};
use crate::model::{
    canonical_rotation, crossing_order_for_sign, Circle, Crossing, CrossingEnd, Endpoint, Event, HeegaardGraph,
    LinkDiagram, Passage, Role, Sign, Strand,
};

fn parse_sign(s: &str) -> Option<Sign> {
    match s {
        "+" => Some(Sign::Pos),
        "-" => Some(Sign::Neg),
        _ => None,
    }
}

fn parse_end(s: &str) -> Option<CrossingEnd> {
    CrossingEnd::ALL.into_iter().find(|e| e.name() == s)
}

fn parse_event(tok: Token<'_>) -> Result<Event, String> {
    let bad = || format!("bad event `{}`", tok.text);
    if let Some(rest) = tok.text.strip_prefix('x') {
        let (id, role) = rest.split_once(':').ok_or_else(bad)?;
        let role = match role {
            "over" => Role::Over,
            "under" => Role::Under,
            _ => return Err(bad()),
        };
        if !is_ident(id) {
            return Err(bad());
        }
        return Ok(Event::Crossing { id: id.to_string(), role });
    }
    if let Some(rest) = tok.text.strip_prefix('t') {
        let mut parts = rest.split(':');
        let (Some(edge), Some(slot), Some(sign), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let slot: usize = slot.parse().map_err(|_| bad())?;
        let sign = parse_sign(sign).ok_or_else(bad)?;
        if !is_ident(edge) {
            return Err(bad());
        }
        return Ok(Event::Transversal { edge: edge.to_string(), slot, sign });
    }
    Err(bad())
}

fn event_text(ev: &Event) -> String {
    match ev {
        Event::Crossing { id, role } => {
            format!("x{id}:{}", if *role == Role::Over { "over" } else { "under" })
        }
        Event::Transversal { edge, slot, sign } => format!("t{edge}:{slot}:{}", sign.symbol()),
    }
}

/// Parse a diagram; references to edges and vertices are checked against `graph`.
pub fn parse_tgl(text: &str, graph: &HeegaardGraph) -> Result<LinkDiagram, ParseError> {
    let mut sink = Sink::default();
    let mut d = LinkDiagram::default();
    let mut component_ids = BTreeSet::new();
    let mut crossing_refs: Vec<(String, usize, usize)> = Vec::new();
    let mut buf = String::new();

    let check_endpoint = |sink: &mut Sink, tok: Token<'_>, n: usize| -> Option<Endpoint> {
        let Some(ep) = parse_endpoint(tok.text) else {
            sink.error(n, tok.col, format!("bad endpoint `{}`", tok.text));
            return None;
        };
        if ep.vertex.handle > graph.genus {
            sink.error(n, tok.col, format!("unknown vertex {}", ep.vertex));
            return None;
        }
        Some(ep)
    };

    for line in lines(text) {
        let n = line.number;
        let t = &line.tokens;
        match t[0].text {
            "vertex" => {
                if t.len() < 4 || t[2].text != ":" {
                    sink.error(n, t[0].col, "expected `vertex <i><+|-> : <label>,...`");
                    continue;
                }
                let Some(v) = parse_vertex(t[1].text) else {
                    sink.error(n, t[1].col, format!("bad vertex `{}`", t[1].text));
                    continue;
                };
                if v.handle > graph.genus {
                    sink.error(n, t[1].col, format!("unknown vertex {v}"));
                    continue;
                }
                if d.vertex_orders.contains_key(&v) {
                    sink.error(n, t[1].col, format!("duplicate vertex {v}"));
                    continue;
                }
                let list = list_after_colon(&line, 2, &mut buf).expect("checked length");
                let mut labels = Vec::new();
                for item in comma_items(list) {
                    if is_ident(item.text) {
                        labels.push(item.text.to_string());
                    } else {
                        sink.error(n, item.col, format!("bad label `{}`", item.text));
                    }
                }
                d.vertex_orders.insert(v, labels);
            }
            "crossing" => {
                if !(t.len() == 4 || t.len() == 6) || t[2].text != "sign" || (t.len() == 6 && t[4].text != "order") {
                    sink.error(n, t[0].col, "expected `crossing <id> sign <+|-> [order <end>,<end>,<end>,<end>]`");
                    continue;
                }
                if !is_ident(t[1].text) {
                    sink.error(n, t[1].col, format!("bad crossing id `{}`", t[1].text));
                    continue;
                }
                if d.crossings.iter().any(|c| c.id == t[1].text) {
                    sink.error(n, t[1].col, format!("duplicate crossing id {}", t[1].text));
                    continue;
                }
                let Some(sign) = parse_sign(t[3].text) else {
                    sink.error(n, t[3].col, "sign must be + or -");
                    continue;
                };
                let order = if t.len() == 6 {
                    let items = comma_items(t[5]);
                    let ends: Vec<Option<CrossingEnd>> = items.iter().map(|i| parse_end(i.text)).collect();
                    if ends.len() != 4 || ends.iter().any(Option::is_none) {
                        sink.error(n, t[5].col, "order needs four of over-in, over-out, under-in, under-out");
                        continue;
                    }
                    let ends: Vec<CrossingEnd> = ends.into_iter().map(Option::unwrap).collect();
                    [ends[0], ends[1], ends[2], ends[3]]
                } else {
                    crossing_order_for_sign(sign)
                };
                d.crossings.push(Crossing { id: t[1].text.to_string(), sign, order });
            }
            kind @ ("strand" | "circle") => {
                if t.len() < 3 || t[2].text != ":" {
                    sink.error(n, t[0].col, format!("expected `{kind} <id> : ...`"));
                    continue;
                }
                let id = t[1].text;
                if !is_ident(id) {
                    sink.error(n, t[1].col, format!("bad {kind} id `{id}`"));
                    continue;
                }
                if !component_ids.insert(id.to_string()) {
                    sink.error(n, t[1].col, format!("duplicate component id {id}"));
                    continue;
                }
                let body = &t[3..];
                let (endpoints, inner) = if kind == "strand" {
                    if body.len() < 2 {
                        sink.error(n, t[0].col, "a strand needs a start and an end attachment");
                        continue;
                    }
                    (Some((body[0], body[body.len() - 1])), &body[1..body.len() - 1])
                } else {
                    (None, body)
                };
                let mut events = Vec::new();
                let mut ok = true;
                for tok in inner {
                    match parse_event(*tok) {
                        Ok(ev) => {
                            match &ev {
                                Event::Crossing { id, .. } => crossing_refs.push((id.clone(), n, tok.col)),
                                Event::Transversal { edge, .. } => {
                                    if graph.edge(edge).is_none() {
                                        sink.error(n, tok.col, format!("unknown edge {edge}"));
                                        ok = false;
                                    }
                                }
                            }
                            events.push(ev);
                        }
                        Err(msg) => {
                            sink.error(n, tok.col, msg);
                            ok = false;
                        }
                    }
                }
                match endpoints {
                    Some((a, b)) => {
                        let start = check_endpoint(&mut sink, a, n);
                        let end = check_endpoint(&mut sink, b, n);
                        if let (Some(start), Some(end), true) = (start, end, ok) {
                            d.strands.push(Strand { id: id.to_string(), start, events, end });
                        }
                    }
                    None => {
                        if ok {
                            d.circles.push(Circle { id: id.to_string(), events });
                        }
                    }
                }
            }
            "passage" => {
                if t.len() != 4 || t[2].text != "~" {
                    sink.error(n, t[0].col, "expected `passage <v>.<pos> ~ <v>.<pos>`");
                    continue;
                }
                let from = check_endpoint(&mut sink, t[1], n);
                let to = check_endpoint(&mut sink, t[3], n);
                if let (Some(from), Some(to)) = (from, to) {
                    if d.passages.iter().any(|p| p.from == from || p.to == to) {
                        sink.error(n, t[1].col, format!("duplicate passage {from} ~ {to}"));
                        continue;
                    }
                    d.passages.push(Passage { from, to });
                }
            }
            other => sink.error(n, t[0].col, format!("unknown record `{other}`")),
        }
    }
    for (id, n, col) in crossing_refs {
        if d.crossing(&id).is_none() {
            sink.error(n, col, format!("unknown crossing {id}"));
        }
    }
    d.normalize();
    sink.finish(d)
}

pub fn serialize_tgl(d: &LinkDiagram) -> String {
    let mut out = String::new();
    for (v, order) in &d.vertex_orders {
        writeln!(out, "vertex {v} : {}", canonical_rotation(order).join(",")).unwrap();
    }
    for c in &d.crossings {
        let order: Vec<&str> = canonical_rotation(&c.order).iter().map(|e| e.name()).collect();
        writeln!(out, "crossing {} sign {} order {}", c.id, c.sign.symbol(), order.join(",")).unwrap();
    }
    for s in &d.strands {
        let mut words = vec![s.start.to_string()];
        words.extend(s.events.iter().map(event_text));
        words.push(s.end.to_string());
        writeln!(out, "strand {} : {}", s.id, words.join(" ")).unwrap();
    }
    for c in &d.circles {
        let words: Vec<String> = c.events.iter().map(event_text).collect();
        if words.is_empty() {
            writeln!(out, "circle {} :", c.id).unwrap();
        } else {
            writeln!(out, "circle {} : {}", c.id, words.join(" ")).unwrap();
        }
    }
    for p in &d.passages {
        writeln!(out, "passage {} ~ {}", p.from, p.to).unwrap();
    }
    out
}

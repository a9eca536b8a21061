//! `.surf`: surface reports.
//!
//! Counts come first, followed by one record per surface cell. Circle
//! numbers are 1-based.
//!
//! ```text
//! h0 2
//! h1_pairing 0
//! h1_twist 3
//! h2 0
//! chi -1
//! boundary 1
//! genus 1
//! components 1
//! x
//! circle 1 : k
//! circle 2 : k
//! band twist c1 + : 1 2
//! band pairing 1 1+.e 1+.s : 1 2
//! cap E1_1 : 2
//! ```

use std::fmt::Write as _;

use super::{is_ident, lines, parse_endpoint, ParseError, Sink, Token};
use crate::model::Sign;
use crate::seifert::{Band, BandKind, Cap, Chord, SpanningSurface};

fn circle_ref(tok: Token<'_>, sink: &mut Sink, n: usize) -> Option<usize> {
    match tok.text.parse::<usize>() {
        Ok(c) if c >= 1 => Some(c - 1),
        _ => {
            sink.error(n, tok.col, format!("bad circle number `{}`", tok.text));
            None
        }
    }
}

pub fn parse_surf(text: &str) -> Result<SpanningSurface, ParseError> {
    let mut sink = Sink::default();
    let mut s = SpanningSurface::default();
    let mut seen = Vec::new();
    for line in lines(text) {
        let n = line.number;
        let t = &line.tokens;
        let key = t[0].text;
        match key {
            "h0" | "h1_pairing" | "h1_twist" | "h2" | "boundary" | "genus" | "components" | "chi" => {
                if seen.contains(&key) {
                    sink.error(n, t[0].col, format!("duplicate {key}"));
                    continue;
                }
                seen.push(key);
                if t.len() != 2 {
                    sink.error(n, t[0].col, format!("expected `{key} <int>`"));
                    continue;
                }
                if key == "chi" {
                    match t[1].text.parse() {
                        Ok(v) => s.chi = v,
                        Err(_) => sink.error(n, t[1].col, "chi must be an integer"),
                    }
                    continue;
                }
                let Ok(v) = t[1].text.parse::<usize>() else {
                    sink.error(n, t[1].col, format!("{key} must be a non-negative integer"));
                    continue;
                };
                *match key {
                    "h0" => &mut s.h0,
                    "h1_pairing" => &mut s.h1_pairing,
                    "h1_twist" => &mut s.h1_twist,
                    "h2" => &mut s.h2,
                    "boundary" => &mut s.boundary,
                    "genus" => &mut s.genus,
                    _ => &mut s.components,
                } = v;
            }
            "x" => {
                for tok in &t[1..] {
                    match tok.text.parse() {
                        Ok(v) => s.x.push(v),
                        Err(_) => sink.error(n, tok.col, "x entries must be integers"),
                    }
                }
            }
            "circle" => {
                if t.len() < 3 || t[2].text != ":" {
                    sink.error(n, t[0].col, "expected `circle <n> : <component>...`");
                    continue;
                }
                let Some(c) = circle_ref(t[1], &mut sink, n) else { continue };
                if c != s.circles.len() {
                    sink.error(n, t[1].col, format!("expected circle {}", s.circles.len() + 1));
                    continue;
                }
                let mut ids = Vec::new();
                for tok in &t[3..] {
                    if is_ident(tok.text) {
                        ids.push(tok.text.to_string());
                    } else {
                        sink.error(n, tok.col, format!("bad component id `{}`", tok.text));
                    }
                }
                s.circles.push(ids);
            }
            "band" => {
                let Some(colon) = t.iter().position(|tok| tok.text == ":") else {
                    sink.error(n, t[0].col, "expected `band ... : <circle> <circle>`");
                    continue;
                };
                if t.len() != colon + 3 || t.len() < 2 {
                    sink.error(n, t[0].col, "a band joins exactly two circles");
                    continue;
                }
                let (Some(a), Some(b)) =
                    (circle_ref(t[colon + 1], &mut sink, n), circle_ref(t[colon + 2], &mut sink, n))
                else {
                    continue;
                };
                let head = &t[1..colon];
                let kind = match head.first().map(|tok| tok.text) {
                    Some("twist") if head.len() == 3 => {
                        let handedness = match head[2].text {
                            "+" => Sign::Pos,
                            "-" => Sign::Neg,
                            _ => {
                                sink.error(n, head[2].col, "handedness must be + or -");
                                continue;
                            }
                        };
                        BandKind::Twist { crossing: head[1].text.to_string(), handedness }
                    }
                    Some("pairing") if head.len() == 4 => {
                        let Ok(handle) = head[1].text.parse::<usize>() else {
                            sink.error(n, head[1].col, "bad handle");
                            continue;
                        };
                        let (Some(end), Some(start)) = (parse_endpoint(head[2].text), parse_endpoint(head[3].text))
                        else {
                            sink.error(n, head[2].col, "bad chord endpoints");
                            continue;
                        };
                        BandKind::Pairing { handle, chord: Chord { end, start } }
                    }
                    _ => {
                        sink.error(
                            n,
                            t[0].col,
                            "expected `band twist <crossing> <+|->` or `band pairing <i> <end> <start>`",
                        );
                        continue;
                    }
                };
                s.bands.push(Band { kind, circles: (a, b) });
            }
            "cap" => {
                if t.len() < 3 || t[2].text != ":" || !is_ident(t[1].text) {
                    sink.error(n, t[0].col, "expected `cap <component> : <circle>...`");
                    continue;
                }
                let circles: Vec<usize> = t[3..].iter().filter_map(|tok| circle_ref(*tok, &mut sink, n)).collect();
                s.caps.push(Cap { component: t[1].text.to_string(), circles });
            }
            other => sink.error(n, t[0].col, format!("unknown record `{other}`")),
        }
    }
    sink.finish(s)
}

pub fn serialize_surf(s: &SpanningSurface) -> String {
    let mut out = String::new();
    for (k, v) in [("h0", s.h0), ("h1_pairing", s.h1_pairing), ("h1_twist", s.h1_twist), ("h2", s.h2)] {
        writeln!(out, "{k} {v}").unwrap();
    }
    writeln!(out, "chi {}", s.chi).unwrap();
    for (k, v) in [("boundary", s.boundary), ("genus", s.genus), ("components", s.components)] {
        writeln!(out, "{k} {v}").unwrap();
    }
    let x: Vec<String> = s.x.iter().map(i64::to_string).collect();
    writeln!(out, "{}", std::iter::once("x".to_string()).chain(x).collect::<Vec<_>>().join(" ")).unwrap();
    for (k, ids) in s.circles.iter().enumerate() {
        if ids.is_empty() {
            writeln!(out, "circle {} :", k + 1).unwrap();
        } else {
            writeln!(out, "circle {} : {}", k + 1, ids.join(" ")).unwrap();
        }
    }
    for b in &s.bands {
        let (a, c) = (b.circles.0 + 1, b.circles.1 + 1);
        match &b.kind {
            BandKind::Twist { crossing, handedness } => {
                writeln!(out, "band twist {crossing} {} : {a} {c}", handedness.symbol()).unwrap()
            }
            BandKind::Pairing { handle, chord } => {
                writeln!(out, "band pairing {handle} {} {} : {a} {c}", chord.end, chord.start).unwrap()
            }
        }
    }
    for cap in &s.caps {
        let list: Vec<String> = cap.circles.iter().map(|c| (c + 1).to_string()).collect();
        writeln!(out, "cap {} : {}", cap.component, list.join(" ")).unwrap();
    }
    out
}

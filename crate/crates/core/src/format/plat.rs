//! `.plat`: flat plat presentations of framed links.
//!
//! ```text
//! bridge 1 feet 1 2
//! arc a : 1 u1:+ 2
//! framing 1 1
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{is_ident, lines, ParseError, Sink, Token};
use crate::model::Sign;
use crate::plat::{Bridge, FlatPlat, PlatArc, UnderPass};

fn parse_under(tok: Token<'_>) -> Option<UnderPass> {
    let (b, s) = tok.text.strip_prefix('u')?.split_once(':')?;
    let bridge = b.parse().ok().filter(|b| *b >= 1)?;
    let sign = match s {
        "+" => Sign::Pos,
        "-" => Sign::Neg,
        _ => return None,
    };
    Some(UnderPass { bridge, sign })
}

/// Syntax and duplicate ids only; see [`crate::plat::validate_plat`] for the rest.
pub fn parse_plat(text: &str) -> Result<FlatPlat, ParseError> {
    let mut sink = Sink::default();
    let mut plat = FlatPlat::default();
    let mut arc_ids = BTreeSet::new();
    for line in lines(text) {
        let n = line.number;
        let t = &line.tokens;
        match t[0].text {
            "bridge" => {
                if t.len() != 5 || t[2].text != "feet" {
                    sink.error(n, t[0].col, "expected `bridge <b> feet <p1> <p2>`");
                    continue;
                }
                let Some(index) = t[1].text.parse::<usize>().ok().filter(|b| *b >= 1) else {
                    sink.error(n, t[1].col, "bridge index must be a positive integer");
                    continue;
                };
                let (Ok(p1), Ok(p2)) = (t[3].text.parse::<i64>(), t[4].text.parse::<i64>()) else {
                    sink.error(n, t[3].col, "feet must be integers");
                    continue;
                };
                if plat.bridges.iter().any(|b| b.index == index) {
                    sink.error(n, t[1].col, format!("duplicate bridge {index}"));
                    continue;
                }
                plat.bridges.push(Bridge { index, feet: (p1, p2) });
            }
            "arc" => {
                if t.len() < 5 || t[2].text != ":" {
                    sink.error(n, t[0].col, "expected `arc <id> : <foot> [u<b>:<+|->]* <foot>`");
                    continue;
                }
                if !is_ident(t[1].text) {
                    sink.error(n, t[1].col, format!("bad arc id `{}`", t[1].text));
                    continue;
                }
                if !arc_ids.insert(t[1].text) {
                    sink.error(n, t[1].col, format!("duplicate arc id {}", t[1].text));
                    continue;
                }
                let body = &t[3..];
                let (first, last) = (body[0], body[body.len() - 1]);
                let (Ok(from), Ok(to)) = (first.text.parse::<i64>(), last.text.parse::<i64>()) else {
                    let bad = if first.text.parse::<i64>().is_err() { first } else { last };
                    sink.error(n, bad.col, format!("bad foot `{}`", bad.text));
                    continue;
                };
                let mut unders = Vec::new();
                let mut ok = true;
                for tok in &body[1..body.len() - 1] {
                    match parse_under(*tok) {
                        Some(u) => unders.push(u),
                        None => {
                            sink.error(n, tok.col, format!("bad under-pass `{}`", tok.text));
                            ok = false;
                        }
                    }
                }
                if ok {
                    plat.arcs.push(PlatArc { id: t[1].text.to_string(), from, to, unders });
                }
            }
            "framing" => {
                if t.len() != 3 {
                    sink.error(n, t[0].col, "expected `framing <component> <int>`");
                    continue;
                }
                let Some(c) = t[1].text.parse::<usize>().ok().filter(|c| *c >= 1) else {
                    sink.error(n, t[1].col, "component index must be a positive integer");
                    continue;
                };
                let Ok(f) = t[2].text.parse::<i64>() else {
                    sink.error(n, t[2].col, "framing must be an integer");
                    continue;
                };
                if plat.framings.insert(c, f).is_some() {
                    sink.error(n, t[1].col, format!("duplicate framing for component {c}"));
                }
            }
            other => sink.error(n, t[0].col, format!("unknown record `{other}`")),
        }
    }
    sink.finish(plat)
}

pub fn serialize_plat(plat: &FlatPlat) -> String {
    let mut out = String::new();
    for b in &plat.bridges {
        writeln!(out, "bridge {} feet {} {}", b.index, b.feet.0, b.feet.1).unwrap();
    }
    for a in &plat.arcs {
        let mut words = vec![a.from.to_string()];
        words.extend(a.unders.iter().map(|u| format!("u{}:{}", u.bridge, u.sign.symbol())));
        words.push(a.to.to_string());
        writeln!(out, "arc {} : {}", a.id, words.join(" ")).unwrap();
    }
    for (c, f) in &plat.framings {
        writeln!(out, "framing {c} {f}").unwrap();
    }
    out
}

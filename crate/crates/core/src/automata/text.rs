//! Line-oriented automaton files and DOT export.
//!
//! ```text
//! arity <k> states <n> initial <i>
//! accept <s>
//! trans <s> <c1> ... <ck> <t>
//! ```
//! Each `ci` is `0`, `1` or `P`. Transitions into the dead state of a
//! minimal automaton are omitted; missing transitions read back as dead.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{alphabet_size, decode_column, encode_column, AutomaticRelation, Dfa, TrackSymbol};
use crate::error::{Error, Result};

fn dead_state(dfa: &Dfa) -> Option<u32> {
    (0..dfa.num_states() as u32)
        .find(|&s| !dfa.is_accepting(s) && (0..dfa.alpha()).all(|l| dfa.next(s, l) == s))
}

pub fn write_dfa(rel: &AutomaticRelation) -> String {
    let dfa = rel.dfa();
    let dead = dead_state(dfa);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "arity {} states {} initial {}",
        dfa.arity(),
        dfa.num_states(),
        dfa.initial()
    );
    for s in 0..dfa.num_states() as u32 {
        if dfa.is_accepting(s) {
            let _ = writeln!(out, "accept {s}");
        }
    }
    for s in 0..dfa.num_states() as u32 {
        if Some(s) == dead {
            continue;
        }
        for l in 0..dfa.alpha() {
            let t = dfa.next(s, l);
            if Some(t) == dead {
                continue;
            }
            let _ = write!(out, "trans {s}");
            for c in decode_column(l, dfa.arity()) {
                let _ = write!(out, " {}", c.to_char());
            }
            let _ = writeln!(out, " {t}");
        }
    }
    out
}

fn num(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what}")))
}

pub fn parse_dfa(text: &str) -> Result<AutomaticRelation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty automaton file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 6 || toks[0] != "arity" || toks[2] != "states" || toks[4] != "initial" {
        return Err(Error::parse(hl, "expected `arity <k> states <n> initial <i>`"));
    }
    let arity = num(Some(toks[1]), hl, "arity")?;
    let n = num(Some(toks[3]), hl, "state count")?;
    let initial = num(Some(toks[5]), hl, "initial state")?;
    if arity > 12 {
        return Err(Error::parse(hl, "arity too large"));
    }
    if n == 0 || initial >= n {
        return Err(Error::parse(hl, "initial state out of range"));
    }
    let alpha = alphabet_size(arity);
    let sink = n as u32;
    let mut trans = vec![sink; (n + 1) * alpha];
    let mut accepting = vec![false; n + 1];
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("accept") => {
                let s = num(it.next(), ln, "state")?;
                if s >= n {
                    return Err(Error::parse(ln, "state out of range"));
                }
                accepting[s] = true;
            }
            Some("trans") => {
                let s = num(it.next(), ln, "source state")?;
                let mut col = Vec::with_capacity(arity);
                for _ in 0..arity {
                    let tok = it.next().ok_or_else(|| Error::parse(ln, "missing column symbol"))?;
                    let mut chars = tok.chars();
                    let sym = match (chars.next().and_then(TrackSymbol::from_char), chars.next()) {
                        (Some(sym), None) => sym,
                        _ => return Err(Error::parse(ln, format!("bad column symbol `{tok}`"))),
                    };
                    col.push(sym);
                }
                let t = num(it.next(), ln, "target state")?;
                if it.next().is_some() {
                    return Err(Error::parse(ln, "trailing tokens"));
                }
                if s >= n || t >= n {
                    return Err(Error::parse(ln, "state out of range"));
                }
                trans[s * alpha + encode_column(&col)] = t as u32;
            }
            Some(other) => return Err(Error::parse(ln, format!("unknown directive `{other}`"))),
            None => {}
        }
    }
    let dfa = Dfa::new(arity, trans, initial as u32, accepting)?;
    Ok(AutomaticRelation::from_dfa(&dfa))
}

/// Graphviz rendering; edges into the dead state are dropped.
pub fn to_dot(rel: &AutomaticRelation) -> String {
    let dfa = rel.dfa();
    let dead = dead_state(dfa);
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  start [shape=point];\n");
    for s in 0..dfa.num_states() as u32 {
        if Some(s) == dead {
            continue;
        }
        let shape = if dfa.is_accepting(s) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  q{s} [shape={shape}];");
    }
    let _ = writeln!(out, "  start -> q{};", dfa.initial());
    for s in 0..dfa.num_states() as u32 {
        if Some(s) == dead {
            continue;
        }
        let mut labels: BTreeMap<u32, Vec<String>> = BTreeMap::new();
        for l in 0..dfa.alpha() {
            let t = dfa.next(s, l);
            if Some(t) != dead {
                let col: String = decode_column(l, dfa.arity()).iter().map(|c| c.to_char()).collect();
                labels.entry(t).or_default().push(col);
            }
        }
        for (t, ls) in labels {
            let _ = writeln!(out, "  q{s} -> q{t} [label=\"{}\"];", ls.join(","));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_exact() {
        for rel in [
            AutomaticRelation::equality(),
            AutomaticRelation::strict_prefix(),
            AutomaticRelation::empty(2),
            AutomaticRelation::universe(0),
        ] {
            let text = write_dfa(&rel);
            let back = parse_dfa(&text).unwrap();
            assert_eq!(back, rel);
            assert_eq!(write_dfa(&back), text);
        }
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_dfa("arity 1 states 1 initial 0\naccept 0\ntrans 0 X 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_dfa("arity 1 states 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn dot_mentions_every_live_state() {
        let dot = to_dot(&AutomaticRelation::strict_prefix());
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("doublecircle"));
    }
}

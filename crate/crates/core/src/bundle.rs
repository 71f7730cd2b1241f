//! Directory bundles: a `manifest` file plus one automaton file per relation.
//!
//! ```text
//! group <kind> identity <word>...
//! acg target <kind> coefs <c1,c2,...|none>
//! asm <evaluator line>|asm graph-only
//! ```
//! A group bundle has the first line, an ACG bundle the first two, an ASM
//! bundle all three. Empty words are written `_`.

use std::fs;
use std::path::Path;

use crate::acg::{target_kind, Acg};
use crate::asm::{Asm, Evaluator};
use crate::automata::{parse_dfa, write_dfa, AutomaticRelation, Word};
use crate::error::{Error, Result};
use crate::groups::{FaGroup, GroupKind};

const MANIFEST: &str = "manifest";

fn word_token(w: &Word) -> String {
    if w.is_empty() {
        "_".to_string()
    } else {
        w.to_string()
    }
}

fn write_rel(dir: &Path, name: &str, rel: &AutomaticRelation) -> Result<()> {
    fs::write(dir.join(format!("{name}.aut")), write_dfa(rel))?;
    Ok(())
}

fn read_rel(dir: &Path, name: &str) -> Result<AutomaticRelation> {
    let path = dir.join(format!("{name}.aut"));
    let text = fs::read_to_string(&path)?;
    parse_dfa(&text).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        e => e,
    })
}

/// Manifest lines with their 1-based line numbers.
fn manifest_lines(dir: &Path) -> Result<Vec<(usize, String)>> {
    let text = fs::read_to_string(dir.join(MANIFEST))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

fn manifest_line(lines: &[(usize, String)], key: &str) -> Result<(usize, String)> {
    lines
        .iter()
        .find_map(|(n, l)| l.strip_prefix(key).filter(|r| r.starts_with(' ')).map(|r| (*n, r.trim().to_string())))
        .ok_or_else(|| Error::parse(lines.last().map_or(1, |l| l.0), format!("manifest lacks a `{key}` line")))
}

fn group_line(g: &FaGroup) -> String {
    let ids: Vec<String> = g.identity().iter().map(word_token).collect();
    format!("group {} identity {}", g.kind(), ids.join(" "))
}

fn acg_line(a: &Acg) -> Result<String> {
    let coefs = match a.coefs() {
        Some(c) => c.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
        None => "none".to_string(),
    };
    Ok(format!("acg target {} coefs {coefs}", target_kind(a.target())?))
}

fn asm_line(d: &Asm) -> String {
    match d.evaluator() {
        Some(e) => e.to_string(),
        None => "asm graph-only".to_string(),
    }
}

fn write_manifest(dir: &Path, lines: &[String]) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(MANIFEST), lines.join("\n") + "\n")?;
    Ok(())
}

fn write_group_files(dir: &Path, g: &FaGroup) -> Result<()> {
    write_rel(dir, "domain", g.domain())?;
    write_rel(dir, "add", g.add())?;
    write_rel(dir, "neg", g.neg())
}

fn write_acg_files(dir: &Path, a: &Acg) -> Result<()> {
    write_group_files(dir, a.group())?;
    write_rel(dir, "valuation", a.valuation())?;
    write_rel(dir, "positive", a.positive_cone())?;
    write_rel(dir, "kernel", a.kernel())
}

pub fn save_group(dir: &Path, g: &FaGroup) -> Result<()> {
    write_manifest(dir, &[group_line(g)])?;
    write_group_files(dir, g)
}

pub fn save_acg(dir: &Path, a: &Acg) -> Result<()> {
    write_manifest(dir, &[group_line(a.group()), acg_line(a)?])?;
    write_acg_files(dir, a)
}

pub fn save_asm(dir: &Path, d: &Asm) -> Result<()> {
    write_manifest(dir, &[group_line(d.acg().group()), acg_line(d.acg())?, asm_line(d)])?;
    write_acg_files(dir, d.acg())?;
    write_rel(dir, "graph", d.graph())
}

fn group_from(dir: &Path, lines: &[(usize, String)]) -> Result<FaGroup> {
    let (n, rest) = manifest_line(lines, "group")?;
    let (kind, ids) = rest
        .split_once(" identity ")
        .ok_or_else(|| Error::parse(n, "expected `group <kind> identity <words>`"))?;
    let kind = kind.parse::<GroupKind>().map_err(|e| Error::parse(n, e.to_string()))?;
    let identity = ids
        .split_whitespace()
        .map(|t| t.parse::<Word>().map_err(|e| Error::parse(n, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    FaGroup::from_parts(
        kind,
        read_rel(dir, "domain")?,
        read_rel(dir, "add")?,
        read_rel(dir, "neg")?,
        identity,
    )
}

fn acg_from(dir: &Path, lines: &[(usize, String)]) -> Result<Acg> {
    let group = group_from(dir, lines)?;
    let (n, rest) = manifest_line(lines, "acg")?;
    let toks: Vec<&str> = rest.split_whitespace().collect();
    let ["target", target, "coefs", coefs] = toks.as_slice() else {
        return Err(Error::parse(n, "expected `acg target <kind> coefs <list>`"));
    };
    let target = target
        .parse::<GroupKind>()
        .ok()
        .and_then(|k| k.int_layout())
        .ok_or_else(|| Error::parse(n, format!("target `{target}` is not an integer group")))?;
    let coefs = match *coefs {
        "none" => None,
        list => Some(
            list.split(',')
                .map(|c| c.parse::<i64>().map_err(|_| Error::parse(n, format!("bad coefficient `{c}`"))))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    Acg::from_parts(
        group,
        target,
        read_rel(dir, "valuation")?,
        read_rel(dir, "positive")?,
        read_rel(dir, "kernel")?,
        coefs,
    )
}

pub fn load_group(dir: &Path) -> Result<FaGroup> {
    group_from(dir, &manifest_lines(dir)?)
}

pub fn load_acg(dir: &Path) -> Result<Acg> {
    acg_from(dir, &manifest_lines(dir)?)
}

pub fn load_asm(dir: &Path) -> Result<Asm> {
    let lines = manifest_lines(dir)?;
    let acg = acg_from(dir, &lines)?;
    let (n, rest) = manifest_line(&lines, "asm")?;
    let eval = if rest == "graph-only" {
        None
    } else {
        let line = format!("asm {rest}");
        Some(line.parse::<Evaluator>().map_err(|e| Error::parse(n, e.to_string()))?)
    };
    Asm::new(acg, read_rel(dir, "graph")?, eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::DEFAULT_BUDGET;
    use crate::groups::{make_int_group, make_madic_group, product_group};

    #[test]
    fn group_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for g in [
            make_int_group(),
            make_madic_group(2).unwrap(),
            product_group(&make_int_group(), &make_int_group()).unwrap(),
        ] {
            save_group(dir.path(), &g).unwrap();
            assert_eq!(load_group(dir.path()).unwrap(), g);
        }
    }

    #[test]
    fn asm_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let d = Asm::forbidden_word(&Word::from("00"), DEFAULT_BUDGET).unwrap();
        save_asm(dir.path(), &d).unwrap();
        let text = fs::read_to_string(dir.path().join(MANIFEST)).unwrap();
        assert!(text.contains("asm forbidden-word w=00 n=2 q=4/3 k=3 scale=27 root=32"), "{text}");
        assert_eq!(load_asm(dir.path()).unwrap(), d);
        // an ASM bundle also reads as an ACG and a group bundle
        assert_eq!(&load_acg(dir.path()).unwrap(), d.acg());
        assert_eq!(&load_group(dir.path()).unwrap(), d.acg().group());
    }

    #[test]
    fn evaluator_lines_round_trip() {
        let a = Evaluator::Constant((-3).into());
        let b = Evaluator::ForbiddenWord(crate::asm::ForbiddenWord::new(&Word::from("01")).unwrap());
        let s = Evaluator::Sum(Box::new(a.clone()), Box::new(Evaluator::Sum(Box::new(b.clone()), Box::new(a.clone()))));
        for e in [a, b, s] {
            assert_eq!(e.to_string().parse::<Evaluator>().unwrap(), e);
        }
    }

    #[test]
    fn malformed_bundles_report_lines() {
        let dir = tempfile::tempdir().unwrap();
        save_group(dir.path(), &make_int_group()).unwrap();
        fs::write(dir.path().join(MANIFEST), "# comment\ngroup int ident 0\n").unwrap();
        assert!(matches!(load_group(dir.path()), Err(Error::Parse { line: 2, .. })));
        save_group(dir.path(), &make_int_group()).unwrap();
        fs::write(dir.path().join("add.aut"), "arity 3 states 1 initial 0\ntrans 0 0 0\n").unwrap();
        assert!(matches!(load_group(dir.path()), Err(Error::Parse { line: 2, .. })));
        assert!(load_acg(dir.path()).is_err());
    }
}

//! Prefix S-expression syntax:
//! `(forall x (exists y (atom Add x y x)))`, `(and f g ...)`, `(or f g ...)`,
//! `(not f)`, `(implies f g)`, `(eq x y)`, `true`, `false`.

use super::Formula;
use crate::error::{Error, Result};

#[derive(Debug)]
enum Sexp {
    Sym(String),
    List(Vec<Sexp>),
}

fn tokenize(src: &str) -> Vec<String> {
    src.replace('(', " ( ").replace(')', " ) ").split_whitespace().map(str::to_string).collect()
}

fn read(tokens: &[String], pos: &mut usize) -> Result<Sexp> {
    let tok = tokens.get(*pos).ok_or_else(|| Error::parse(1, "unexpected end of formula"))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                    None => return Err(Error::parse(1, "unbalanced parentheses")),
                }
            }
        }
        ")" => Err(Error::parse(1, "unexpected `)`")),
        s => Ok(Sexp::Sym(s.to_string())),
    }
}

fn sym(s: &Sexp) -> Result<&str> {
    match s {
        Sexp::Sym(v) => Ok(v),
        Sexp::List(_) => Err(Error::parse(1, "expected a name")),
    }
}

fn to_formula(s: &Sexp) -> Result<Formula> {
    let items = match s {
        Sexp::Sym(v) if v == "true" => return Ok(Formula::True),
        Sexp::Sym(v) if v == "false" => return Ok(Formula::False),
        Sexp::Sym(v) => return Err(Error::parse(1, format!("unexpected symbol `{v}`"))),
        Sexp::List(items) => items,
    };
    let (head, args) = items.split_first().ok_or_else(|| Error::parse(1, "empty list"))?;
    let arity_err = |op: &str| Error::parse(1, format!("wrong number of arguments to `{op}`"));
    match sym(head)? {
        "atom" => {
            let (name, vars) = args.split_first().ok_or_else(|| arity_err("atom"))?;
            let vars = vars.iter().map(sym).collect::<Result<Vec<_>>>()?;
            Ok(Formula::atom(sym(name)?, &vars))
        }
        "eq" => match args {
            [x, y] => Ok(Formula::eq(sym(x)?, sym(y)?)),
            _ => Err(arity_err("eq")),
        },
        "not" => match args {
            [f] => Ok(Formula::not(to_formula(f)?)),
            _ => Err(arity_err("not")),
        },
        "implies" => match args {
            [a, b] => Ok(Formula::implies(to_formula(a)?, to_formula(b)?)),
            _ => Err(arity_err("implies")),
        },
        op @ ("and" | "or") => {
            let fs = args.iter().map(to_formula).collect::<Result<Vec<_>>>()?;
            Ok(if op == "and" { Formula::and_all(fs) } else { Formula::or_all(fs) })
        }
        op @ ("exists" | "forall") => match args {
            [v, f] => {
                let body = to_formula(f)?;
                Ok(if op == "exists" {
                    Formula::exists(sym(v)?, body)
                } else {
                    Formula::forall(sym(v)?, body)
                })
            }
            _ => Err(arity_err(op)),
        },
        other => Err(Error::parse(1, format!("unknown connective `{other}`"))),
    }
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    let tokens = tokenize(src);
    let mut pos = 0;
    let s = read(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::parse(1, "trailing input after formula"));
    }
    to_formula(&s)
}

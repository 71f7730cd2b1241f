//! First-order formulas over named automatic relations, compiled to automata.
//!
//! Quantifiers range over all binary words. Each subformula compiles to a
//! relation whose tracks are its free variables in order of first
//! occurrence; atoms are aligned by cylindrification and track reordering,
//! `exists` is projection and `forall x` is `not exists x not`. Every
//! intermediate result is minimized and checked against the state budget.

mod parse;

use std::collections::BTreeMap;

pub use parse::parse_formula;

use crate::automata::AutomaticRelation;
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom { rel: String, vars: Vec<String> },
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom<S: AsRef<str>>(rel: &str, vars: &[S]) -> Formula {
        Formula::Atom {
            rel: rel.to_string(),
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
        }
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Eq(x.to_string(), y.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// Right-nested conjunction; `True` when empty.
    pub fn and_all(fs: Vec<Formula>) -> Formula {
        fs.into_iter().rev().reduce(|acc, f| Formula::and(f, acc)).unwrap_or(Formula::True)
    }

    pub fn or_all(fs: Vec<Formula>) -> Formula {
        fs.into_iter().rev().reduce(|acc, f| Formula::or(f, acc)).unwrap_or(Formula::False)
    }

    pub fn exists(var: &str, f: Formula) -> Formula {
        Formula::Exists(var.to_string(), Box::new(f))
    }

    pub fn forall(var: &str, f: Formula) -> Formula {
        Formula::Forall(var.to_string(), Box::new(f))
    }

    pub fn exists_all<S: AsRef<str>>(vars: &[S], f: Formula) -> Formula {
        vars.iter().rev().fold(f, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    pub fn forall_all<S: AsRef<str>>(vars: &[S], f: Formula) -> Formula {
        vars.iter().rev().fold(f, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let add = |v: &String, bound: &Vec<String>, out: &mut Vec<String>| {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { vars, .. } => vars.iter().for_each(|v| add(v, bound, out)),
            Formula::Eq(x, y) => {
                add(x, bound, out);
                add(y, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

/// Registry of named relations plus the state budget used when compiling.
#[derive(Debug, Clone)]
pub struct Structure {
    relations: BTreeMap<String, AutomaticRelation>,
    budget: usize,
}

impl Default for Structure {
    fn default() -> Self {
        Self::with_budget(DEFAULT_BUDGET)
    }
}

struct Compiled {
    rel: AutomaticRelation,
    vars: Vec<String>,
}

impl Structure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: usize) -> Self {
        Structure {
            relations: BTreeMap::new(),
            budget,
        }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn set_budget(&mut self, budget: usize) {
        self.budget = budget;
    }

    /// Registers `rel` under `name`, replacing any previous binding.
    pub fn insert(&mut self, name: &str, rel: AutomaticRelation) -> Option<AutomaticRelation> {
        self.relations.insert(name.to_string(), rel)
    }

    pub fn get(&self, name: &str) -> Option<&AutomaticRelation> {
        self.relations.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    /// Compiles `f` to a relation whose tracks follow `free_vars`.
    pub fn compile<S: AsRef<str>>(&self, f: &Formula, free_vars: &[S]) -> Result<AutomaticRelation> {
        let target: Vec<String> = free_vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in target.iter().enumerate() {
            if target[..i].contains(v) {
                return Err(Error::param(format!("variable `{v}` listed twice")));
            }
        }
        let missing: Vec<String> = f.free_vars().into_iter().filter(|v| !target.contains(v)).collect();
        if !missing.is_empty() {
            return Err(Error::FreeVariables(missing));
        }
        let c = self.compile_inner(f)?;
        self.align(c, &target)
    }

    /// Decides a sentence.
    pub fn decide(&self, sentence: &Formula) -> Result<bool> {
        let free = sentence.free_vars();
        if !free.is_empty() {
            return Err(Error::FreeVariables(free));
        }
        let rel = self.compile(sentence, &[] as &[&str])?;
        rel.accepts(&[])
    }

    fn checked(&self, rel: AutomaticRelation) -> Result<AutomaticRelation> {
        if rel.num_states() > self.budget {
            return Err(Error::BudgetExceeded { limit: self.budget });
        }
        Ok(rel)
    }

    fn align(&self, c: Compiled, target: &[String]) -> Result<AutomaticRelation> {
        let Compiled { mut rel, mut vars } = c;
        for v in target {
            if !vars.contains(v) {
                rel = self.checked(rel.cylindrify(rel.arity())?)?;
                vars.push(v.clone());
            }
        }
        let perm: Vec<usize> = target
            .iter()
            .map(|v| vars.iter().position(|u| u == v).expect("aligned variable"))
            .collect();
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(rel);
        }
        rel.reorder(&perm)
    }

    fn compile_inner(&self, f: &Formula) -> Result<Compiled> {
        match f {
            Formula::True => Ok(Compiled {
                rel: AutomaticRelation::universe(0),
                vars: Vec::new(),
            }),
            Formula::False => Ok(Compiled {
                rel: AutomaticRelation::empty(0),
                vars: Vec::new(),
            }),
            Formula::Eq(x, y) if x == y => Ok(Compiled {
                rel: AutomaticRelation::universe(1),
                vars: vec![x.clone()],
            }),
            Formula::Eq(x, y) => Ok(Compiled {
                rel: AutomaticRelation::equality(),
                vars: vec![x.clone(), y.clone()],
            }),
            Formula::Atom { rel, vars } => self.compile_atom(rel, vars),
            Formula::Not(g) => {
                let c = self.compile_inner(g)?;
                Ok(Compiled {
                    rel: self.checked(c.rel.complement())?,
                    vars: c.vars,
                })
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let ca = self.compile_inner(a)?;
                let cb = self.compile_inner(b)?;
                let mut vars = ca.vars.clone();
                for v in &cb.vars {
                    if !vars.contains(v) {
                        vars.push(v.clone());
                    }
                }
                let ra = self.align(ca, &vars)?;
                let rb = self.align(cb, &vars)?;
                let rel = if matches!(f, Formula::And(..)) {
                    ra.intersect(&rb)?
                } else {
                    ra.union(&rb)?
                };
                Ok(Compiled {
                    rel: self.checked(rel)?,
                    vars,
                })
            }
            Formula::Exists(x, g) => {
                let c = self.compile_inner(g)?;
                match c.vars.iter().position(|v| v == x) {
                    None => Ok(c),
                    Some(pos) => {
                        let rel = self.checked(c.rel.project_within(pos, self.budget)?)?;
                        let mut vars = c.vars;
                        vars.remove(pos);
                        Ok(Compiled { rel, vars })
                    }
                }
            }
            Formula::Forall(x, g) => {
                let dual = Formula::not(Formula::exists(x, Formula::not((**g).clone())));
                self.compile_inner(&dual)
            }
        }
    }

    fn compile_atom(&self, name: &str, vars: &[String]) -> Result<Compiled> {
        let base = self
            .relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
        if base.arity() != vars.len() {
            return Err(Error::ArityMismatch {
                expected: base.arity(),
                found: vars.len(),
            });
        }
        let mut rel = base.clone();
        let mut vars = vars.to_vec();
        // Repeated variables: constrain the tracks equal, then drop the copy.
        while let Some((i, j)) = first_repeat(&vars) {
            let k = rel.arity();
            let mut eq = AutomaticRelation::equality();
            for _ in 2..k {
                eq = eq.cylindrify(eq.arity())?;
            }
            let mut perm: Vec<usize> = Vec::with_capacity(k);
            let mut rest = 2..k;
            for t in 0..k {
                perm.push(if t == i {
                    0
                } else if t == j {
                    1
                } else {
                    rest.next().expect("enough tracks")
                });
            }
            let eq = eq.reorder(&perm)?;
            rel = self.checked(rel.intersect(&eq)?.project_within(j, self.budget)?)?;
            vars.remove(j);
        }
        Ok(Compiled { rel, vars })
    }
}

fn first_repeat(vars: &[String]) -> Option<(usize, usize)> {
    for j in 0..vars.len() {
        if let Some(i) = vars[..j].iter().position(|v| *v == vars[j]) {
            return Some((i, j));
        }
    }
    None
}

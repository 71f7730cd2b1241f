use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{concat_vars, element_vars, FaGroup};
use crate::automata::Word;
use crate::error::{Error, Result};
use crate::fo::{Formula, DEFAULT_BUDGET};

/// Enumerated checks visit at most this many tuples; larger spaces are
/// sampled with a fixed seed.
pub const SAMPLE_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Decided exactly by automaton emptiness.
    Automaton,
    /// Checked on elements whose words have length at most the bound.
    Bounded(usize),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Automaton => write!(f, "automaton"),
            Method::Bounded(l) => write!(f, "bounded(L={l})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub method: Method,
    pub passed: bool,
    /// A violating assignment when the check failed.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupReport {
    pub checks: Vec<AxiomCheck>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

impl fmt::Display for GroupReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed { "ok" } else { "FAIL" };
            write!(f, "{:<14} {:<6} {}", c.name, verdict, c.method)?;
            if let Some(d) = &c.detail {
                write!(f, "  {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub(crate) fn show_tuple(t: &[Word]) -> String {
    let parts: Vec<String> = t.iter().map(Word::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Deterministic list of index tuples: all of them if few, else a sample.
pub(crate) fn index_tuples(n: usize, k: usize, cap: usize) -> Vec<Vec<usize>> {
    let total = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total <= cap as u128 {
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0usize; k];
        if n == 0 {
            return out;
        }
        loop {
            out.push(cur.clone());
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < n {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..cap).map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect()).collect()
}

struct Checker<'a> {
    g: &'a FaGroup,
    budget: usize,
    max_len: usize,
    elems: Vec<Vec<Word>>,
    report: GroupReport,
}

impl Checker<'_> {
    /// Compiles `violation` over `vars`; an empty result passes. On budget
    /// overflow falls back to `bounded`, which returns a counterexample.
    fn check(
        &mut self,
        name: &'static str,
        violation: Formula,
        vars: &[String],
        bounded: impl Fn(&Self) -> Result<Option<String>>,
    ) -> Result<()> {
        let st = self.g.structure(self.budget);
        let (method, detail) = match st.compile(&violation, vars) {
            Ok(rel) => (Method::Automaton, rel.some_member().map(|t| show_tuple(&t))),
            Err(Error::BudgetExceeded { .. }) => (Method::Bounded(self.max_len), bounded(self)?),
            Err(e) => return Err(e),
        };
        self.report.checks.push(AxiomCheck {
            name,
            method,
            passed: detail.is_none(),
            detail,
        });
        Ok(())
    }

    fn pairs(&self) -> Vec<(&[Word], &[Word])> {
        index_tuples(self.elems.len(), 2, SAMPLE_CAP)
            .into_iter()
            .map(|t| (self.elems[t[0]].as_slice(), self.elems[t[1]].as_slice()))
            .collect()
    }
}

/// Checks the abelian group laws of `g` with the default state budget.
pub fn verify_group_axioms(g: &FaGroup, max_len: usize) -> Result<GroupReport> {
    verify_group_axioms_with_budget(g, max_len, DEFAULT_BUDGET)
}

/// Functionality is decided on the automata directly. Closure, identity,
/// inverse and commutativity are decided by automata when they fit in
/// `budget`, else checked on elements up to `max_len`. Associativity is
/// always checked on enumerated triples.
pub fn verify_group_axioms_with_budget(g: &FaGroup, max_len: usize, budget: usize) -> Result<GroupReport> {
    let w = g.width();
    let (x, y, z, e) = (
        element_vars("x", w),
        element_vars("y", w),
        element_vars("z", w),
        element_vars("e", w),
    );
    let d = |v: &[String]| Formula::atom("D", v);
    let add = |a: &[String], b: &[String], c: &[String]| Formula::atom("Add", &concat_vars(&[a, b, c]));
    let neg = |a: &[String], b: &[String]| Formula::atom("Neg", &concat_vars(&[a, b]));
    let mut c = Checker {
        g,
        budget,
        max_len,
        elems: g.domain().enumerate(max_len),
        report: GroupReport::default(),
    };

    let has_id = g.contains(g.identity());
    c.report.checks.push(AxiomCheck {
        name: "identity-word",
        method: Method::Automaton,
        passed: has_id,
        detail: (!has_id).then(|| show_tuple(g.identity())),
    });

    // Add is total on D x D and lands in D.
    let not_total = Formula::and_all(vec![d(&x), d(&y), Formula::not(Formula::exists_all(&z, add(&x, &y, &z)))]);
    let outside = Formula::and(
        add(&x, &y, &z),
        Formula::not(Formula::and_all(vec![d(&x), d(&y), d(&z)])),
    );
    c.check(
        "closure",
        Formula::or(
            Formula::exists_all(&z, not_total),
            Formula::exists_all(&z, outside),
        ),
        &concat_vars(&[&x, &y]),
        |c| {
            for (a, b) in c.pairs() {
                match c.g.sum(a, b)? {
                    Some(s) if c.g.contains(&s) => {}
                    _ => return Ok(Some(format!("{} + {}", show_tuple(a), show_tuple(b)))),
                }
            }
            Ok(None)
        },
    )?;

    let add_fn = g.add().is_function(&(2 * w..3 * w).collect::<Vec<_>>())?;
    let neg_fn = g.neg().is_function(&(w..2 * w).collect::<Vec<_>>())?;
    for (name, ok) in [("add-function", add_fn), ("neg-function", neg_fn)] {
        c.report.checks.push(AxiomCheck {
            name,
            method: Method::Automaton,
            passed: ok,
            detail: None,
        });
    }

    let neg_bad = Formula::or(
        Formula::and(d(&x), Formula::not(Formula::exists_all(&y, neg(&x, &y)))),
        Formula::exists_all(&y, Formula::and(neg(&x, &y), Formula::not(Formula::and(d(&x), d(&y))))),
    );
    c.check("neg-total", neg_bad, &x, |c| {
        for a in &c.elems {
            match c.g.negate(a)? {
                Some(n) if c.g.contains(&n) => {}
                _ => return Ok(Some(show_tuple(a))),
            }
        }
        Ok(None)
    })?;

    let e_atom = Formula::atom("E", &e);
    c.check(
        "identity",
        Formula::exists_all(
            &e,
            Formula::and_all(vec![
                e_atom.clone(),
                d(&x),
                Formula::not(Formula::and(add(&x, &e, &x), add(&e, &x, &x))),
            ]),
        ),
        &x,
        |c| {
            let id = c.g.identity();
            for a in &c.elems {
                if c.g.sum(a, id)?.as_deref() != Some(a.as_slice()) || c.g.sum(id, a)?.as_deref() != Some(a.as_slice())
                {
                    return Ok(Some(show_tuple(a)));
                }
            }
            Ok(None)
        },
    )?;

    c.check(
        "inverse",
        Formula::exists_all(
            &e,
            Formula::and_all(vec![
                e_atom,
                d(&x),
                Formula::not(Formula::exists_all(&y, Formula::and(neg(&x, &y), add(&x, &y, &e)))),
            ]),
        ),
        &x,
        |c| {
            for a in &c.elems {
                let ok = match c.g.negate(a)? {
                    Some(n) => c.g.sum(a, &n)?.as_deref() == Some(c.g.identity()),
                    None => false,
                };
                if !ok {
                    return Ok(Some(show_tuple(a)));
                }
            }
            Ok(None)
        },
    )?;

    c.check(
        "commutativity",
        Formula::and(add(&x, &y, &z), Formula::not(add(&y, &x, &z))),
        &concat_vars(&[&x, &y, &z]),
        |c| {
            for (a, b) in c.pairs() {
                if c.g.sum(a, b)? != c.g.sum(b, a)? {
                    return Ok(Some(format!("{} + {}", show_tuple(a), show_tuple(b))));
                }
            }
            Ok(None)
        },
    )?;

    let detail = associativity_counterexample(&c)?;
    c.report.checks.push(AxiomCheck {
        name: "associativity",
        method: Method::Bounded(max_len),
        passed: detail.is_none(),
        detail,
    });
    Ok(c.report)
}

fn associativity_counterexample(c: &Checker<'_>) -> Result<Option<String>> {
    let mut memo = std::collections::HashMap::new();
    let mut sum = |a: &[Word], b: &[Word]| -> Result<Option<Vec<Word>>> {
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = memo.get(&key) {
            return Ok(Clone::clone(v));
        }
        let v = c.g.sum(a, b)?;
        memo.insert(key, v.clone());
        Ok(v)
    };
    for t in index_tuples(c.elems.len(), 3, SAMPLE_CAP) {
        let (a, b, d) = (&c.elems[t[0]], &c.elems[t[1]], &c.elems[t[2]]);
        let left = match sum(a, b)? {
            Some(ab) => sum(&ab, d)?,
            None => None,
        };
        let right = match sum(b, d)? {
            Some(bd) => sum(a, &bd)?,
            None => None,
        };
        if left.is_none() || left != right {
            return Ok(Some(format!("{} {} {}", show_tuple(a), show_tuple(b), show_tuple(d))));
        }
    }
    Ok(None)
}

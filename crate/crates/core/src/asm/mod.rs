//! Automatic supermartingales: capital functions whose graph is automatic,
//! with values in an automatic capital group.

mod forbidden;
mod fsg;
mod success;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

pub use forbidden::{ForbiddenWord, MAX_FORBIDDEN_LEN};
pub use fsg::{fsg_capital, fsg_capitals, fsg_step_function, Fsg, FsgStep};
pub use success::{succeeds_on_up, success_language, ultimately_periodic_success, SuccessVerdict};

use crate::acg::{check_compatibility, Acg};
use crate::automata::{AutomaticRelation, Word};
use crate::error::{Error, Result};
use crate::fo::{Formula, Structure};
use crate::groups::{concat_vars, element_vars, make_separated_int_group, product_group, Method};

/// Exact capital used to cross-check a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluator {
    Constant(BigInt),
    ForbiddenWord(ForbiddenWord),
    Sum(Box<Evaluator>, Box<Evaluator>),
}

impl Evaluator {
    pub fn capital(&self, sigma: &Word) -> BigInt {
        match self {
            Evaluator::Constant(c) => c.clone(),
            Evaluator::ForbiddenWord(f) => f.capital(sigma),
            Evaluator::Sum(a, b) => a.capital(sigma) + b.capital(sigma),
        }
    }
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluator::Constant(c) => write!(f, "asm constant value={c}"),
            Evaluator::ForbiddenWord(fw) => write!(f, "{}", fw.manifest()),
            Evaluator::Sum(a, b) => write!(f, "asm sum({a}; {b})"),
        }
    }
}

impl std::str::FromStr for Evaluator {
    type Err = Error;

    /// Reads back a manifest line; derived parameters after `w=` are
    /// recomputed rather than trusted.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("bad evaluator `{s}`"));
        let body = s.trim().strip_prefix("asm ").ok_or_else(bad)?;
        if let Some(v) = body.strip_prefix("constant value=") {
            return v.parse().map(Evaluator::Constant).map_err(|_| bad());
        }
        if let Some(rest) = body.strip_prefix("forbidden-word w=") {
            let w = rest.split_whitespace().next().ok_or_else(bad)?;
            return Ok(Evaluator::ForbiddenWord(ForbiddenWord::new(&w.parse()?)?));
        }
        let inner = body
            .strip_prefix("sum(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut depth = 0i32;
        for (i, c) in inner.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ';' if depth == 0 => {
                    let (a, b) = (inner[..i].parse()?, inner[i + 1..].parse()?);
                    return Ok(Evaluator::Sum(Box::new(a), Box::new(b)));
                }
                _ => {}
            }
        }
        Err(bad())
    }
}

/// Capital function `d: words -> C`, given by the graph on tracks
/// `(sigma, d(sigma))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Asm {
    acg: Acg,
    graph: AutomaticRelation,
    eval: Option<Evaluator>,
}

impl Asm {
    pub fn new(acg: Acg, graph: AutomaticRelation, eval: Option<Evaluator>) -> Result<Self> {
        let k = 1 + acg.width();
        if graph.arity() != k {
            return Err(Error::ArityMismatch {
                expected: k,
                found: graph.arity(),
            });
        }
        Ok(Asm { acg, graph, eval })
    }

    /// `d(sigma) = c` for every word.
    pub fn constant(acg: Acg, c: &[Word]) -> Result<Self> {
        if !acg.group().contains(c) {
            return Err(Error::param("constant is not a group element"));
        }
        let value = acg.eval(c).ok_or_else(|| Error::param("constant has no value"))?;
        let graph = AutomaticRelation::singleton(c).cylindrify(0)?;
        Self::new(acg, graph, Some(Evaluator::Constant(value)))
    }

    /// The supermartingale that doubles on every block free of `w` and dies
    /// on the first aligned occurrence of `w`, over the separated integers.
    pub fn forbidden_word(w: &Word, budget: usize) -> Result<Self> {
        let f = ForbiddenWord::new(w)?;
        let group = make_separated_int_group(f.block())?;
        let acg = Acg::linear(group, &[1])?;
        let graph = f.graph(budget)?;
        Self::new(acg, graph, Some(Evaluator::ForbiddenWord(f)))
    }

    pub fn acg(&self) -> &Acg {
        &self.acg
    }

    pub fn graph(&self) -> &AutomaticRelation {
        &self.graph
    }

    pub fn evaluator(&self) -> Option<&Evaluator> {
        self.eval.as_ref()
    }

    /// `d(sigma)` read from the graph.
    pub fn value(&self, sigma: &Word) -> Result<Option<Vec<Word>>> {
        let w = self.acg.width();
        self.graph.apply(std::slice::from_ref(sigma), &(1..=w).collect::<Vec<_>>())
    }

    /// `pi(d(sigma))` read from the graph.
    pub fn graph_capital(&self, sigma: &Word) -> Result<Option<BigInt>> {
        Ok(self.value(sigma)?.and_then(|x| self.acg.eval(&x)))
    }

    /// `pi(d(sigma))`, from the evaluator when there is one.
    pub fn capital(&self, sigma: &Word) -> Result<Option<BigInt>> {
        match &self.eval {
            Some(e) => Ok(Some(e.capital(sigma))),
            None => self.graph_capital(sigma),
        }
    }

    fn structure(&self, budget: usize) -> Result<Structure> {
        let mut st = self.acg.structure(budget);
        st.insert("G", self.graph.clone());
        st.insert("Less", self.acg.value_less(budget)?);
        st.insert("App0", AutomaticRelation::append(0));
        st.insert("App1", AutomaticRelation::append(1));
        Ok(st)
    }
}

/// Outcome of a fairness or sign check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub method: Method,
    /// A violating word when the check failed.
    pub witness: Option<Word>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds { "holds" } else { "violated" };
        match self.method {
            Method::Automaton => write!(f, "{verdict} (automaton)")?,
            Method::Bounded(l) => write!(f, "{verdict} (bounded verification only, |sigma| <= {l})")?,
        }
        if let Some(w) = &self.witness {
            write!(f, " at sigma={w}")?;
        }
        Ok(())
    }
}

fn verdict(method: Method, witness: Option<Word>) -> Verdict {
    Verdict {
        holds: witness.is_none(),
        method,
        witness,
    }
}

/// Shortest word, up to `bound`, at which `bad` holds.
fn search(bound: usize, mut bad: impl FnMut(&Word) -> Result<bool>) -> Result<Option<Word>> {
    for sigma in Word::all_up_to(bound) {
        if bad(&sigma)? {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

/// `d(sigma0) + d(sigma1) <= 2 d(sigma)` checked on graph values of all
/// words up to `bound`. Missing values count as violations.
pub fn check_fairness_bounded(asm: &Asm, bound: usize) -> Result<Option<Word>> {
    search(bound, |s| {
        let vals = [s.clone(), s.pushed(0), s.pushed(1)].map(|w| asm.graph_capital(&w));
        Ok(match vals {
            [Ok(Some(a)), Ok(Some(b)), Ok(Some(c))] => b + c > &a + &a,
            _ => true,
        })
    })
}

/// Decides `d(sigma0) + d(sigma1) <= d(sigma) + d(sigma)` for all `sigma`
/// by emptiness of the compiled violation set. Falls back to
/// [`check_fairness_bounded`] when compilation exceeds `budget`.
pub fn verify_fairness(asm: &Asm, budget: usize, bound: usize) -> Result<Verdict> {
    match fairness_violations(asm, budget) {
        Ok(rel) => Ok(verdict(Method::Automaton, rel.some_member().map(|t| t[0].clone()))),
        Err(Error::BudgetExceeded { .. }) => Ok(verdict(Method::Bounded(bound), check_fairness_bounded(asm, bound)?)),
        Err(e) => Err(e),
    }
}

/// Words at which fairness fails.
pub fn fairness_violations(asm: &Asm, budget: usize) -> Result<AutomaticRelation> {
    let mut st = asm.structure(budget)?;
    let w = asm.acg.width();
    let v = |n: &str| element_vars(n, w);
    let (a, b, c, u, d) = (v("a"), v("b"), v("c"), v("u"), v("d"));
    let s = ["s".to_string()];
    let t = ["t".to_string()];
    for (name, app) in [("Child0", "App0"), ("Child1", "App1")] {
        let child = Formula::exists(
            "t",
            Formula::and(
                Formula::atom(app, &["s", "t"]),
                Formula::atom("G", &concat_vars(&[&t, &b])),
            ),
        );
        let rel = st.compile(&child, &concat_vars(&[&s, &b]))?;
        st.insert(name, rel);
    }
    // u = d(s0) + d(s1)
    let children = Formula::exists_all(
        &b,
        Formula::and(
            Formula::atom("Child0", &concat_vars(&[&s, &b])),
            Formula::exists_all(
                &c,
                Formula::and(
                    Formula::atom("Child1", &concat_vars(&[&s, &c])),
                    Formula::atom("Add", &concat_vars(&[&b, &c, &u])),
                ),
            ),
        ),
    );
    let children = st.compile(&children, &concat_vars(&[&s, &u]))?;
    st.insert("Children", children);
    // d = d(s) + d(s)
    let double = Formula::exists_all(
        &a,
        Formula::and(
            Formula::atom("G", &concat_vars(&[&s, &a])),
            Formula::atom("Add", &concat_vars(&[&a, &a, &d])),
        ),
    );
    let double = st.compile(&double, &concat_vars(&[&s, &d]))?;
    st.insert("Double", double);
    let bad = Formula::exists_all(
        &u,
        Formula::and(
            Formula::atom("Children", &concat_vars(&[&s, &u])),
            Formula::exists_all(
                &d,
                Formula::and(
                    Formula::atom("Double", &concat_vars(&[&s, &d])),
                    Formula::atom("Less", &concat_vars(&[&d, &u])),
                ),
            ),
        ),
    );
    st.compile(&bad, &s)
}

/// Decides `d(sigma) >= 0` for all `sigma`, falling back to words up to
/// `bound` when compilation exceeds `budget`.
pub fn verify_nonneg(asm: &Asm, budget: usize, bound: usize) -> Result<Verdict> {
    let compiled = (|| {
        let mut st = asm.structure(budget)?;
        let w = asm.acg.width();
        let (a, z) = (element_vars("a", w), element_vars("z", w));
        st.insert("Zero", AutomaticRelation::singleton(asm.acg.group().identity()));
        let negative = Formula::exists_all(
            &z,
            Formula::and(Formula::atom("Zero", &z), Formula::atom("Less", &concat_vars(&[&a, &z]))),
        );
        let neg_rel = st.compile(&negative, &a)?;
        st.insert("Negative", neg_rel);
        let bad = Formula::exists_all(
            &a,
            Formula::and(
                Formula::atom("G", &concat_vars(&[&["s".to_string()], &a])),
                Formula::atom("Negative", &a),
            ),
        );
        st.compile(&bad, &["s"])
    })();
    match compiled {
        Ok(rel) => Ok(verdict(Method::Automaton, rel.some_member().map(|t| t[0].clone()))),
        Err(Error::BudgetExceeded { .. }) => {
            let witness = search(bound, |s| Ok(asm.graph_capital(s)?.is_none_or(|v| v < BigInt::zero())))?;
            Ok(verdict(Method::Bounded(bound), witness))
        }
        Err(e) => Err(e),
    }
}

/// `pi(d(w))` for every prefix `w` of `prefix`, shortest first.
pub fn capital_trace(asm: &Asm, prefix: &Word) -> Result<Vec<BigInt>> {
    (0..=prefix.len())
        .map(|i| {
            asm.capital(&prefix.prefix(i))?
                .ok_or_else(|| Error::param(format!("no capital at prefix of length {i}")))
        })
        .collect()
}

/// Pointwise sum `sigma -> (d1(sigma), d2(sigma))` over the product group
/// with valuation `pi1 + pi2`.
///
/// The kernel and positive cone come from the compatibility relations:
/// `(x, y)` is in the kernel when `(x, -y)` is in `r_eq`, and positive when
/// `(-x, y)` is in `r_lt`. Both valuations must target the same integer
/// presentation, and the relations are checked on elements up to length 4.
pub fn asm_sum(
    d1: &Asm,
    d2: &Asm,
    r_eq: &AutomaticRelation,
    r_lt: &AutomaticRelation,
    budget: usize,
) -> Result<Asm> {
    let (a1, a2) = (&d1.acg, &d2.acg);
    if a1.target() != a2.target() {
        return Err(Error::Incompatible("valuations target different integer presentations".into()));
    }
    if !check_compatibility(a1, a2, r_eq, r_lt, 4)?.passed() {
        return Err(Error::Incompatible("compatibility relations disagree with the valuations".into()));
    }
    let group = product_group(a1.group(), a2.group())?;
    let (w1, w2) = (a1.width(), a2.width());
    let (x, y, x2, y2) = (
        element_vars("x", w1),
        element_vars("y", w2),
        element_vars("p", w1),
        element_vars("q", w2),
    );
    let xy = concat_vars(&[&x, &y]);
    let mut st = Structure::with_budget(budget);
    st.insert("Eq", r_eq.clone());
    st.insert("Lt", r_lt.clone());
    st.insert("Neg1", a1.group().neg().clone());
    st.insert("Neg2", a2.group().neg().clone());
    st.insert("V1", a1.valuation().clone());
    st.insert("V2", a2.valuation().clone());
    st.insert("D", group.domain().clone());
    let target = crate::acg::target_kind(a1.target())
        .and_then(|k| crate::groups::build_group(&k))?;
    st.insert("TAdd", target.add().clone());
    st.insert("G1", d1.graph.clone());
    st.insert("G2", d2.graph.clone());
    let kernel = st.compile(
        &Formula::and(
            Formula::atom("D", &xy),
            Formula::exists_all(
                &y2,
                Formula::and(
                    Formula::atom("Neg2", &concat_vars(&[&y, &y2])),
                    Formula::atom("Eq", &concat_vars(&[&x, &y2])),
                ),
            ),
        ),
        &xy,
    )?;
    let positive = st.compile(
        &Formula::and(
            Formula::atom("D", &xy),
            Formula::exists_all(
                &x2,
                Formula::and(
                    Formula::atom("Neg1", &concat_vars(&[&x, &x2])),
                    Formula::atom("Lt", &concat_vars(&[&x2, &y])),
                ),
            ),
        ),
        &xy,
    )?;
    // value(x) = a, value(y) = b, a + b = z
    let part = Formula::exists(
        "a",
        Formula::and(
            Formula::atom("V1", &concat_vars(&[&x, &["a".to_string()]])),
            Formula::atom("TAdd", &["a", "b", "z"]),
        ),
    );
    let part = st.compile(&part, &concat_vars(&[&x, &["b".to_string(), "z".to_string()]]))?;
    st.insert("Part", part);
    let valuation = st.compile(
        &Formula::and(
            Formula::atom("D", &xy),
            Formula::exists(
                "b",
                Formula::and(
                    Formula::atom("V2", &concat_vars(&[&y, &["b".to_string()]])),
                    Formula::atom("Part", &concat_vars(&[&x, &["b".to_string(), "z".to_string()]])),
                ),
            ),
        ),
        &concat_vars(&[&xy, &["z".to_string()]]),
    )?;
    let s = ["s".to_string()];
    let graph = st.compile(
        &Formula::and(
            Formula::atom("G1", &concat_vars(&[&s, &x])),
            Formula::atom("G2", &concat_vars(&[&s, &y])),
        ),
        &concat_vars(&[&s, &xy]),
    )?;
    let coefs = match (a1.coefs(), a2.coefs()) {
        (Some(c1), Some(c2)) => Some([c1, c2].concat()),
        _ => None,
    };
    let acg = Acg::from_parts(group, a1.target(), valuation, positive, kernel, coefs)?;
    let eval = match (&d1.eval, &d2.eval) {
        (Some(e1), Some(e2)) => Some(Evaluator::Sum(Box::new(e1.clone()), Box::new(e2.clone()))),
        _ => None,
    };
    Asm::new(acg, graph, eval)
}

#[cfg(test)]
mod tests;

use std::fmt;

use super::Acg;
use crate::automata::{tuple_cmp, AutomaticRelation, Word};
use crate::error::{Error, Result};
use crate::fo::{Formula, Structure};
use crate::groups::{concat_vars, element_vars, show_tuple};

/// A group element or one of the two infinities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendedValue {
    Element(Vec<Word>),
    PlusInfinity,
    MinusInfinity,
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Element(x) => write!(f, "{}", show_tuple(x)),
            ExtendedValue::PlusInfinity => write!(f, "+inf"),
            ExtendedValue::MinusInfinity => write!(f, "-inf"),
        }
    }
}

/// The order induced by the positive cone, with its compiled structure.
#[derive(Debug, Clone)]
pub struct Order<'a> {
    acg: &'a Acg,
    st: Structure,
    minus_inf: Vec<Word>,
    plus_inf: Vec<Word>,
}

/// The two length-lex least tuples outside the domain.
fn reserved_tuples(domain: &AutomaticRelation) -> (Vec<Word>, Vec<Word>) {
    let outside = domain.complement();
    let mut len = 1;
    loop {
        let mut found = outside.enumerate(len);
        if found.len() >= 2 {
            found.sort_by(|a, b| tuple_cmp(a, b));
            let plus = found.swap_remove(1);
            let minus = found.swap_remove(0);
            return (minus, plus);
        }
        len += 1;
    }
}

impl<'a> Order<'a> {
    /// Compiles `x < y <=> y - x in C+`. Refuses a nontrivial kernel, where
    /// this is only a preorder.
    pub fn new(acg: &'a Acg, budget: usize) -> Result<Self> {
        if !acg.has_trivial_kernel() {
            return Err(Error::Incompatible(
                "order needs a trivial kernel; quotient it first".into(),
            ));
        }
        let w = acg.width();
        let mut st = acg.structure(budget);
        let (x, y) = (element_vars("x", w), element_vars("y", w));
        let xy = concat_vars(&[&x, &y]);
        let less = acg.value_less(budget)?;
        st.insert("Less", less);
        let same = Formula::and_all(x.iter().zip(&y).map(|(a, b)| Formula::eq(a, b)).collect());
        let le = st.compile(
            &Formula::or(
                Formula::atom("Less", &xy),
                Formula::and(Formula::atom("D", &x), same),
            ),
            &xy,
        )?;
        st.insert("Le", le);
        let (minus_inf, plus_inf) = reserved_tuples(acg.group().domain());
        st.insert("MinusInf", AutomaticRelation::singleton(&minus_inf));
        st.insert("PlusInf", AutomaticRelation::singleton(&plus_inf));
        Ok(Order {
            acg,
            st,
            minus_inf,
            plus_inf,
        })
    }

    pub fn less(&self) -> &AutomaticRelation {
        self.st.get("Less").expect("compiled")
    }

    pub fn less_eq(&self) -> &AutomaticRelation {
        self.st.get("Le").expect("compiled")
    }

    /// Reserved tuple standing for minus infinity.
    pub fn minus_infinity(&self) -> &[Word] {
        &self.minus_inf
    }

    /// Reserved tuple standing for plus infinity.
    pub fn plus_infinity(&self) -> &[Word] {
        &self.plus_inf
    }

    fn vars(&self, n: &str) -> Vec<String> {
        element_vars(n, self.acg.width())
    }

    /// `U(D) = { x in domain : d <= x for all d in D }`.
    pub fn upper_bounds(&self, set: &AutomaticRelation) -> Result<AutomaticRelation> {
        let mut st = self.st.clone();
        st.insert("S", set.clone());
        let (x, d) = (self.vars("x"), self.vars("d"));
        let f = Formula::and(
            Formula::atom("D", &x),
            Formula::not(Formula::exists_all(
                &d,
                Formula::and_all(vec![
                    Formula::atom("S", &d),
                    Formula::atom("D", &d),
                    Formula::atom("Less", &concat_vars(&[&x, &d])),
                ]),
            )),
        );
        st.compile(&f, &x)
    }

    /// Least upper bound of `set`, which is minus infinity when the set has
    /// no domain elements and plus infinity when it has no upper bound.
    pub fn limsup_of_set(&self, set: &AutomaticRelation) -> Result<ExtendedValue> {
        if set.intersect(self.acg.group().domain())?.is_empty() {
            return Ok(ExtendedValue::MinusInfinity);
        }
        let ub = self.upper_bounds(set)?;
        if ub.is_empty() {
            return Ok(ExtendedValue::PlusInfinity);
        }
        let mut st = self.st.clone();
        st.insert("U", ub);
        let (x, y) = (self.vars("x"), self.vars("y"));
        let least = Formula::and(
            Formula::atom("U", &x),
            Formula::not(Formula::exists_all(
                &y,
                Formula::and(Formula::atom("U", &y), Formula::atom("Less", &concat_vars(&[&y, &x]))),
            )),
        );
        let min = st.compile(&least, &x)?;
        Ok(min.some_member().map_or(ExtendedValue::PlusInfinity, ExtendedValue::Element))
    }

    /// Graph of `c -> limsup { d : R(c, d) }` on the domain, with the
    /// infinities written as the reserved tuples.
    pub fn limsup_image_function(&self, rel: &AutomaticRelation) -> Result<AutomaticRelation> {
        let w = self.acg.width();
        if rel.arity() != 2 * w {
            return Err(Error::ArityMismatch {
                expected: 2 * w,
                found: rel.arity(),
            });
        }
        let mut st = self.st.clone();
        let (c, d, v, y) = (self.vars("c"), self.vars("d"), self.vars("v"), self.vars("y"));
        let cd = concat_vars(&[&c, &d]);
        st.insert("Rin", rel.clone());
        let image = st.compile(
            &Formula::and_all(vec![Formula::atom("Rin", &cd), Formula::atom("D", &c), Formula::atom("D", &d)]),
            &cd,
        )?;
        st.insert("R", image);
        // UB(c, y): y bounds the image of c from above.
        let ub = Formula::and(
            Formula::atom("D", &y),
            Formula::not(Formula::exists_all(
                &d,
                Formula::and(Formula::atom("R", &cd), Formula::atom("Less", &concat_vars(&[&y, &d]))),
            )),
        );
        let cy = concat_vars(&[&c, &y]);
        let ub_rel = st.compile(&ub, &cy)?;
        st.insert("UB", ub_rel);
        let nonempty = Formula::exists_all(&d, Formula::atom("R", &cd));
        let bounded = Formula::exists_all(&y, Formula::atom("UB", &cy));
        let cv = concat_vars(&[&c, &v]);
        let least = Formula::and(
            Formula::atom("UB", &cv),
            Formula::not(Formula::exists_all(
                &y,
                Formula::and(Formula::atom("UB", &cy), Formula::atom("Less", &concat_vars(&[&y, &v]))),
            )),
        );
        let graph = Formula::and(
            Formula::atom("D", &c),
            Formula::or_all(vec![
                Formula::and(Formula::not(nonempty.clone()), Formula::atom("MinusInf", &v)),
                Formula::and_all(vec![nonempty.clone(), Formula::not(bounded.clone()), Formula::atom("PlusInf", &v)]),
                Formula::and_all(vec![nonempty, bounded, least]),
            ]),
        );
        st.compile(&graph, &cv)
    }

    /// Reads a value of a graph built by
    /// [`limsup_image_function`](Self::limsup_image_function).
    pub fn read_value(&self, graph: &AutomaticRelation, c: &[Word]) -> Result<Option<ExtendedValue>> {
        let w = self.acg.width();
        let Some(v) = graph.apply(c, &(w..2 * w).collect::<Vec<_>>())? else {
            return Ok(None);
        };
        Ok(Some(if v == self.minus_inf {
            ExtendedValue::MinusInfinity
        } else if v == self.plus_inf {
            ExtendedValue::PlusInfinity
        } else {
            ExtendedValue::Element(v)
        }))
    }
}

/// Strict order of a trivial-kernel presentation.
pub fn order_less(acg: &Acg, budget: usize) -> Result<AutomaticRelation> {
    Ok(Order::new(acg, budget)?.less().clone())
}

pub fn upper_bounds(acg: &Acg, set: &AutomaticRelation, budget: usize) -> Result<AutomaticRelation> {
    Order::new(acg, budget)?.upper_bounds(set)
}

pub fn limsup_of_set(acg: &Acg, set: &AutomaticRelation, budget: usize) -> Result<ExtendedValue> {
    Order::new(acg, budget)?.limsup_of_set(set)
}

pub fn limsup_image_function(acg: &Acg, rel: &AutomaticRelation, budget: usize) -> Result<AutomaticRelation> {
    Order::new(acg, budget)?.limsup_image_function(rel)
}

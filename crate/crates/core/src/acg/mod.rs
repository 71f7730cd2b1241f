//! Automatic capital groups: an FA-presented group with a homomorphism into
//! the integers whose kernel and positive cone are automatic.

mod order;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use order::{
    limsup_image_function, limsup_of_set, order_less, upper_bounds, ExtendedValue, Order,
};

use crate::automata::{AutomaticRelation, Word};
use crate::error::{Error, Result};
use crate::fo::{Formula, Structure, DEFAULT_BUDGET};
use crate::groups::{
    build_group, concat_vars, element_vars, index_tuples, linear_relation, show_tuple, AxiomCheck, FaGroup,
    GroupKind, GroupReport, IntLayout, Method, Term, SAMPLE_CAP,
};

/// Integer kind presenting values in `layout`.
pub fn target_kind(layout: IntLayout) -> Result<GroupKind> {
    match layout {
        IntLayout { radix: 2, bits: 1, stride: 1 } => Ok(GroupKind::Int),
        IntLayout { radix: 2, bits: 1, stride } => Ok(GroupKind::Separated(stride)),
        _ => Err(Error::Incompatible("valuations must target binary integers".into())),
    }
}

/// Positive integers in `layout`: canonical, sign bit 0, at least one digit.
pub fn positive_integers(layout: IntLayout) -> AutomaticRelation {
    let shape = AutomaticRelation::language((0u8, 0u8), |&(len, _), b| Some((len.saturating_add(1).min(2), b)), |&(len, last)| {
        len == 2 && last == 0
    });
    layout.language().intersect(&shape).expect("unary")
}

/// Integer leaves of a group kind, in track order.
fn leaves(kind: &GroupKind, out: &mut Vec<GroupKind>) {
    match kind {
        GroupKind::Product(a, b) => {
            leaves(a, out);
            leaves(b, out);
        }
        k => out.push(k.clone()),
    }
}

/// An automatic capital group presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Acg {
    group: FaGroup,
    target: IntLayout,
    valuation: AutomaticRelation,
    coefs: Option<Vec<i64>>,
    positive: AutomaticRelation,
    kernel: AutomaticRelation,
}

impl Acg {
    /// Valuation `x -> sum coefs[i] * x_i` on a group whose components are
    /// integers in one common layout, which is also the target layout.
    pub fn linear(group: FaGroup, coefs: &[i64]) -> Result<Acg> {
        let mut ls = Vec::new();
        leaves(group.kind(), &mut ls);
        if ls.len() != coefs.len() {
            return Err(Error::ArityMismatch {
                expected: ls.len(),
                found: coefs.len(),
            });
        }
        let layouts: Vec<IntLayout> = ls
            .iter()
            .map(|k| k.int_layout().ok_or_else(|| Error::Incompatible(format!("{k} is not an integer group"))))
            .collect::<Result<_>>()?;
        let target = layouts[0];
        if layouts.iter().any(|l| *l != target) {
            return Err(Error::Incompatible("components use different layouts".into()));
        }
        let w = group.width();
        let mut terms: Vec<Term> = coefs
            .iter()
            .enumerate()
            .map(|(i, &coef)| Term {
                coef,
                int_track: i,
                frac_track: None,
            })
            .collect();
        terms.push(Term {
            coef: -1,
            int_track: w,
            frac_track: None,
        });
        let raw = linear_relation(target, w + 1, &terms, DEFAULT_BUDGET)?;
        let mut st = Structure::new();
        st.insert("L", raw);
        st.insert("D", group.domain().clone());
        st.insert("T", target.language());
        let x = element_vars("x", w);
        let f = Formula::and_all(vec![
            Formula::atom("L", &concat_vars(&[&x, &["z".to_string()]])),
            Formula::atom("D", &x),
            Formula::atom("T", &["z"]),
        ]);
        let valuation = st.compile(&f, &concat_vars(&[&x, &["z".to_string()]]))?;
        Self::from_valuation(group, target, valuation, Some(coefs.to_vec()))
    }

    /// Derives the positive cone and kernel from a valuation graph on
    /// tracks `(x, pi(x))`.
    pub fn from_valuation(
        group: FaGroup,
        target: IntLayout,
        valuation: AutomaticRelation,
        coefs: Option<Vec<i64>>,
    ) -> Result<Acg> {
        target_kind(target)?;
        let w = group.width();
        if valuation.arity() != w + 1 {
            return Err(Error::ArityMismatch {
                expected: w + 1,
                found: valuation.arity(),
            });
        }
        let mut st = Structure::new();
        st.insert("V", valuation.clone());
        st.insert("P", positive_integers(target));
        st.insert("Z", AutomaticRelation::singleton(&[target.encode(&BigInt::zero())]));
        let x = element_vars("x", w);
        let xz = concat_vars(&[&x, &["z".to_string()]]);
        let pos = Formula::exists("z", Formula::and(Formula::atom("V", &xz), Formula::atom("P", &["z"])));
        let ker = Formula::exists("z", Formula::and(Formula::atom("V", &xz), Formula::atom("Z", &["z"])));
        let positive = st.compile(&pos, &x)?;
        let kernel = st.compile(&ker, &x)?;
        Ok(Acg {
            group,
            target,
            valuation,
            coefs,
            positive,
            kernel,
        })
    }

    /// Assembles a presentation from given automata, checking arities only.
    pub fn from_parts(
        group: FaGroup,
        target: IntLayout,
        valuation: AutomaticRelation,
        positive: AutomaticRelation,
        kernel: AutomaticRelation,
        coefs: Option<Vec<i64>>,
    ) -> Result<Acg> {
        target_kind(target)?;
        let w = group.width();
        for (rel, k) in [(&valuation, w + 1), (&positive, w), (&kernel, w)] {
            if rel.arity() != k {
                return Err(Error::ArityMismatch {
                    expected: k,
                    found: rel.arity(),
                });
            }
        }
        Ok(Acg {
            group,
            target,
            valuation,
            coefs,
            positive,
            kernel,
        })
    }

    pub fn group(&self) -> &FaGroup {
        &self.group
    }

    pub fn width(&self) -> usize {
        self.group.width()
    }

    pub fn target(&self) -> IntLayout {
        self.target
    }

    /// Graph of the valuation on tracks `(x, pi(x))`.
    pub fn valuation(&self) -> &AutomaticRelation {
        &self.valuation
    }

    pub fn coefs(&self) -> Option<&[i64]> {
        self.coefs.as_deref()
    }

    pub fn positive_cone(&self) -> &AutomaticRelation {
        &self.positive
    }

    pub fn kernel(&self) -> &AutomaticRelation {
        &self.kernel
    }

    pub fn has_trivial_kernel(&self) -> bool {
        self.kernel == AutomaticRelation::singleton(self.group.identity())
    }

    /// Exact valuation: the linear form when known, else the graph.
    pub fn eval(&self, x: &[Word]) -> Option<BigInt> {
        match &self.coefs {
            Some(c) => {
                let vals = self.group.decode(x)?;
                let mut sum = BigInt::zero();
                for (v, &k) in vals.iter().zip(c) {
                    if !v.is_integer() {
                        return None;
                    }
                    sum += v.to_integer() * k;
                }
                Some(sum)
            }
            None => self.eval_graph(x),
        }
    }

    /// Valuation read off the graph automaton.
    pub fn eval_graph(&self, x: &[Word]) -> Option<BigInt> {
        let z = self.valuation.apply(x, &[self.width()]).ok()??;
        self.target.decode(&z[0])
    }

    /// `pi(x) < pi(y)` on domain elements, i.e. `y - x` in the positive
    /// cone. A total order only when the kernel is trivial.
    pub fn value_less(&self, budget: usize) -> Result<AutomaticRelation> {
        let w = self.width();
        let st = self.structure(budget);
        let (x, y, t) = (element_vars("x", w), element_vars("y", w), element_vars("t", w));
        st.compile(
            &Formula::and_all(vec![
                Formula::atom("D", &x),
                Formula::atom("D", &y),
                Formula::exists_all(
                    &t,
                    Formula::and(
                        Formula::atom("Add", &concat_vars(&[&x, &t, &y])),
                        Formula::atom("Pos", &t),
                    ),
                ),
            ]),
            &concat_vars(&[&x, &y]),
        )
    }

    /// Group relations plus `V` (valuation), `Pos` and `K`.
    pub fn structure(&self, budget: usize) -> Structure {
        let mut st = self.group.structure(budget);
        st.insert("V", self.valuation.clone());
        st.insert("Pos", self.positive.clone());
        st.insert("K", self.kernel.clone());
        st
    }
}

fn push(report: &mut GroupReport, name: &'static str, method: Method, detail: Option<String>) {
    report.checks.push(AxiomCheck {
        name,
        method,
        passed: detail.is_none(),
        detail,
    });
}

/// Checks the capital-group axioms.
///
/// Unboundedness of the image uses the derived criterion that the positive
/// cone is nonempty: the image of a homomorphism into the integers is a
/// subgroup `dZ`, unbounded in both directions as soon as it contains a
/// positive value. Kernel, cone and graph are compared with the exact
/// valuation on elements up to `max_len`, and additivity on sampled pairs.
pub fn validate_acg(acg: &Acg, max_len: usize) -> Result<GroupReport> {
    let mut report = GroupReport::default();
    let unbounded = acg.positive.intersect(acg.group.domain())?;
    push(
        &mut report,
        "unbounded",
        Method::Automaton,
        unbounded.is_empty().then(|| "positive cone is empty".to_string()),
    );
    let elems = acg.group.domain().enumerate(max_len);
    let bounded = Method::Bounded(max_len);
    let mut ker_bad = None;
    let mut pos_bad = None;
    let mut graph_bad = None;
    for x in &elems {
        let Some(v) = acg.eval(x) else {
            graph_bad.get_or_insert_with(|| format!("no value at {}", show_tuple(x)));
            continue;
        };
        if acg.kernel.accepts(x)? != v.is_zero() {
            ker_bad.get_or_insert_with(|| show_tuple(x));
        }
        if acg.positive.accepts(x)? != v.is_positive() {
            pos_bad.get_or_insert_with(|| show_tuple(x));
        }
        if acg.coefs.is_some() && acg.eval_graph(x).as_ref() != Some(&v) {
            graph_bad.get_or_insert_with(|| show_tuple(x));
        }
    }
    push(&mut report, "kernel", bounded, ker_bad);
    push(&mut report, "positive-cone", bounded, pos_bad);
    push(&mut report, "valuation", bounded, graph_bad);
    let mut hom_bad = None;
    for t in index_tuples(elems.len(), 2, SAMPLE_CAP) {
        let (x, y) = (&elems[t[0]], &elems[t[1]]);
        let ok = match (acg.group.sum(x, y)?, acg.eval(x), acg.eval(y)) {
            (Some(s), Some(a), Some(b)) => acg.eval(&s) == Some(a + b),
            _ => false,
        };
        if !ok {
            hom_bad = Some(format!("{} + {}", show_tuple(x), show_tuple(y)));
            break;
        }
    }
    push(&mut report, "homomorphism", bounded, hom_bad);
    Ok(report)
}

/// Relation `sum_j signs[j] * pi(x_j) = 0` over `signs.len()` elements,
/// for a linear valuation. Digits are not range checked.
fn valuation_equation(acg: &Acg, coefs: &[i64], signs: &[i64]) -> Result<AutomaticRelation> {
    let w = acg.width();
    let terms: Vec<Term> = signs
        .iter()
        .enumerate()
        .flat_map(|(j, &s)| {
            coefs.iter().enumerate().map(move |(i, &c)| Term {
                coef: s * c,
                int_track: j * w + i,
                frac_track: None,
            })
        })
        .collect();
    linear_relation(acg.target, signs.len() * w, &terms, DEFAULT_BUDGET)
}

/// Quotients out the kernel.
///
/// Two elements are equivalent when their difference lies in the kernel,
/// that is when their values agree, and each class is represented by its
/// length-lex least element. The sum of two representatives is the
/// representative whose value is the sum of their values, and negation
/// likewise. For a linear valuation these are equations on digits; otherwise
/// they are composed through the valuation graph.
pub fn quotient_trivialize(acg: &Acg, budget: usize) -> Result<Acg> {
    if acg.has_trivial_kernel() {
        return Ok(acg.clone());
    }
    let w = acg.width();
    let mut st = acg.structure(budget);
    st.insert("LL", AutomaticRelation::ll_less(w));
    let v = |n: &str| element_vars(n, w);
    let (x, y, z, s) = (v("x"), v("y"), v("z"), v("s"));
    let (c, xy, xyz) = (["c".to_string()], concat_vars(&[&x, &y]), concat_vars(&[&x, &y, &z]));
    match &acg.coefs {
        Some(coefs) => {
            st.insert("Sim", valuation_equation(acg, coefs, &[1, -1])?);
            st.insert("Sum", valuation_equation(acg, coefs, &[1, 1, -1])?);
            st.insert("Opp", valuation_equation(acg, coefs, &[1, 1])?);
        }
        None => {
            let sim = Formula::exists(
                "c",
                Formula::and(
                    Formula::atom("V", &concat_vars(&[&x, &c])),
                    Formula::atom("V", &concat_vars(&[&y, &c])),
                ),
            );
            let sim = st.compile(&sim, &xy)?;
            st.insert("Sim", sim);
            // W(x, y, c): c is the value of x + y.
            let sum_value = Formula::exists_all(
                &s,
                Formula::and(
                    Formula::atom("Add", &concat_vars(&[&x, &y, &s])),
                    Formula::atom("V", &concat_vars(&[&s, &c])),
                ),
            );
            let sum_value = st.compile(&sum_value, &concat_vars(&[&x, &y, &c]))?;
            st.insert("W", sum_value);
            let sum = Formula::exists(
                "c",
                Formula::and(
                    Formula::atom("W", &concat_vars(&[&x, &y, &c])),
                    Formula::atom("V", &concat_vars(&[&z, &c])),
                ),
            );
            let sum = st.compile(&sum, &xyz)?;
            st.insert("Sum", sum);
            let opp = Formula::exists_all(
                &s,
                Formula::and(
                    Formula::atom("Neg", &concat_vars(&[&x, &s])),
                    Formula::atom("Sim", &concat_vars(&[&s, &y])),
                ),
            );
            let opp = st.compile(&opp, &xy)?;
            st.insert("Opp", opp);
        }
    }
    let rep = Formula::and(
        Formula::atom("D", &x),
        Formula::not(Formula::exists_all(
            &y,
            Formula::and_all(vec![
                Formula::atom("D", &y),
                Formula::atom("Sim", &xy),
                Formula::atom("LL", &concat_vars(&[&y, &x])),
            ]),
        )),
    );
    let domain = st.compile(&rep, &x)?;
    st.insert("Rep", domain.clone());
    let add = st.compile(
        &Formula::and_all(vec![
            Formula::atom("Rep", &x),
            Formula::atom("Rep", &y),
            Formula::atom("Rep", &z),
            Formula::atom("Sum", &xyz),
        ]),
        &xyz,
    )?;
    let neg = st.compile(
        &Formula::and_all(vec![Formula::atom("Rep", &x), Formula::atom("Rep", &y), Formula::atom("Opp", &xy)]),
        &xy,
    )?;
    let zero_class = st.compile(&Formula::and(Formula::atom("Rep", &x), Formula::atom("K", &x)), &x)?;
    let identity = zero_class
        .some_member()
        .ok_or_else(|| Error::Incompatible("kernel has no representative".into()))?;
    let group = FaGroup::from_parts(acg.group.kind().clone(), domain.clone(), add, neg, identity)?;
    let restrict = |r: &AutomaticRelation, extra: usize| -> Result<AutomaticRelation> {
        let mut cyl = domain.clone();
        for _ in 0..extra {
            cyl = cyl.cylindrify(cyl.arity())?;
        }
        r.intersect(&cyl)
    };
    Ok(Acg {
        valuation: restrict(&acg.valuation, 1)?,
        positive: restrict(&acg.positive, 0)?,
        kernel: restrict(&acg.kernel, 0)?,
        group,
        target: acg.target,
        coefs: acg.coefs.clone(),
    })
}

/// Rebuilds the integer group presenting the target layout.
pub fn target_group(acg: &Acg) -> Result<FaGroup> {
    build_group(&target_kind(acg.target)?)
}

/// Checks `R_eq(x, y) <=> pi1(x) = pi2(y)` and `R_lt(x, y) <=> pi1(x) <
/// pi2(y)` on elements up to `max_len`.
pub fn check_compatibility(
    a1: &Acg,
    a2: &Acg,
    r_eq: &AutomaticRelation,
    r_lt: &AutomaticRelation,
    max_len: usize,
) -> Result<GroupReport> {
    let (w1, w2) = (a1.width(), a2.width());
    for r in [r_eq, r_lt] {
        if r.arity() != w1 + w2 {
            return Err(Error::ArityMismatch {
                expected: w1 + w2,
                found: r.arity(),
            });
        }
    }
    let e1 = a1.group.domain().enumerate(max_len);
    let e2 = a2.group.domain().enumerate(max_len);
    let v1: Vec<Option<BigInt>> = e1.iter().map(|x| a1.eval(x)).collect();
    let v2: Vec<Option<BigInt>> = e2.iter().map(|y| a2.eval(y)).collect();
    let mut eq_bad = None;
    let mut lt_bad = None;
    for i in 0..e1.len() {
        for j in 0..e2.len() {
            let (Some(p), Some(q)) = (&v1[i], &v2[j]) else { continue };
            let pair: Vec<Word> = e1[i].iter().chain(&e2[j]).cloned().collect();
            if eq_bad.is_none() && r_eq.accepts(&pair)? != (p == q) {
                eq_bad = Some(show_tuple(&pair));
            }
            if lt_bad.is_none() && r_lt.accepts(&pair)? != (p < q) {
                lt_bad = Some(show_tuple(&pair));
            }
        }
    }
    let mut report = GroupReport::default();
    push(&mut report, "equal-values", Method::Bounded(max_len), eq_bad);
    push(&mut report, "less-values", Method::Bounded(max_len), lt_bad);
    Ok(report)
}

/// Composes the two valuation graphs through their common target:
/// `R_eq(x, y) = exists z (V1(x, z) and V2(y, z))` and `R_lt` likewise with
/// the target order.
pub fn build_compatibility(a1: &Acg, a2: &Acg, budget: usize) -> Result<(AutomaticRelation, AutomaticRelation)> {
    if a1.target != a2.target {
        return Err(Error::Incompatible("valuations target different integer presentations".into()));
    }
    let target = target_group(a1)?;
    let mut st = target.structure(budget);
    st.insert("P", positive_integers(a1.target));
    st.insert("V1", a1.valuation.clone());
    st.insert("V2", a2.valuation.clone());
    let tless = st.compile(
        &Formula::exists(
            "t",
            Formula::and(Formula::atom("Add", &["a", "t", "b"]), Formula::atom("P", &["t"])),
        ),
        &["a", "b"],
    )?;
    st.insert("TLess", tless);
    let x = element_vars("x", a1.width());
    let y = element_vars("y", a2.width());
    let z = ["z".to_string()];
    let u = ["u".to_string()];
    let free = concat_vars(&[&x, &y]);
    let eq = Formula::exists(
        "z",
        Formula::and(
            Formula::atom("V1", &concat_vars(&[&x, &z])),
            Formula::atom("V2", &concat_vars(&[&y, &z])),
        ),
    );
    let lt = Formula::exists_all(
        &["z", "u"],
        Formula::and_all(vec![
            Formula::atom("V1", &concat_vars(&[&x, &z])),
            Formula::atom("V2", &concat_vars(&[&y, &u])),
            Formula::atom("TLess", &["z", "u"]),
        ]),
    );
    Ok((st.compile(&eq, &free)?, st.compile(&lt, &free)?))
}

//! FA-presented abelian groups: binary integers, nk-separated integers,
//! m-adic rationals and products.
//!
//! An element is a tuple of words (one word for the integer groups, an
//! integer track and a fraction track for `R_m`, and the concatenated
//! tuples for products). Relations on elements use the tracks of each
//! element side by side.

mod axioms;
mod linear;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use axioms::{verify_group_axioms, verify_group_axioms_with_budget, AxiomCheck, GroupReport, Method, SAMPLE_CAP};
pub(crate) use axioms::{index_tuples, show_tuple};
pub use linear::{linear_relation, IntLayout, Term};

use crate::automata::{AutomaticRelation, Word};
use crate::error::{Error, Result};
use crate::fo::{Formula, Structure, DEFAULT_BUDGET};

pub(crate) use linear::bits_for;

/// Which presentation a group is, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Int,
    Separated(usize),
    Madic(u32),
    Product(Box<GroupKind>, Box<GroupKind>),
}

impl GroupKind {
    /// Number of words per element.
    pub fn width(&self) -> usize {
        match self {
            GroupKind::Int | GroupKind::Separated(_) => 1,
            GroupKind::Madic(_) => 2,
            GroupKind::Product(a, b) => a.width() + b.width(),
        }
    }

    /// Number of exact numbers per element.
    pub fn components(&self) -> usize {
        match self {
            GroupKind::Product(a, b) => a.components() + b.components(),
            _ => 1,
        }
    }

    /// Digit layout of the integer track, for the integer-valued kinds.
    pub fn int_layout(&self) -> Option<IntLayout> {
        match self {
            GroupKind::Int => Some(IntLayout::binary()),
            GroupKind::Separated(nk) => Some(IntLayout::separated(*nk)),
            _ => None,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Int => write!(f, "int"),
            GroupKind::Separated(nk) => write!(f, "separated({nk})"),
            GroupKind::Madic(m) => write!(f, "madic({m})"),
            GroupKind::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("bad group kind `{s}`"));
        let s = s.trim();
        if s == "int" {
            return Ok(GroupKind::Int);
        }
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        match head {
            "separated" => Ok(GroupKind::Separated(inner.parse().map_err(|_| bad())?)),
            "madic" => Ok(GroupKind::Madic(inner.parse().map_err(|_| bad())?)),
            "product" => {
                // Split at the top-level comma.
                let mut depth = 0;
                let cut = inner
                    .char_indices()
                    .find(|&(_, c)| {
                        match c {
                            '(' => depth += 1,
                            ')' => depth -= 1,
                            _ => {}
                        }
                        c == ',' && depth == 0
                    })
                    .map(|(i, _)| i)
                    .ok_or_else(bad)?;
                Ok(GroupKind::Product(
                    Box::new(inner[..cut].parse()?),
                    Box::new(inner[cut + 1..].parse()?),
                ))
            }
            _ => Err(bad()),
        }
    }
}

/// Variable names for the tracks of an element named `name`.
pub fn element_vars(name: &str, width: usize) -> Vec<String> {
    if width == 1 {
        vec![name.to_string()]
    } else {
        (0..width).map(|i| format!("{name}.{i}")).collect()
    }
}

pub(crate) fn concat_vars(parts: &[&[String]]) -> Vec<String> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// An FA-presented abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaGroup {
    kind: GroupKind,
    domain: AutomaticRelation,
    add: AutomaticRelation,
    neg: AutomaticRelation,
    identity: Vec<Word>,
}

/// Restricts every element slot of `rel` to the domain.
fn restrict(rel: &AutomaticRelation, domain: &AutomaticRelation, width: usize) -> Result<AutomaticRelation> {
    let slots = rel.arity() / width;
    let names: Vec<Vec<String>> = (0..slots).map(|i| element_vars(&format!("v{i}"), width)).collect();
    let all: Vec<String> = names.concat();
    let mut st = Structure::new();
    st.insert("R", rel.clone());
    st.insert("D", domain.clone());
    let mut parts = vec![Formula::atom("R", &all)];
    parts.extend(names.iter().map(|n| Formula::atom("D", n)));
    st.compile(&Formula::and_all(parts), &all)
}

fn frac_language(m: u32) -> AutomaticRelation {
    let bits = bits_for(m);
    AutomaticRelation::language(
        (0usize, 0u32, true),
        move |&(off, part, _), b| {
            let part = part | (u32::from(b) << off);
            if off + 1 < bits {
                Some((off + 1, part, false))
            } else if part < m {
                Some((0, 0, part != 0))
            } else {
                None
            }
        },
        |&(off, _, nz)| off == 0 && nz,
    )
}

fn int_terms(coefs: &[i64]) -> Vec<Term> {
    coefs
        .iter()
        .enumerate()
        .map(|(i, &coef)| Term {
            coef,
            int_track: i,
            frac_track: None,
        })
        .collect()
}

fn madic_terms(coefs: &[i64]) -> Vec<Term> {
    coefs
        .iter()
        .enumerate()
        .map(|(i, &coef)| Term {
            coef,
            int_track: 2 * i,
            frac_track: Some(2 * i + 1),
        })
        .collect()
}

/// Whether `d` divides some power of `m`.
fn divides_power(d: &BigInt, m: u32) -> bool {
    let m = BigInt::from(m);
    let mut d = d.abs();
    while !d.is_one() {
        let g = d.gcd(&m);
        if g.is_one() {
            return false;
        }
        d /= g;
    }
    true
}

/// Binary integers, least significant bit first, trailing sign bit.
pub fn make_int_group() -> FaGroup {
    int_like(GroupKind::Int).expect("integer group")
}

/// Integers with bit `i` at position `i * nk`, zero separators between bits
/// and a trailing sign bit.
pub fn make_separated_int_group(nk: usize) -> Result<FaGroup> {
    if nk < 1 {
        return Err(Error::param("nk must be at least 1"));
    }
    int_like(GroupKind::Separated(nk))
}

fn int_like(kind: GroupKind) -> Result<FaGroup> {
    let layout = kind.int_layout().expect("integer kind");
    let domain = layout.language();
    let add = linear_relation(layout, 3, &int_terms(&[1, 1, -1]), DEFAULT_BUDGET)?;
    let neg = linear_relation(layout, 2, &int_terms(&[1, 1]), DEFAULT_BUDGET)?;
    Ok(FaGroup {
        add: restrict(&add, &domain, 1)?,
        neg: restrict(&neg, &domain, 1)?,
        domain,
        identity: vec![layout.encode(&BigInt::zero())],
        kind,
    })
}

/// The m-adic rationals `a / m^l`: the floor on an integer track and the
/// fraction in `[0, 1)` on a second track holding base-`m` digits by
/// increasing depth.
pub fn make_madic_group(m: u32) -> Result<FaGroup> {
    if m < 2 {
        return Err(Error::param("m must be at least 2"));
    }
    let layout = IntLayout::packed(m);
    let domain = madic_domain(m)?;
    let add = linear_relation(layout, 6, &madic_terms(&[1, 1, -1]), DEFAULT_BUDGET)?;
    let neg = linear_relation(layout, 4, &madic_terms(&[1, 1]), DEFAULT_BUDGET)?;
    Ok(FaGroup {
        add: restrict(&add, &domain, 2)?,
        neg: restrict(&neg, &domain, 2)?,
        domain,
        identity: vec![Word::from("0"), Word::new()],
        kind: GroupKind::Madic(m),
    })
}

/// Canonical two-track words of `R_m`: integer part, then fraction digits.
pub fn madic_domain(m: u32) -> Result<AutomaticRelation> {
    if m < 2 {
        return Err(Error::param("m must be at least 2"));
    }
    let int_part = IntLayout::packed(m).language().cylindrify(1)?;
    let frac_part = frac_language(m).cylindrify(0)?;
    int_part.intersect(&frac_part)
}

/// Direct product; elements are the concatenated track tuples.
pub fn product_group(g1: &FaGroup, g2: &FaGroup) -> Result<FaGroup> {
    let (w1, w2) = (g1.width(), g2.width());
    let mut st = Structure::new();
    for (p, g) in [("1", g1), ("2", g2)] {
        st.insert(&format!("D{p}"), g.domain.clone());
        st.insert(&format!("Add{p}"), g.add.clone());
        st.insert(&format!("Neg{p}"), g.neg.clone());
    }
    let split = |name: &str| {
        let v = element_vars(name, w1 + w2);
        (v[..w1].to_vec(), v[w1..].to_vec(), v)
    };
    let (x1, x2, x) = split("x");
    let (y1, y2, y) = split("y");
    let (z1, z2, z) = split("z");
    let domain = st.compile(
        &Formula::and(Formula::atom("D1", &x1), Formula::atom("D2", &x2)),
        &x,
    )?;
    let add = st.compile(
        &Formula::and(
            Formula::atom("Add1", &concat_vars(&[&x1, &y1, &z1])),
            Formula::atom("Add2", &concat_vars(&[&x2, &y2, &z2])),
        ),
        &concat_vars(&[&x, &y, &z]),
    )?;
    let neg = st.compile(
        &Formula::and(
            Formula::atom("Neg1", &concat_vars(&[&x1, &y1])),
            Formula::atom("Neg2", &concat_vars(&[&x2, &y2])),
        ),
        &concat_vars(&[&x, &y]),
    )?;
    let mut identity = g1.identity.clone();
    identity.extend(g2.identity.iter().cloned());
    Ok(FaGroup {
        kind: GroupKind::Product(Box::new(g1.kind.clone()), Box::new(g2.kind.clone())),
        domain,
        add,
        neg,
        identity,
    })
}

/// Rebuilds a group of the given kind from scratch.
pub fn build_group(kind: &GroupKind) -> Result<FaGroup> {
    match kind {
        GroupKind::Int => Ok(make_int_group()),
        GroupKind::Separated(nk) => make_separated_int_group(*nk),
        GroupKind::Madic(m) => make_madic_group(*m),
        GroupKind::Product(a, b) => product_group(&build_group(a)?, &build_group(b)?),
    }
}

impl FaGroup {
    /// Assembles a presentation from given automata, checking only arities.
    pub fn from_parts(
        kind: GroupKind,
        domain: AutomaticRelation,
        add: AutomaticRelation,
        neg: AutomaticRelation,
        identity: Vec<Word>,
    ) -> Result<Self> {
        let w = kind.width();
        for (rel, k) in [(&domain, w), (&add, 3 * w), (&neg, 2 * w)] {
            if rel.arity() != k {
                return Err(Error::ArityMismatch {
                    expected: k,
                    found: rel.arity(),
                });
            }
        }
        if identity.len() != w {
            return Err(Error::ArityMismatch {
                expected: w,
                found: identity.len(),
            });
        }
        Ok(FaGroup {
            kind,
            domain,
            add,
            neg,
            identity,
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn width(&self) -> usize {
        self.kind.width()
    }

    pub fn domain(&self) -> &AutomaticRelation {
        &self.domain
    }

    /// Graph of addition on tracks `(x, y, x + y)`.
    pub fn add(&self) -> &AutomaticRelation {
        &self.add
    }

    /// Graph of negation on tracks `(x, -x)`.
    pub fn neg(&self) -> &AutomaticRelation {
        &self.neg
    }

    pub fn identity(&self) -> &[Word] {
        &self.identity
    }

    pub fn contains(&self, x: &[Word]) -> bool {
        self.domain.accepts(x).unwrap_or(false)
    }

    /// A structure with `D`, `Add`, `Neg` and the identity singleton `E`.
    pub fn structure(&self, budget: usize) -> Structure {
        let mut st = Structure::with_budget(budget);
        st.insert("D", self.domain.clone());
        st.insert("Add", self.add.clone());
        st.insert("Neg", self.neg.clone());
        st.insert("E", AutomaticRelation::singleton(&self.identity));
        st
    }

    /// `x + y` computed by running the addition automaton.
    pub fn sum(&self, x: &[Word], y: &[Word]) -> Result<Option<Vec<Word>>> {
        let w = self.width();
        let input: Vec<Word> = x.iter().chain(y).cloned().collect();
        self.add.apply(&input, &(2 * w..3 * w).collect::<Vec<_>>())
    }

    pub fn negate(&self, x: &[Word]) -> Result<Option<Vec<Word>>> {
        let w = self.width();
        self.neg.apply(x, &(w..2 * w).collect::<Vec<_>>())
    }

    /// Canonical words for exact values, one value per component.
    pub fn encode(&self, values: &[BigRational]) -> Result<Vec<Word>> {
        self.kind.encode(values)
    }

    /// Exact values of a canonical element; `None` outside the domain.
    pub fn decode(&self, x: &[Word]) -> Option<Vec<BigRational>> {
        self.kind.decode(x)
    }

    pub fn encode_int(&self, v: i64) -> Result<Vec<Word>> {
        self.encode(&[BigRational::from_integer(v.into())])
    }

    /// Value of a single-component integer element.
    pub fn decode_int(&self, x: &[Word]) -> Option<BigInt> {
        match self.decode(x)?.as_slice() {
            [v] if v.is_integer() => Some(v.to_integer()),
            _ => None,
        }
    }
}

impl GroupKind {
    /// Canonical words for exact values, without building the group.
    pub fn encode(&self, values: &[BigRational]) -> Result<Vec<Word>> {
        if values.len() != self.components() {
            return Err(Error::ArityMismatch {
                expected: self.components(),
                found: values.len(),
            });
        }
        encode_kind(self, values)
    }

    pub fn decode(&self, x: &[Word]) -> Option<Vec<BigRational>> {
        if x.len() != self.width() {
            return None;
        }
        decode_kind(self, x)
    }
}

fn encode_kind(kind: &GroupKind, values: &[BigRational]) -> Result<Vec<Word>> {
    match kind {
        GroupKind::Int | GroupKind::Separated(_) => {
            let v = &values[0];
            if !v.is_integer() {
                return Err(Error::NotEncodable(format!("{v} is not an integer")));
            }
            Ok(vec![kind.int_layout().expect("integer kind").encode(&v.to_integer())])
        }
        GroupKind::Madic(m) => encode_madic(*m, &values[0]),
        GroupKind::Product(a, b) => {
            let mut out = encode_kind(a, &values[..a.components()])?;
            out.extend(encode_kind(b, &values[a.components()..])?);
            Ok(out)
        }
    }
}

fn decode_kind(kind: &GroupKind, x: &[Word]) -> Option<Vec<BigRational>> {
    match kind {
        GroupKind::Int | GroupKind::Separated(_) => {
            let v = kind.int_layout()?.decode(&x[0])?;
            Some(vec![BigRational::from_integer(v)])
        }
        GroupKind::Madic(m) => Some(vec![decode_madic(*m, &x[0], &x[1])?]),
        GroupKind::Product(a, b) => {
            let mut out = decode_kind(a, &x[..a.width()])?;
            out.extend(decode_kind(b, &x[a.width()..])?);
            Some(out)
        }
    }
}

fn encode_madic(m: u32, v: &BigRational) -> Result<Vec<Word>> {
    if !divides_power(v.denom(), m) {
        return Err(Error::NotEncodable(format!("{v} is not {m}-adic")));
    }
    let layout = IntLayout::packed(m);
    let int = v.floor().to_integer();
    let mut frac = v - BigRational::from_integer(int.clone());
    let mut frac_word = Word::new();
    let mr = BigRational::from_integer(m.into());
    while !frac.is_zero() {
        frac *= &mr;
        let d = frac.floor().to_integer();
        frac -= BigRational::from_integer(d.clone());
        let d = d.to_u32().expect("digit");
        for i in 0..layout.bits {
            frac_word.push(((d >> i) & 1) as u8);
        }
    }
    Ok(vec![layout.encode(&int), frac_word])
}

fn decode_madic(m: u32, int_word: &Word, frac_word: &Word) -> Option<BigRational> {
    let layout = IntLayout::packed(m);
    let int = layout.decode(int_word)?;
    if !frac_word.len().is_multiple_of(layout.bits) {
        return None;
    }
    let mut frac = BigRational::zero();
    let mut scale = BigRational::one();
    let mut last = None;
    for chunk in frac_word.bits().chunks(layout.bits) {
        let d: u32 = chunk.iter().enumerate().map(|(i, &b)| u32::from(b) << i).sum();
        if d >= m {
            return None;
        }
        scale /= BigRational::from_integer(m.into());
        frac += &scale * BigRational::from_integer(d.into());
        last = Some(d);
    }
    if last == Some(0) {
        return None;
    }
    Some(BigRational::from_integer(int) + frac)
}

/// Graph of `x -> (a / m^l) * x` on `R_m`: the composition of multiplication
/// by the integer `a` with the inverse of the shift by `l` digits.
pub fn mult_by_constant(group: &FaGroup, a: i64, l: u32) -> Result<AutomaticRelation> {
    let GroupKind::Madic(m) = *group.kind() else {
        return Err(Error::Incompatible("constant multiplication needs an m-adic group".into()));
    };
    madic_mult(m, group.domain(), a, l)
}

/// [`mult_by_constant`] given only `m` and the domain of `R_m`.
pub fn madic_mult(m: u32, domain: &AutomaticRelation, a: i64, l: u32) -> Result<AutomaticRelation> {
    let layout = IntLayout::packed(m);
    let m = i64::from(m);
    let last = if l == 0 { [a, -1] } else { [a, -m] };
    let last = restrict(&linear_relation(layout, 4, &madic_terms(&last), DEFAULT_BUDGET)?, domain, 2)?;
    if l <= 1 {
        return Ok(last);
    }
    // Shift one digit at a time and scale at the end; a single relation
    // with coefficient m^l has too many carries.
    let shift = restrict(&linear_relation(layout, 4, &madic_terms(&[1, -m]), DEFAULT_BUDGET)?, domain, 2)?;
    let mut st = Structure::new();
    st.insert("Shift", shift.clone());
    let (x, y, t) = (element_vars("x", 2), element_vars("y", 2), element_vars("t", 2));
    let compose = |second: &str| {
        Formula::exists_all(
            &t,
            Formula::and(
                Formula::atom("Prev", &concat_vars(&[&x, &t])),
                Formula::atom(second, &concat_vars(&[&t, &y])),
            ),
        )
    };
    let mut rel = shift;
    for _ in 2..l {
        st.insert("Prev", rel);
        rel = st.compile(&compose("Shift"), &concat_vars(&[&x, &y]))?;
    }
    st.insert("Prev", rel);
    st.insert("Last", last);
    st.compile(&compose("Last"), &concat_vars(&[&x, &y]))
}

#[cfg(test)]
mod tests;

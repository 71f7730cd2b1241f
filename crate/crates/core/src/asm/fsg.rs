//! Finite-state gamblers with rational bets.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::automata::{AutomaticRelation, Word};
use crate::error::{Error, Result};
use crate::fo::{Formula, Structure};
use crate::groups::{concat_vars, element_vars, madic_domain, madic_mult, GroupKind};

/// A gambler `(Q, delta, beta, q0, c0)`: in state `q` it stakes the fraction
/// `beta(q)` of its capital on the next bit being 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fsg {
    names: Vec<String>,
    delta: Vec<[usize; 2]>,
    beta: Vec<BigRational>,
    q0: usize,
    c0: BigRational,
}

impl Fsg {
    pub fn new(delta: Vec<[usize; 2]>, beta: Vec<BigRational>, q0: usize, c0: BigRational) -> Result<Self> {
        let names = (0..delta.len()).map(|i| format!("q{i}")).collect();
        Self::named(names, delta, beta, q0, c0)
    }

    fn named(
        names: Vec<String>,
        delta: Vec<[usize; 2]>,
        beta: Vec<BigRational>,
        q0: usize,
        c0: BigRational,
    ) -> Result<Self> {
        let n = delta.len();
        if n == 0 || beta.len() != n {
            return Err(Error::param("need one bet per state and at least one state"));
        }
        if q0 >= n || delta.iter().flatten().any(|&q| q >= n) {
            return Err(Error::param("transition to an unknown state"));
        }
        if beta.iter().any(|b| *b < BigRational::zero() || *b > BigRational::one()) {
            return Err(Error::param("bets must lie in [0, 1]"));
        }
        if c0 <= BigRational::zero() {
            return Err(Error::param("initial capital must be positive"));
        }
        Ok(Fsg {
            names,
            delta,
            beta,
            q0,
            c0,
        })
    }

    /// One-state gambler that always bets `beta`.
    pub fn constant_bet(beta: BigRational, c0: BigRational) -> Result<Self> {
        Self::new(vec![[0, 0]], vec![beta], 0, c0)
    }

    /// Parses the line format
    /// `state <q> bet <p>/<r>`, `trans <q> <bit> <q'>`, `initial <q>`,
    /// `capital <p>/<r>`, with `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut names = Vec::new();
        let mut beta = Vec::new();
        let mut trans: Vec<(usize, String, u8, String)> = Vec::new();
        let mut initial = None;
        let mut capital = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let rational = |s: &str| -> Result<BigRational> {
                s.parse::<BigRational>()
                    .map_err(|_| Error::parse(line_no, format!("bad rational {s:?}")))
            };
            match toks.as_slice() {
                ["state", q, "bet", b] => {
                    if index.insert(q.to_string(), names.len()).is_some() {
                        return Err(Error::parse(line_no, format!("state {q} declared twice")));
                    }
                    names.push(q.to_string());
                    beta.push(rational(b)?);
                }
                ["trans", q, bit, r] => {
                    let bit = match *bit {
                        "0" => 0,
                        "1" => 1,
                        _ => return Err(Error::parse(line_no, "bit must be 0 or 1")),
                    };
                    trans.push((line_no, q.to_string(), bit, r.to_string()));
                }
                ["initial", q] => initial = Some((line_no, q.to_string())),
                ["capital", c] => capital = Some(rational(c)?),
                _ => return Err(Error::parse(line_no, format!("unrecognised line {line:?}"))),
            }
        }
        let lookup = |line: usize, q: &str| {
            index
                .get(q)
                .copied()
                .ok_or_else(|| Error::parse(line, format!("unknown state {q}")))
        };
        let mut delta = vec![[None, None]; names.len()];
        for (line, q, bit, r) in &trans {
            let (q, r) = (lookup(*line, q)?, lookup(*line, r)?);
            if delta[q][usize::from(*bit)].replace(r).is_some() {
                return Err(Error::parse(*line, "duplicate transition"));
            }
        }
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(q, d)| match d {
                [Some(a), Some(b)] => Ok([a, b]),
                _ => Err(Error::param(format!("state {} lacks a transition", names[q]))),
            })
            .collect::<Result<Vec<_>>>()?;
        let (line, q0) = initial.ok_or_else(|| Error::param("missing initial state"))?;
        let q0 = lookup(line, &q0)?;
        let c0 = capital.ok_or_else(|| Error::param("missing initial capital"))?;
        Self::named(names, delta, beta, q0, c0)
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial_capital(&self) -> &BigRational {
        &self.c0
    }

    pub fn state_after(&self, w: &Word) -> usize {
        w.bits().iter().fold(self.q0, |q, &b| self.delta[q][usize::from(b)])
    }

    /// Capital multiplier for reading `bit` in state `q`.
    pub fn factor(&self, q: usize, bit: u8) -> BigRational {
        let two = BigRational::from_integer(2.into());
        if bit == 1 {
            &two * &self.beta[q]
        } else {
            two * (BigRational::one() - &self.beta[q])
        }
    }

    /// Least common denominator of the bets, or 2 when every bet is 0 or 1.
    pub fn modulus(&self) -> u32 {
        let lcm = self.beta.iter().fold(BigInt::one(), |acc, b| acc.lcm(b.denom()));
        if lcm.is_one() {
            2
        } else {
            lcm.to_u32().unwrap_or(u32::MAX)
        }
    }
}

impl fmt::Display for Fsg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, b) in self.names.iter().zip(&self.beta) {
            writeln!(f, "state {q} bet {b}")?;
        }
        for (q, d) in self.names.iter().zip(&self.delta) {
            for bit in 0..2 {
                writeln!(f, "trans {q} {bit} {}", self.names[d[bit]])?;
            }
        }
        writeln!(f, "initial {}", self.names[self.q0])?;
        writeln!(f, "capital {}", self.c0)
    }
}

/// Capital after `w`: each bit multiplies by the factor of the state
/// reached on the bits before it.
pub fn fsg_capital(fsg: &Fsg, w: &Word) -> BigRational {
    fsg_capitals(fsg, w).pop().expect("nonempty")
}

/// Capitals after every prefix of `w`, shortest first.
pub fn fsg_capitals(fsg: &Fsg, w: &Word) -> Vec<BigRational> {
    let mut q = fsg.q0;
    let mut c = fsg.c0.clone();
    let mut out = vec![c.clone()];
    for &b in w.bits() {
        c *= fsg.factor(q, b);
        q = fsg.delta[q][usize::from(b)];
        out.push(c.clone());
    }
    out
}

/// Automatic one-step capital update of a gambler over `R_m`.
#[derive(Debug, Clone)]
pub struct FsgStep {
    kind: GroupKind,
    /// Tracks `(wa, d(w), d(wa))`, capitals on two tracks each.
    graph: AutomaticRelation,
}

impl FsgStep {
    /// The capital group, always `R_m`.
    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn graph(&self) -> &AutomaticRelation {
        &self.graph
    }

    /// `d(wa)` from `wa` and `d(w)`.
    pub fn apply(&self, wa: &Word, capital: &BigRational) -> Result<Option<BigRational>> {
        let c = self.kind.encode(std::slice::from_ref(capital))?;
        let input: Vec<Word> = std::iter::once(wa.clone()).chain(c).collect();
        let Some(out) = self.graph.apply(&input, &[3, 4])? else {
            return Ok(None);
        };
        Ok(self.kind.decode(&out).map(|mut v| v.remove(0)))
    }

    /// Capitals along every prefix of `w`, starting from `c0`.
    pub fn iterate(&self, w: &Word, c0: &BigRational) -> Result<Vec<BigRational>> {
        let mut out = vec![c0.clone()];
        for i in 1..=w.len() {
            let prev = out.last().expect("nonempty");
            let next = self
                .apply(&w.prefix(i), prev)?
                .ok_or_else(|| Error::param(format!("step undefined at prefix of length {i}")))?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Graph of `(wa, d(w)) -> d(wa)` over `R_m`, `m` the common denominator of
/// the bets. The factor applied depends only on the last bit and the state
/// reached before it, so the graph is the union over factors `f` of
/// `{wa ending with factor f} x {(c, f c)}`.
pub fn fsg_step_function(fsg: &Fsg, budget: usize) -> Result<FsgStep> {
    let m = fsg.modulus();
    let domain = madic_domain(m)?;
    let mut factors: Vec<BigRational> = Vec::new();
    for q in 0..fsg.num_states() {
        for bit in 0..2 {
            let f = fsg.factor(q, bit);
            if !factors.contains(&f) {
                factors.push(f);
            }
        }
    }
    let mut st = Structure::with_budget(budget);
    let (c, d) = (element_vars("c", 2), element_vars("d", 2));
    let s = ["s".to_string()];
    let mut cases = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        let scaled = f * BigRational::from_integer(m.into());
        let a = scaled
            .to_integer()
            .to_i64()
            .filter(|_| scaled.is_integer())
            .ok_or_else(|| Error::param("bet denominators must divide the modulus"))?;
        let ends = AutomaticRelation::language(
            (fsg.q0, None::<usize>),
            |&(q, _), b| {
                let j = factors.iter().position(|g| *g == fsg.factor(q, b));
                Some((fsg.delta[q][usize::from(b)], j))
            },
            |&(_, last)| last == Some(i),
        );
        let (ends_name, mult_name) = (format!("End{i}"), format!("Mul{i}"));
        st.insert(&ends_name, ends);
        st.insert(&mult_name, madic_mult(m, &domain, a, 1)?);
        cases.push(Formula::and(
            Formula::atom(&ends_name, &s),
            Formula::atom(&mult_name, &concat_vars(&[&c, &d])),
        ));
    }
    let graph = st.compile(&Formula::or_all(cases), &concat_vars(&[&s, &c, &d]))?;
    Ok(FsgStep {
        kind: GroupKind::Madic(m),
        graph,
    })
}

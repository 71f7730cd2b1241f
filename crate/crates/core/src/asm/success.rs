use std::collections::HashMap;
use std::fmt;

use super::Asm;
use crate::automata::{AutomaticRelation, Word};
use crate::error::{Error, Result};
use crate::fo::Formula;
use crate::groups::{concat_vars, element_vars};

/// Prefixes whose capital strictly exceeds that of every proper prefix.
/// A sequence is won exactly when infinitely many of its prefixes lie here.
pub fn success_language(asm: &Asm, budget: usize) -> Result<AutomaticRelation> {
    let mut st = asm.structure(budget)?;
    st.insert("SP", AutomaticRelation::strict_prefix());
    let w = asm.acg().width();
    let (a, b) = (element_vars("a", w), element_vars("b", w));
    let (s, t) = (["s".to_string()], ["t".to_string()]);
    // AtLeast(t, b): d(t) >= b
    let at_least = Formula::exists_all(
        &a,
        Formula::and_all(vec![
            Formula::atom("G", &concat_vars(&[&t, &a])),
            Formula::atom("D", &b),
            Formula::not(Formula::atom("Less", &concat_vars(&[&a, &b]))),
        ]),
    );
    let at_least = st.compile(&at_least, &concat_vars(&[&t, &b]))?;
    st.insert("AtLeast", at_least);
    // Blocked(t, s): t is a proper prefix of s with d(t) >= d(s)
    let blocked = Formula::exists_all(
        &b,
        Formula::and_all(vec![
            Formula::atom("SP", &["t", "s"]),
            Formula::atom("G", &concat_vars(&[&s, &b])),
            Formula::atom("AtLeast", &concat_vars(&[&t, &b])),
        ]),
    );
    let blocked = st.compile(&blocked, &["t", "s"])?;
    st.insert("Blocked", blocked);
    st.compile(&Formula::not(Formula::exists("t", Formula::atom("Blocked", &["t", "s"]))), &s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessVerdict {
    pub succeeded: bool,
    /// Length of the first prefix in the success language that lies on the
    /// repeating cycle, when the sequence is won.
    pub recurrent_prefix: Option<usize>,
    /// Length of the longest prefix in the success language, when there are
    /// finitely many.
    pub longest_prefix: Option<usize>,
    /// Number of steps after which the run of the language automaton repeats.
    pub period: usize,
}

impl fmt::Display for SuccessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.recurrent_prefix {
            write!(f, "succeeds: prefixes in R recur with period {} from length {l}", self.period)
        } else {
            match self.longest_prefix {
                Some(l) => write!(f, "fails: longest prefix in R has length {l}"),
                None => write!(f, "fails: no prefix in R"),
            }
        }
    }
}

/// Decides whether `u v v v ...` is won by `asm`.
pub fn succeeds_on_up(asm: &Asm, u: &Word, v: &Word, budget: usize) -> Result<SuccessVerdict> {
    let lang = success_language(asm, budget)?;
    ultimately_periodic_success(&lang, u, v)
}

/// Decides whether the unary automaton `lang` accepts infinitely many
/// prefixes of `u v v v ...`, by running it until the pair (state, position
/// in `v`) repeats.
pub fn ultimately_periodic_success(lang: &AutomaticRelation, u: &Word, v: &Word) -> Result<SuccessVerdict> {
    if v.is_empty() {
        return Err(Error::param("period word must be nonempty"));
    }
    if lang.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: lang.arity(),
        });
    }
    let dfa = lang.dfa();
    let mut q = dfa.initial();
    let mut len = 0;
    let mut longest = dfa.is_accepting(q).then_some(0);
    for &b in u.bits() {
        q = dfa.next(q, usize::from(b));
        len += 1;
        if dfa.is_accepting(q) {
            longest = Some(len);
        }
    }
    let mut seen = HashMap::new();
    let mut trail = Vec::new();
    let mut i = 0;
    loop {
        if let Some(&start) = seen.get(&(q, i)) {
            let cycle: &[(u32, usize)] = &trail[start..];
            let hit = cycle.iter().find(|&&(s, _)| dfa.is_accepting(s)).map(|&(_, l)| l);
            return Ok(SuccessVerdict {
                succeeded: hit.is_some(),
                recurrent_prefix: hit,
                longest_prefix: if hit.is_some() { None } else { longest },
                period: cycle.len(),
            });
        }
        seen.insert((q, i), trail.len());
        trail.push((q, len));
        q = dfa.next(q, usize::from(v.bits()[i]));
        len += 1;
        if dfa.is_accepting(q) {
            longest = Some(len);
        }
        i = (i + 1) % v.len();
    }
}

use std::collections::HashMap;

use super::{
    alphabet_size, decode_column, encode_column, explore_dfa, tuple_cmp, ConvWord, Dfa, Nfa, TrackSymbol, Word,
};
use crate::error::{Error, Result};
use crate::fo::{Formula, Structure};

/// No limit on intermediate automaton size.
pub const UNBOUNDED: usize = usize::MAX;

/// A relation on binary words recognized by a minimal total DFA over the
/// padded convolution alphabet.
///
/// The language is always contained in the set of valid convolutions, and
/// the DFA is canonical, so equal relations compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AutomaticRelation {
    dfa: Dfa,
    /// The sink of the minimal DFA, if it has one.
    dead: Option<u32>,
}

/// Automaton accepting exactly the valid convolutions of the given arity.
fn validity(arity: usize) -> Dfa {
    explore_dfa(
        arity,
        0u64,
        |&mask, col| {
            let mut m = mask;
            let mut all_pad = true;
            for (t, s) in col.iter().enumerate() {
                if s.is_pad() {
                    m |= 1 << t;
                } else {
                    all_pad = false;
                    if mask & (1 << t) != 0 {
                        return None;
                    }
                }
            }
            (!all_pad).then_some(m)
        },
        |_| true,
        UNBOUNDED,
    )
    .expect("validity automaton")
}

impl AutomaticRelation {
    fn wrap(dfa: Dfa) -> Self {
        let dead = (0..dfa.num_states() as u32)
            .find(|&s| !dfa.is_accepting(s) && (0..dfa.alpha()).all(|l| dfa.next(s, l) == s));
        AutomaticRelation { dfa, dead }
    }

    /// Co-accessible states; in a minimal DFA that is everything but the sink.
    fn live(&self) -> Vec<bool> {
        let mut live = vec![true; self.num_states()];
        if let Some(d) = self.dead {
            live[d as usize] = false;
        }
        live
    }

    /// Restricts `dfa` to valid convolutions and minimizes it.
    pub fn from_dfa(dfa: &Dfa) -> Self {
        let valid = validity(dfa.arity());
        let dfa = dfa.product(&valid, |a, b| a && b).expect("same arity").minimize();
        Self::wrap(dfa)
    }

    pub fn from_nfa(nfa: Nfa, budget: usize) -> Result<Self> {
        let dfa = nfa.determinize(budget)?;
        drop(nfa);
        Ok(Self::from_dfa(&dfa))
    }

    pub fn universe(arity: usize) -> Self {
        Self::wrap(validity(arity).minimize())
    }

    pub fn empty(arity: usize) -> Self {
        Self::wrap(Dfa::trivial(arity, false))
    }

    /// `{(x, x)}`.
    pub fn equality() -> Self {
        let dfa = explore_dfa(
            2,
            (),
            |_, c| (c[0] == c[1] && !c[0].is_pad()).then_some(()),
            |_| true,
            UNBOUNDED,
        )
        .expect("equality");
        Self::from_dfa(&dfa)
    }

    /// `{(tau, sigma) : tau is a proper prefix of sigma}`.
    pub fn strict_prefix() -> Self {
        let dfa = explore_dfa(
            2,
            false,
            |&after, c| match (after, c[0], c[1]) {
                (false, a, b) if a == b && !a.is_pad() => Some(false),
                (_, TrackSymbol::Pad, b) if !b.is_pad() => Some(true),
                _ => None,
            },
            |&after| after,
            UNBOUNDED,
        )
        .expect("prefix");
        Self::from_dfa(&dfa)
    }

    /// `{(sigma, sigma . bit)}`.
    pub fn append(bit: u8) -> Self {
        let want = TrackSymbol::from_bit(bit);
        let dfa = explore_dfa(
            2,
            false,
            |&done, c| match (done, c[0], c[1]) {
                (false, a, b) if a == b && !a.is_pad() => Some(false),
                (false, TrackSymbol::Pad, b) if b == want => Some(true),
                _ => None,
            },
            |&done| done,
            UNBOUNDED,
        )
        .expect("append");
        Self::from_dfa(&dfa)
    }

    /// The one-element relation `{words}`.
    pub fn singleton(words: &[Word]) -> Self {
        let letters = ConvWord::of(words).letters();
        let dfa = explore_dfa(
            words.len(),
            0usize,
            |&i, c| (i < letters.len() && encode_column(c) == letters[i]).then_some(i + 1),
            |&i| i == letters.len(),
            UNBOUNDED,
        )
        .expect("singleton");
        Self::from_dfa(&dfa)
    }

    /// Strict length-lex order on `width`-tuples: tracks `0..width` hold the
    /// smaller tuple, `width..2*width` the larger. Tuples are compared by
    /// convolution length, then column by column (track order, `0 < 1 < PAD`).
    pub fn ll_less(width: usize) -> Self {
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum St {
            Eq,
            Less,
            Greater,
            Shorter,
        }
        let dfa = explore_dfa(
            2 * width,
            St::Eq,
            |st, c| {
                let (a, b) = c.split_at(width);
                let a_pad = a.iter().all(|s| s.is_pad());
                let b_pad = b.iter().all(|s| s.is_pad());
                match (st, a_pad, b_pad) {
                    (St::Shorter, true, false) => Some(St::Shorter),
                    (St::Shorter, _, _) => None,
                    (_, true, false) => Some(St::Shorter),
                    (_, _, true) => None,
                    (St::Eq, false, false) => Some(match a.cmp(b) {
                        std::cmp::Ordering::Less => St::Less,
                        std::cmp::Ordering::Greater => St::Greater,
                        std::cmp::Ordering::Equal => St::Eq,
                    }),
                    (other, false, false) => Some(other.clone()),
                }
            },
            |st| matches!(st, St::Less | St::Shorter),
            UNBOUNDED,
        )
        .expect("ll order");
        Self::from_dfa(&dfa)
    }

    /// Unary relation of all words accepted by a deterministic word
    /// automaton given as a step function over bits.
    pub fn language<S, F, A>(start: S, step: F, accept: A) -> Self
    where
        S: Clone + Eq + std::hash::Hash,
        F: Fn(&S, u8) -> Option<S>,
        A: Fn(&S) -> bool,
    {
        let dfa = explore_dfa(1, start, |s, c| c[0].bit().and_then(|b| step(s, b)), accept, UNBOUNDED)
            .expect("word language");
        Self::from_dfa(&dfa)
    }

    pub fn arity(&self) -> usize {
        self.dfa.arity()
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    fn check_arity(&self, found: usize) -> Result<()> {
        if found != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found,
            });
        }
        Ok(())
    }

    pub fn accepts(&self, words: &[Word]) -> Result<bool> {
        self.check_arity(words.len())?;
        Ok(self.dfa.accepts_letters(&ConvWord::of(words).letters()))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        Ok(Self::wrap(self.dfa.product(&other.dfa, |a, b| a && b)?.minimize()))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        Ok(Self::wrap(self.dfa.product(&other.dfa, |a, b| a || b)?.minimize()))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        Ok(Self::wrap(self.dfa.product(&other.dfa, |a, b| a && !b)?.minimize()))
    }

    /// Complement inside the valid-padding universe.
    pub fn complement(&self) -> Self {
        Self::from_dfa(&self.dfa.complement_raw())
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Existential projection of `track`.
    pub fn project(&self, track: usize) -> Result<Self> {
        self.project_within(track, UNBOUNDED)
    }

    /// Projection with a limit on the subset construction.
    ///
    /// The dropped track may outlive all retained tracks; its overhang is
    /// absorbed by accepting every state that reaches acceptance through
    /// columns whose retained part is all PAD.
    pub fn project_within(&self, track: usize, budget: usize) -> Result<Self> {
        let k = self.arity();
        if track >= k {
            return Err(Error::InvalidTrack { track, arity: k });
        }
        let dfa = &self.dfa;
        let n = dfa.num_states();
        let old_alpha = alphabet_size(k);
        let new_alpha = alphabet_size(k - 1);
        let pow = 3usize.pow(track as u32);
        let drop = |l: usize| -> usize { (l % pow) + (l / (pow * 3)) * pow };
        let retained_pad = |l: usize| -> bool { decode_column(drop(l), k - 1).iter().all(|s| s.is_pad()) };

        let overhang: Vec<usize> = (0..old_alpha).filter(|&l| retained_pad(l)).collect();
        let mut accepting = dfa.accepting().to_vec();
        loop {
            let mut changed = false;
            for s in 0..n {
                if !accepting[s] && overhang.iter().any(|&l| accepting[dfa.next(s as u32, l) as usize]) {
                    accepting[s] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let mut trans: Vec<Vec<u32>> = vec![Vec::new(); n * new_alpha];
        for s in 0..n {
            for l in 0..old_alpha {
                if retained_pad(l) {
                    continue;
                }
                trans[s * new_alpha + drop(l)].push(dfa.next(s as u32, l));
            }
        }
        let nfa = Nfa::new(k - 1, trans, vec![dfa.initial()], accepting)?;
        Self::from_nfa(nfa, budget)
    }

    /// Inserts an unconstrained track at position `pos`.
    pub fn cylindrify(&self, pos: usize) -> Result<Self> {
        let k = self.arity();
        if pos > k {
            return Err(Error::InvalidTrack { track: pos, arity: k + 1 });
        }
        let dfa = &self.dfa;
        let n = dfa.num_states();
        let done = n as u32;
        let dead = n as u32 + 1;
        let new_alpha = alphabet_size(k + 1);
        let pow = 3usize.pow(pos as u32);
        let mut trans = Vec::with_capacity((n + 2) * new_alpha);
        for s in 0..n as u32 + 2 {
            for l in 0..new_alpha {
                let inserted = TrackSymbol::from_index((l / pow) % 3);
                let old = (l % pow) + (l / (pow * 3)) * pow;
                let old_all_pad = decode_column(old, k).iter().all(|c| c.is_pad());
                let t = if old_all_pad {
                    let finished = s == done || (s < done && dfa.is_accepting(s));
                    if finished && !inserted.is_pad() {
                        done
                    } else {
                        dead
                    }
                } else if s >= done {
                    dead
                } else {
                    dfa.next(s, old)
                };
                trans.push(t);
            }
        }
        let mut accepting = dfa.accepting().to_vec();
        accepting.push(true);
        accepting.push(false);
        Ok(Self::from_dfa(&Dfa::new(k + 1, trans, dfa.initial(), accepting)?))
    }

    /// Reorders tracks: track `j` of the result is track `perm[j]` of `self`.
    pub fn reorder(&self, perm: &[usize]) -> Result<Self> {
        let k = self.arity();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        let dfa = self.dfa.relabel(k, |l| {
            let new_col = decode_column(l, k);
            let mut old_col = vec![TrackSymbol::Pad; k];
            for (j, &p) in perm.iter().enumerate() {
                old_col[p] = new_col[j];
            }
            encode_column(&old_col)
        });
        Ok(Self::wrap(dfa.minimize()))
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        self.dfa.is_infinite()
    }

    /// A shortest member, if any.
    pub fn some_member(&self) -> Option<Vec<Word>> {
        self.dfa
            .shortest_accepted()
            .map(|letters| ConvWord::from_letters(self.arity(), &letters).deconvolve())
    }

    /// All members whose components have length at most `max_len`, in
    /// length-lex order.
    pub fn enumerate(&self, max_len: usize) -> Vec<Vec<Word>> {
        let k = self.arity();
        let alpha = alphabet_size(k);
        let live = self.live();
        let columns: Vec<Vec<TrackSymbol>> = (0..alpha).map(|l| decode_column(l, k)).collect();
        let mut out = Vec::new();
        let mut path: Vec<usize> = Vec::new();
        let mut stack: Vec<(u32, u64, usize)> = Vec::new(); // (state, ended mask, depth) with letter
        let mut letters_at: Vec<usize> = Vec::new();
        let init = self.dfa.initial();
        if live[init as usize] {
            stack.push((init, 0, 0));
            letters_at.push(usize::MAX);
        }
        while let Some((s, mask, depth)) = stack.pop() {
            let letter = letters_at.pop().expect("parallel stack");
            path.truncate(depth.saturating_sub(1));
            if letter != usize::MAX {
                path.push(letter);
            }
            if self.dfa.is_accepting(s) {
                out.push(ConvWord::from_letters(k, &path).deconvolve());
            }
            if depth == max_len {
                continue;
            }
            for (l, col) in columns.iter().enumerate() {
                let mut m = mask;
                let mut ok = true;
                let mut all_pad = true;
                for (t, sym) in col.iter().enumerate() {
                    if sym.is_pad() {
                        m |= 1 << t;
                    } else {
                        all_pad = false;
                        if mask & (1 << t) != 0 {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok || all_pad {
                    continue;
                }
                let t = self.dfa.next(s, l);
                if live[t as usize] {
                    stack.push((t, m, depth + 1));
                    letters_at.push(l);
                }
            }
        }
        out.sort_by(|a, b| tuple_cmp(a, b));
        out
    }

    /// Finds output words for `out_tracks` such that the full tuple is
    /// accepted, given the words on the remaining tracks (in track order).
    /// For function graphs this evaluates the function.
    pub fn apply(&self, inputs: &[Word], out_tracks: &[usize]) -> Result<Option<Vec<Word>>> {
        let k = self.arity();
        let mut is_out = vec![false; k];
        for &t in out_tracks {
            if t >= k {
                return Err(Error::InvalidTrack { track: t, arity: k });
            }
            is_out[t] = true;
        }
        let in_tracks: Vec<usize> = (0..k).filter(|&t| !is_out[t]).collect();
        if in_tracks.len() != inputs.len() {
            return Err(Error::ArityMismatch {
                expected: in_tracks.len(),
                found: inputs.len(),
            });
        }
        let w = out_tracks.len();
        let in_len = inputs.iter().map(Word::len).max().unwrap_or(0);
        let live = self.live();
        let bound = in_len + self.num_states() * (1usize << w) + 1;
        let full_mask = (1u64 << w) - 1;

        // layers[c][i] = (state, mask, parent index, output symbols code)
        let mut layers: Vec<Vec<(u32, u64, usize, usize)>> = Vec::new();
        let init = self.dfa.initial();
        if !live[init as usize] {
            return Ok(None);
        }
        layers.push(vec![(init, 0, usize::MAX, 0)]);
        let combos = alphabet_size(w);
        let mut col = vec![TrackSymbol::Pad; k];
        for c in 0..=bound {
            let layer = &layers[c];
            if c >= in_len {
                if let Some(idx) = layer.iter().position(|n| self.dfa.is_accepting(n.0)) {
                    return Ok(Some(self.reconstruct(&layers, c, idx, w)));
                }
            }
            let mut next: Vec<(u32, u64, usize, usize)> = Vec::new();
            let mut seen: HashMap<(u32, u64), ()> = HashMap::new();
            for (j, &t) in in_tracks.iter().enumerate() {
                col[t] = inputs[j].symbol(c);
            }
            for (pi, &(s, mask, _, _)) in layer.iter().enumerate() {
                if mask == full_mask && c >= in_len {
                    continue;
                }
                for code in 0..combos {
                    let syms = decode_column(code, w);
                    let mut m = mask;
                    let mut ok = true;
                    for (i, sym) in syms.iter().enumerate() {
                        if sym.is_pad() {
                            m |= 1 << i;
                        } else if mask & (1 << i) != 0 {
                            ok = false;
                            break;
                        }
                        col[out_tracks[i]] = *sym;
                    }
                    if !ok {
                        continue;
                    }
                    let t = self.dfa.next(s, encode_column(&col));
                    if live[t as usize] && seen.insert((t, m), ()).is_none() {
                        next.push((t, m, pi, code));
                    }
                }
            }
            if next.is_empty() {
                return Ok(None);
            }
            layers.push(next);
        }
        Ok(None)
    }

    fn reconstruct(&self, layers: &[Vec<(u32, u64, usize, usize)>], c: usize, idx: usize, w: usize) -> Vec<Word> {
        let mut codes = Vec::with_capacity(c);
        let mut cur = idx;
        for depth in (1..=c).rev() {
            let (_, _, parent, code) = layers[depth][cur];
            codes.push(code);
            cur = parent;
        }
        codes.reverse();
        (0..w)
            .map(|i| Word::from_bits(codes.iter().filter_map(|&code| decode_column(code, w)[i].bit())))
            .collect()
    }

    /// Graph of the function sending each input tuple to its length-lex least
    /// witness on `out_tracks`: `R(x, z) and not exists z' (z' <ll z and R(x, z'))`.
    pub fn llex_uniformize(&self, out_tracks: &[usize], budget: usize) -> Result<Self> {
        let k = self.arity();
        let w = out_tracks.len();
        if out_tracks.iter().any(|&t| t >= k) {
            return Err(Error::InvalidTrack {
                track: *out_tracks.iter().max().unwrap_or(&0),
                arity: k,
            });
        }
        let names: Vec<String> = (0..k).map(|t| format!("t{t}")).collect();
        let primed: Vec<String> = out_tracks.iter().map(|t| format!("u{t}")).collect();
        let mut witness_vars = names.clone();
        for (i, &t) in out_tracks.iter().enumerate() {
            witness_vars[t] = primed[i].clone();
        }
        let mut order_vars = primed.clone();
        order_vars.extend(out_tracks.iter().map(|&t| names[t].clone()));

        let mut st = Structure::with_budget(budget);
        st.insert("R", self.clone());
        st.insert("LL", Self::ll_less(w));
        let smaller = Formula::exists_all(
            &primed,
            Formula::and(Formula::atom("LL", &order_vars), Formula::atom("R", &witness_vars)),
        );
        let phi = Formula::and(Formula::atom("R", &names), Formula::not(smaller));
        st.compile(&phi, &names)
    }

    /// True iff no input tuple has two distinct outputs on `out_tracks`.
    ///
    /// Runs two copies of the automaton in lockstep on a shared input and
    /// independent outputs, looking for a pair of accepting runs whose
    /// outputs differ. A run that has finished idles on all-PAD columns.
    pub fn is_function(&self, out_tracks: &[usize]) -> Result<bool> {
        let k = self.arity();
        let mut is_out = vec![false; k];
        for &t in out_tracks {
            if t >= k {
                return Err(Error::InvalidTrack { track: t, arity: k });
            }
            is_out[t] = true;
        }
        let in_tracks: Vec<usize> = (0..k).filter(|&t| !is_out[t]).collect();
        let live = self.live();
        let fin = self.num_states() as u32;
        let (ni, no) = (alphabet_size(in_tracks.len()), alphabet_size(out_tracks.len()));
        let all_pad_in = ni - 1;
        let all_pad_out = no - 1;
        // successors[a] = live (output code, target) pairs for input code a
        let succ = |p: u32, a: usize| -> Vec<(usize, u32)> {
            if p == fin {
                return if a == all_pad_in { vec![(all_pad_out, fin)] } else { Vec::new() };
            }
            let mut col = vec![TrackSymbol::Pad; k];
            for (t, sym) in in_tracks.iter().zip(decode_column(a, in_tracks.len())) {
                col[*t] = sym;
            }
            let mut out = Vec::new();
            for b in 0..no {
                if a == all_pad_in && b == all_pad_out {
                    if self.dfa.is_accepting(p) {
                        out.push((b, fin));
                    }
                    continue;
                }
                for (t, sym) in out_tracks.iter().zip(decode_column(b, out_tracks.len())) {
                    col[*t] = sym;
                }
                let q = self.dfa.next(p, encode_column(&col));
                if live[q as usize] {
                    out.push((b, q));
                }
            }
            out
        };
        let accepting = |p: u32| p == fin || self.dfa.is_accepting(p);
        let init = self.dfa.initial();
        if !live[init as usize] {
            return Ok(true);
        }
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![(init, init, false)];
        seen.insert((init, init, false));
        while let Some((p, q, differ)) = stack.pop() {
            if differ && accepting(p) && accepting(q) {
                return Ok(false);
            }
            for a in 0..ni {
                let sp = succ(p, a);
                if sp.is_empty() {
                    continue;
                }
                let sq = if p == q { sp.clone() } else { succ(q, a) };
                for &(b, p2) in &sp {
                    for &(c, q2) in &sq {
                        let key = (p2, q2, differ || b != c);
                        if seen.insert(key) {
                            stack.push(key);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.into()
    }

    #[test]
    fn equality_accepts_only_equal_words() {
        let eq = AutomaticRelation::equality();
        assert!(eq.accepts(&[w("01"), w("01")]).unwrap());
        assert!(!eq.accepts(&[w("01"), w("010")]).unwrap());
        assert!(matches!(eq.accepts(&[w("0")]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn strict_prefix_matches_enumeration() {
        let p = AutomaticRelation::strict_prefix();
        assert!(p.accepts(&[w("0"), w("01")]).unwrap());
        for a in Word::all_up_to(4) {
            for b in Word::all_up_to(4) {
                let expect = a.len() < b.len() && a.is_prefix_of(&b);
                assert_eq!(p.accepts(&[a.clone(), b.clone()]).unwrap(), expect, "{a} {b}");
            }
        }
    }

    #[test]
    fn enumerate_equality_to_length_one() {
        let got = AutomaticRelation::equality().enumerate(1);
        assert_eq!(
            got,
            vec![vec![w(""), w("")], vec![w("0"), w("0")], vec![w("1"), w("1")]]
        );
    }

    #[test]
    fn complement_is_involution_and_universe_is_identity() {
        let p = AutomaticRelation::strict_prefix();
        assert_eq!(p.complement().complement(), p);
        assert_eq!(p.intersect(&AutomaticRelation::universe(2)).unwrap(), p);
        assert!(p.complement().accepts(&[w("1"), w("0")]).unwrap());
        // complement never accepts invalid paddings
        for t in p.complement().enumerate(3) {
            assert!(ConvWord::of(&t).is_valid());
        }
    }

    #[test]
    fn equality_and_prefix_intersection_is_empty_but_union_covers_both() {
        let eq = AutomaticRelation::equality();
        let p = AutomaticRelation::strict_prefix();
        assert!(eq.intersect(&p).unwrap().is_empty());
        let u = eq.union(&p).unwrap();
        for a in Word::all_up_to(5) {
            for b in Word::all_up_to(5) {
                let expect = a.is_prefix_of(&b);
                assert_eq!(u.accepts(&[a.clone(), b.clone()]).unwrap(), expect);
            }
        }
    }

    #[test]
    fn project_equality_gives_all_words() {
        let eq = AutomaticRelation::equality();
        assert_eq!(eq.project(1).unwrap(), AutomaticRelation::universe(1));
        assert_eq!(AutomaticRelation::empty(2).project(0).unwrap(), AutomaticRelation::empty(1));
        assert!(matches!(eq.project(2), Err(Error::InvalidTrack { .. })));
    }

    #[test]
    fn projection_handles_longer_witness() {
        // exists sigma: tau strict prefix of sigma -> every tau
        let p = AutomaticRelation::strict_prefix();
        assert_eq!(p.project(1).unwrap(), AutomaticRelation::universe(1));
        // exists tau: tau strict prefix of sigma -> sigma nonempty
        let nonempty = p.project(0).unwrap();
        assert!(!nonempty.accepts(&[w("")]).unwrap());
        assert!(nonempty.accepts(&[w("0")]).unwrap());
    }

    #[test]
    fn projection_to_arity_zero() {
        let p = AutomaticRelation::strict_prefix().project(1).unwrap().project(0).unwrap();
        assert_eq!(p.arity(), 0);
        assert!(p.accepts(&[]).unwrap());
        assert!(AutomaticRelation::empty(1).project(0).unwrap().is_empty());
    }

    #[test]
    fn cylindrify_then_project_is_identity() {
        let p = AutomaticRelation::strict_prefix();
        for pos in 0..=2 {
            let c = p.cylindrify(pos).unwrap();
            assert_eq!(c.arity(), 3);
            assert_eq!(c.project(pos).unwrap(), p);
        }
        let c = p.cylindrify(2).unwrap();
        assert!(c.accepts(&[w("0"), w("01"), w("111111")]).unwrap());
        assert!(!c.accepts(&[w("1"), w("01"), w("")]).unwrap());
    }

    #[test]
    fn reorder_identity_and_swap() {
        let eq = AutomaticRelation::equality();
        assert_eq!(eq.reorder(&[0, 1]).unwrap(), eq);
        assert_eq!(eq.reorder(&[1, 0]).unwrap(), eq);
        let p = AutomaticRelation::strict_prefix();
        let swapped = p.reorder(&[1, 0]).unwrap();
        assert!(swapped.accepts(&[w("01"), w("0")]).unwrap());
        assert!(matches!(p.reorder(&[0, 0]), Err(Error::InvalidPermutation(_))));
    }

    #[test]
    fn infinite_and_empty() {
        let zeros = AutomaticRelation::language((), |_, b| (b == 0).then_some(()), |_| true);
        assert!(zeros.is_infinite());
        assert!(AutomaticRelation::empty(1).is_empty());
        assert!(!AutomaticRelation::singleton(&[w("01")]).is_infinite());
    }

    #[test]
    fn ll_less_matches_word_order() {
        let ll = AutomaticRelation::ll_less(1);
        for a in Word::all_up_to(4) {
            for b in Word::all_up_to(4) {
                assert_eq!(ll.accepts(&[a.clone(), b.clone()]).unwrap(), a < b, "{a} {b}");
            }
        }
    }

    #[test]
    fn uniformize_prefers_shorter_and_epsilon() {
        // z = x or z = x0
        let eq = AutomaticRelation::equality();
        let ext = AutomaticRelation::append(0);
        let rel = eq.union(&ext).unwrap();
        let f = rel.llex_uniformize(&[1], UNBOUNDED).unwrap();
        assert_eq!(f, eq);
        let full = AutomaticRelation::universe(2).llex_uniformize(&[1], UNBOUNDED).unwrap();
        for x in Word::all_up_to(3) {
            assert_eq!(full.apply(&[x], &[1]).unwrap(), Some(vec![Word::new()]));
        }
        assert!(f.is_function(&[1]).unwrap());
        assert!(!rel.is_function(&[1]).unwrap());
    }

    #[test]
    fn apply_evaluates_append() {
        let a = AutomaticRelation::append(1);
        assert_eq!(a.apply(&[w("01")], &[1]).unwrap(), Some(vec![w("011")]));
        assert_eq!(a.apply(&[w("011")], &[0]).unwrap(), Some(vec![w("01")]));
        assert_eq!(a.apply(&[w("010")], &[0]).unwrap(), None);
    }
}

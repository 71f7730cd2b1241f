//! Digit layouts for signed integers and the carry automaton for linear
//! equations over them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::automata::{explore, AutomaticRelation, TrackSymbol, Word, UNBOUNDED};
use crate::error::{Error, Result};

/// Placement of base-`radix` digits in a binary word.
///
/// Integers are written in radix complement, least significant digit
/// first. Each digit takes `bits` bits (least significant bit first)
/// followed by `stride - bits` zero bits. A single sign bit closes the word:
/// `0` means the digits continue as zeros forever, `1` means they continue
/// as `radix - 1` forever, so the value is `sum d_i m^i - s m^n`. The last
/// digit never equals the tail digit, hence `0` is zero and `1` is minus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntLayout {
    pub radix: u32,
    pub bits: usize,
    pub stride: usize,
}

pub(crate) fn bits_for(radix: u32) -> usize {
    (32 - (radix - 1).leading_zeros()).max(1) as usize
}

impl IntLayout {
    pub fn binary() -> Self {
        Self::separated(1)
    }

    /// Binary digits spaced `nk` positions apart.
    pub fn separated(nk: usize) -> Self {
        IntLayout {
            radix: 2,
            bits: 1,
            stride: nk,
        }
    }

    /// Packed base-`m` digits, as used on the integer track of `R_m`.
    pub fn packed(m: u32) -> Self {
        let bits = bits_for(m);
        IntLayout {
            radix: m,
            bits,
            stride: bits,
        }
    }

    fn push_digit(&self, w: &mut Word, d: u32) {
        for i in 0..self.bits {
            w.push(((d >> i) & 1) as u8);
        }
        for _ in self.bits..self.stride {
            w.push(0);
        }
    }

    pub fn encode(&self, v: &BigInt) -> Word {
        let mut w = Word::new();
        let mut rest = v.clone();
        let m = BigInt::from(self.radix);
        let minus_one = -BigInt::one();
        while !rest.is_zero() && rest != minus_one {
            let (q, r) = rest.div_mod_floor(&m);
            self.push_digit(&mut w, r.to_u32().expect("digit"));
            rest = q;
        }
        w.push(u8::from(rest == minus_one));
        w
    }

    /// Value of a word of the right block shape, and whether it is canonical.
    pub(crate) fn read(&self, w: &Word) -> Option<(BigInt, bool)> {
        let n = w.len();
        if n == 0 || !(n - 1).is_multiple_of(self.stride) {
            return None;
        }
        let mut value = BigInt::zero();
        let mut scale = BigInt::one();
        let mut last = None;
        for block in w.bits()[..n - 1].chunks(self.stride) {
            let mut d = 0u32;
            for (i, &b) in block[..self.bits].iter().enumerate() {
                d |= u32::from(b) << i;
            }
            if d >= self.radix || block[self.bits..].iter().any(|&b| b != 0) {
                return None;
            }
            value += &scale * d;
            scale *= self.radix;
            last = Some(d);
        }
        let sign = u32::from(w.bits()[n - 1]);
        if sign == 1 {
            value -= scale;
        }
        Some((value, last != Some(sign * (self.radix - 1))))
    }

    /// Inverse of [`encode`](Self::encode) on canonical words.
    pub fn decode(&self, w: &Word) -> Option<BigInt> {
        match self.read(w)? {
            (v, true) => Some(v),
            _ => None,
        }
    }

    /// All canonical words.
    pub fn language(&self) -> AutomaticRelation {
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum St {
            Digits { off: usize, part: u32, last: Option<u32> },
            Signed,
        }
        let lay = *self;
        let step = move |s: &St, col: &[TrackSymbol], out: &mut Vec<St>| {
            let (St::Digits { off, part, last }, Some(b)) = (s.clone(), col[0].bit()) else {
                return;
            };
            if off == 0 && last != Some(u32::from(b) * (lay.radix - 1)) {
                out.push(St::Signed);
            }
            if off >= lay.bits {
                if b == 0 {
                    out.push(St::Digits { off: (off + 1) % lay.stride, part, last });
                }
                return;
            }
            let part = part | (u32::from(b) << off);
            if off + 1 < lay.bits {
                out.push(St::Digits { off: off + 1, part, last });
            } else if part < lay.radix {
                out.push(St::Digits { off: (off + 1) % lay.stride, part: 0, last: Some(part) });
            }
        };
        let start = St::Digits { off: 0, part: 0, last: None };
        let nfa = explore(1, vec![start], step, |s| *s == St::Signed, UNBOUNDED).expect("unbounded");
        AutomaticRelation::from_nfa(nfa, UNBOUNDED).expect("unbounded")
    }
}

/// One summand `coef * value` of a linear equation. The value is the
/// integer on `int_track` plus, if present, the fraction in `[0, 1)` whose
/// base-`radix` digits by increasing depth sit on `frac_track`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub coef: i64,
    pub int_track: usize,
    pub frac_track: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct LinState {
    offset: usize,
    /// Integer carry plus the weighted digit bits of the current block.
    carry: i64,
    /// Fraction carry; inside a block, already scaled by `m` with the
    /// weighted digit bits read so far subtracted.
    fcarry: i64,
    done: u64,
    signs: u64,
}

/// Relation of all track tuples whose values satisfy `sum coef_i * v_i = 0`.
///
/// Words are checked for block shape only and digit values are not range
/// checked; callers intersect with the canonical domain. Integer carries run
/// forward, and once a track has ended it contributes its tail digit. After
/// every track has ended the carry must sit at the fixed point of the tail.
/// The carry out of the fractional part is guessed up front; each fraction
/// column then determines the carry arriving from the next deeper column,
/// which must vanish once every fraction track has ended.
pub fn linear_relation(layout: IntLayout, arity: usize, terms: &[Term], budget: usize) -> Result<AutomaticRelation> {
    let mut owner = vec![None; arity];
    for (i, t) in terms.iter().enumerate() {
        for track in std::iter::once(t.int_track).chain(t.frac_track) {
            if track >= arity {
                return Err(Error::InvalidTrack { track, arity });
            }
            if owner[track].replace(i).is_some() {
                return Err(Error::param(format!("track {track} used twice")));
            }
        }
    }
    if owner.iter().any(Option::is_none) {
        return Err(Error::param("every track must belong to a term"));
    }
    let has_frac = terms.iter().any(|t| t.frac_track.is_some());
    if has_frac && layout.stride != layout.bits {
        return Err(Error::param("fraction tracks need a packed layout"));
    }
    let mass: i64 = terms.iter().map(|t| t.coef.abs()).sum();
    let m = i64::from(layout.radix);
    let tail = m - 1;
    // Fractions lie in [0, 1), so the fraction carry sum c_i r_i stays
    // strictly between the negative and the positive coefficient sums.
    let (mut lo, mut hi) = (0, 0);
    if has_frac {
        let neg: i64 = terms.iter().map(|t| t.coef.min(0)).sum();
        let pos: i64 = terms.iter().map(|t| t.coef.max(0)).sum();
        lo = if neg < 0 { neg + 1 } else { 0 };
        hi = if pos > 0 { pos - 1 } else { 0 };
    }
    let starts: Vec<LinState> = (lo..=hi)
        .map(|g| LinState {
            offset: 0,
            carry: g,
            fcarry: g,
            done: 0,
            signs: 0,
        })
        .collect();
    let step_terms = terms.to_vec();
    let step = move |s: &LinState, col: &[TrackSymbol], out: &mut Vec<LinState>| {
        let mut first = s.clone();
        if first.offset == 0 {
            first.fcarry *= m;
        }
        let mut branches = vec![first];
        for t in &step_terms {
            let tr = t.int_track;
            let sym = col[tr];
            let mut next = Vec::with_capacity(branches.len() * 2);
            for mut b in branches.drain(..) {
                if b.done & (1 << tr) != 0 {
                    if sym.is_pad() {
                        next.push(b);
                    }
                    continue;
                }
                let Some(bit) = sym.bit() else { continue };
                if b.offset == 0 {
                    let mut signed = b.clone();
                    signed.done |= 1 << tr;
                    signed.signs |= u64::from(bit) << tr;
                    next.push(signed);
                }
                if b.offset < layout.bits {
                    b.carry += t.coef * (i64::from(bit) << b.offset);
                    next.push(b);
                } else if bit == 0 {
                    next.push(b);
                }
            }
            branches = next;
            if let Some(fr) = t.frac_track {
                let sym = col[fr];
                branches.retain_mut(|b| {
                    if b.done & (1 << fr) != 0 {
                        return sym.is_pad();
                    }
                    match sym.bit() {
                        None if b.offset == 0 => {
                            b.done |= 1 << fr;
                            true
                        }
                        None => false,
                        Some(bit) => {
                            b.fcarry -= t.coef * (i64::from(bit) << b.offset);
                            true
                        }
                    }
                });
            }
            if branches.is_empty() {
                return;
            }
        }
        for mut b in branches {
            if b.offset + 1 == layout.bits {
                let mut total = b.carry;
                for t in &step_terms {
                    if (b.signs >> t.int_track) & 1 == 1 {
                        total += t.coef * tail;
                    }
                }
                if total.rem_euclid(m) != 0 {
                    continue;
                }
                b.carry = total.div_euclid(m);
                if b.carry.abs() > mass || b.fcarry < lo || b.fcarry > hi {
                    continue;
                }
            }
            b.offset = (b.offset + 1) % layout.stride;
            out.push(b);
        }
    };
    let int_mask: u64 = terms.iter().map(|t| 1u64 << t.int_track).sum();
    let frac_mask: u64 = terms.iter().filter_map(|t| t.frac_track).map(|f| 1u64 << f).sum();
    let acc_terms = terms.to_vec();
    let accept = move |s: &LinState| {
        let fixed: i64 = acc_terms
            .iter()
            .filter(|t| (s.signs >> t.int_track) & 1 == 1)
            .map(|t| t.coef)
            .sum();
        s.done & int_mask == int_mask
            && (s.offset == 0 || s.done & frac_mask == frac_mask)
            && s.fcarry == 0
            && s.carry == fixed
    };
    let nfa = explore(arity, starts, step, accept, budget)?;
    AutomaticRelation::from_nfa(nfa, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_encoding() {
        let b = IntLayout::binary();
        let cases = [(0, "0"), (-1, "1"), (3, "110"), (-3, "101"), (-6, "0101"), (4, "0010")];
        for (v, s) in cases {
            assert_eq!(b.encode(&v.into()), Word::from(s), "{v}");
            assert_eq!(b.decode(&Word::from(s)), Some(v.into()));
        }
        assert_eq!(b.decode(&Word::from("00")), None);
        assert_eq!(b.decode(&Word::from("11")), None);
        let t = IntLayout::packed(3);
        for v in -40..=40 {
            let w = t.encode(&v.into());
            assert_eq!(t.decode(&w), Some(v.into()));
            assert!(t.language().accepts(&[w]).unwrap());
        }
    }

    #[test]
    fn language_matches_decoder() {
        for lay in [IntLayout::binary(), IntLayout::separated(3), IntLayout::packed(3)] {
            let lang = lay.language();
            for w in Word::all_up_to(8) {
                assert_eq!(lang.accepts(std::slice::from_ref(&w)).unwrap(), lay.decode(&w).is_some(), "{w}");
            }
        }
    }

    #[test]
    fn weighted_sum_relation() {
        // 2a - b + 3c = 0 on binary integers
        let lay = IntLayout::binary();
        let terms = [(2, 0), (-1, 1), (3, 2)].map(|(coef, int_track)| Term {
            coef,
            int_track,
            frac_track: None,
        });
        let rel = linear_relation(lay, 3, &terms, UNBOUNDED).unwrap();
        for a in -6i64..=6 {
            for c in -6i64..=6 {
                let words = [a, 2 * a + 3 * c, c].map(|v| lay.encode(&v.into()));
                assert!(rel.accepts(&words).unwrap());
                let off = [a, 2 * a + 3 * c + 1, c].map(|v| lay.encode(&v.into()));
                assert!(!rel.accepts(&off).unwrap());
            }
        }
    }
}

//! The block supermartingale that bets against one word of length `n`.
//!
//! Inside a block of `nk` bits the capital follows the fair martingale that
//! moves all mass off `w` in each aligned `n`-block, scaled to integers by
//! `(2^n - 1)^k`, with the root raised to `2^(nk-1)`. Completed blocks
//! double the capital; any aligned occurrence of `w` zeroes it for good.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::automata::{explore, AutomaticRelation, TrackSymbol, Word};
use crate::error::{Error, Result};
use crate::groups::IntLayout;

/// Longest supported forbidden word; `nk` grows like `n 2^n`.
pub const MAX_FORBIDDEN_LEN: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenWord {
    word: Word,
    k: usize,
}

impl ForbiddenWord {
    pub fn new(word: &Word) -> Result<Self> {
        let n = word.len();
        if n == 0 {
            return Err(Error::param("forbidden word must be nonempty"));
        }
        if n > MAX_FORBIDDEN_LEN {
            return Err(Error::param(format!("forbidden word longer than {MAX_FORBIDDEN_LEN}")));
        }
        // least k with (2^n / (2^n - 1))^k >= 2
        let base = BigInt::from((1u32 << n) - 1);
        let mut k = 1;
        while BigInt::one() << (n * k) < (base.pow(k as u32) << 1) {
            k += 1;
        }
        Ok(ForbiddenWord { word: word.clone(), k })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Block length `nk`.
    pub fn block(&self) -> usize {
        self.n() * self.k
    }

    /// Per-block growth factor `2^n / (2^n - 1)`.
    pub fn q(&self) -> BigRational {
        let two_n = BigInt::one() << self.n();
        BigRational::new(two_n.clone(), two_n - 1)
    }

    /// `(2^n - 1)^k`.
    pub fn scale(&self) -> BigInt {
        BigInt::from((1u32 << self.n()) - 1).pow(self.k as u32)
    }

    /// Capital of the empty word, `2^(nk-1)`.
    pub fn root(&self) -> BigInt {
        BigInt::one() << (self.block() - 1)
    }

    /// One-line parameter summary.
    pub fn manifest(&self) -> String {
        format!(
            "asm forbidden-word w={} n={} q={} k={} scale={} root={}",
            self.word,
            self.n(),
            self.q(),
            self.k,
            self.scale(),
            self.root()
        )
    }

    fn word_bits(&self) -> u32 {
        self.word.bits().iter().enumerate().map(|(i, &b)| u32::from(b) << i).sum()
    }

    /// In-block capital after `j` bits, `0 < j < nk`, none of whose complete
    /// `n`-blocks is `w`; `prefix` says whether the trailing partial
    /// `n`-block is a prefix of `w`.
    fn partial_value(&self, j: usize, prefix: bool) -> BigInt {
        let n = self.n();
        let (f, r) = (j / n, j % n);
        let base = BigInt::from((1u32 << n) - 1);
        let tail = (BigInt::one() << (n - r)) - u32::from(prefix);
        (BigInt::one() << (n * f + r)) * base.pow((self.k - f - 1) as u32) * tail
    }

    /// Exact capital of `tau`.
    pub fn capital(&self, tau: &Word) -> BigInt {
        let (n, nk) = (self.n(), self.block());
        let bits = tau.bits();
        if bits.chunks_exact(n).any(|c| c == self.word.bits()) {
            return BigInt::zero();
        }
        let (s, j) = (bits.len() / nk, bits.len() % nk);
        let inner = if j == 0 {
            self.root()
        } else {
            let partial = &bits[bits.len() - j % n..];
            self.partial_value(j, self.word.bits().starts_with(partial))
        };
        inner << s
    }

    /// Graph of `tau -> capital` with values in the `nk`-separated layout.
    pub fn graph(&self, budget: usize) -> Result<AutomaticRelation> {
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum St {
            /// Value is zero: output `0`, input has an aligned `w`.
            Zero { out: bool, pos: usize, cur: u32, found: bool },
            /// Inside a complete block; output digits are all zero.
            Full { pos: usize, cur: u32 },
            /// Final partial block with guessed value `t`, `j` bits read.
            Last { t: usize, j: usize, cur: u32 },
            /// Input ended; writing the rest of value `t`.
            Tail { t: usize, off: usize },
        }
        let (n, nk) = (self.n(), self.block());
        let layout = IntLayout::separated(nk);
        let wbits = self.word_bits();
        let mut values = vec![self.root()];
        for j in 1..nk {
            for prefix in [false, true] {
                let v = self.partial_value(j, prefix);
                if !values.contains(&v) {
                    values.push(v);
                }
            }
        }
        let encs: Vec<Word> = values.iter().map(|v| layout.encode(v)).collect();
        let lasts = || (0..values.len()).map(|t| St::Last { t, j: 0, cur: 0 });
        let mut starts = vec![St::Zero { out: false, pos: 0, cur: 0, found: false }, St::Full { pos: 0, cur: 0 }];
        starts.extend(lasts());
        // Feeds one input bit into the aligned n-block tracker; false when a
        // block equal to w completes.
        let feed = |pos: usize, cur: u32, bit: u8| -> (usize, u32, bool) {
            let cur = cur | (u32::from(bit) << (pos % n));
            if (pos + 1).is_multiple_of(n) {
                (pos + 1, 0, cur != wbits)
            } else {
                (pos + 1, cur, true)
            }
        };
        let step = |s: &St, col: &[TrackSymbol], out: &mut Vec<St>| {
            let (inp, outp) = (col[0], col[1]);
            match *s {
                St::Zero { out: emitted, pos, cur, found } => {
                    let ok_out = if emitted { outp.is_pad() } else { outp.bit() == Some(0) };
                    if !ok_out {
                        return;
                    }
                    let (pos, cur, found) = match inp.bit() {
                        Some(b) => {
                            let (p, c, clean) = feed(pos, cur, b);
                            (p % n, c, found || !clean)
                        }
                        None => (pos, cur, found),
                    };
                    out.push(St::Zero { out: true, pos, cur, found });
                }
                St::Full { pos, cur } => {
                    let (Some(b), Some(0)) = (inp.bit(), outp.bit()) else { return };
                    let (pos, cur, clean) = feed(pos, cur, b);
                    if !clean {
                        return;
                    }
                    if pos == nk {
                        out.push(St::Full { pos: 0, cur: 0 });
                        out.extend(lasts());
                    } else {
                        out.push(St::Full { pos, cur });
                    }
                }
                St::Last { t, j, cur } => {
                    if outp.bit() != encs[t].get(j) {
                        return;
                    }
                    match inp.bit() {
                        Some(b) => {
                            let (j, cur, clean) = feed(j, cur, b);
                            if clean && j < nk {
                                out.push(St::Last { t, j, cur });
                            }
                        }
                        None => {
                            let v = if j == 0 {
                                self.root()
                            } else {
                                let r = j % n;
                                self.partial_value(j, (cur ^ wbits) & ((1 << r) - 1) == 0)
                            };
                            if v == values[t] {
                                out.push(St::Tail { t, off: j + 1 });
                            }
                        }
                    }
                }
                St::Tail { t, off } => {
                    if inp.is_pad() && outp.bit() == encs[t].get(off) && outp.bit().is_some() {
                        out.push(St::Tail { t, off: off + 1 });
                    }
                }
            }
        };
        let accept = |s: &St| match *s {
            St::Zero { out, found, .. } => out && found,
            St::Tail { t, off } => off == encs[t].len(),
            _ => false,
        };
        let nfa = explore(2, starts, step, accept, budget)?;
        AutomaticRelation::from_nfa(nfa, budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::UNBOUNDED;

    #[test]
    fn parameters_for_double_zero() {
        let f = ForbiddenWord::new(&Word::from("00")).unwrap();
        assert_eq!((f.n(), f.k(), f.block()), (2, 3, 6));
        assert_eq!(f.q(), BigRational::new(4.into(), 3.into()));
        assert_eq!(f.scale(), BigInt::from(27));
        assert_eq!(f.root(), BigInt::from(32));
        let one = ForbiddenWord::new(&Word::from("1")).unwrap();
        assert_eq!((one.n(), one.k()), (1, 1));
        assert!(ForbiddenWord::new(&Word::new()).is_err());
    }

    #[test]
    fn small_table_for_double_zero() {
        let f = ForbiddenWord::new(&Word::from("00")).unwrap();
        let cap = |s: &str| f.capital(&Word::from(s));
        assert_eq!(cap(""), BigInt::from(32));
        assert_eq!((cap("0"), cap("1")), (18.into(), 36.into()));
        for s in ["01", "10", "11"] {
            assert_eq!(cap(s), BigInt::from(36));
        }
        assert_eq!(cap("00"), BigInt::zero());
        assert_eq!(cap("111111"), BigInt::from(64));
        assert_eq!(cap("0011111"), BigInt::zero());
    }

    /// Unscaled in-block martingale for every word up to the block length,
    /// by averaging children upward from the indicator table. Level `j`
    /// lists the words of length `j` in binary order.
    fn block_table(f: &ForbiddenWord) -> Vec<Vec<BigRational>> {
        let top: Vec<BigRational> = Word::all_of_length(f.block())
            .map(|b| {
                if b.bits().chunks(f.n()).any(|c| c == f.word().bits()) {
                    BigRational::zero()
                } else {
                    f.q().pow(f.k() as i32)
                }
            })
            .collect();
        let mut levels = vec![top];
        for _ in 0..f.block() {
            let below = levels.last().unwrap();
            let up = below.chunks(2).map(|p| (&p[0] + &p[1]) / BigRational::from_integer(2.into())).collect();
            levels.push(up);
        }
        levels.reverse();
        levels
    }

    fn index_msb(w: &Word) -> usize {
        w.bits().iter().fold(0, |acc, &b| 2 * acc + usize::from(b))
    }

    fn reference(f: &ForbiddenWord, table: &[Vec<BigRational>], tau: &Word) -> BigRational {
        let nk = f.block();
        let s = tau.len() / nk;
        if tau.bits()[..s * nk].chunks(f.n()).any(|c| c == f.word().bits()) {
            return BigRational::zero();
        }
        let rest = tau.slice(s * nk, tau.len());
        let inner = if rest.is_empty() {
            BigRational::from_integer(f.root())
        } else {
            &table[rest.len()][index_msb(&rest)] * BigRational::from_integer(f.scale())
        };
        inner * BigRational::from_integer(BigInt::one() << s)
    }

    #[test]
    fn capital_matches_backpropagation() {
        for w in ["0", "1", "00", "01", "11", "010"] {
            let f = ForbiddenWord::new(&Word::from(w)).unwrap();
            let table = block_table(&f);
            assert_eq!(table[0][0], BigRational::one());
            for tau in Word::all_up_to((f.block() + 3).min(13)) {
                assert_eq!(BigRational::from_integer(f.capital(&tau)), reference(&f, &table, &tau), "{w} {tau}");
            }
        }
    }

    #[test]
    fn graph_agrees_with_capital() {
        for w in ["1", "00", "10"] {
            let f = ForbiddenWord::new(&Word::from(w)).unwrap();
            let g = f.graph(UNBOUNDED).unwrap();
            assert!(g.is_function(&[1]).unwrap());
            let lay = IntLayout::separated(f.block());
            for tau in Word::all_up_to(12) {
                let out = g.apply(std::slice::from_ref(&tau), &[1]).unwrap().expect("total");
                assert_eq!(lay.decode(&out[0]), Some(f.capital(&tau)), "{w} {tau}");
            }
        }
    }
}

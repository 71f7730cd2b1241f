//! Synchronous multi-track automata over `{0, 1}` with end padding.
//!
//! A tuple of binary words is read column by column; shorter words are
//! padded at the end with [`TrackSymbol::Pad`]. A column of arity `k` is
//! stored as a letter index `sum(sym_i * 3^i)` so that transition tables
//! are dense arrays.

mod builder;
mod dfa;
mod relation;
mod text;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub use builder::{explore, explore_dfa};
pub use dfa::{Dfa, Nfa};
pub use relation::{AutomaticRelation, UNBOUNDED};
pub use text::{parse_dfa, to_dot, write_dfa};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrackSymbol {
    Zero,
    One,
    Pad,
}

impl TrackSymbol {
    pub const ALL: [TrackSymbol; 3] = [TrackSymbol::Zero, TrackSymbol::One, TrackSymbol::Pad];

    pub fn index(self) -> usize {
        match self {
            TrackSymbol::Zero => 0,
            TrackSymbol::One => 1,
            TrackSymbol::Pad => 2,
        }
    }

    pub fn from_index(i: usize) -> Self {
        match i {
            0 => TrackSymbol::Zero,
            1 => TrackSymbol::One,
            _ => TrackSymbol::Pad,
        }
    }

    pub fn from_bit(b: u8) -> Self {
        if b == 0 {
            TrackSymbol::Zero
        } else {
            TrackSymbol::One
        }
    }

    pub fn bit(self) -> Option<u8> {
        match self {
            TrackSymbol::Zero => Some(0),
            TrackSymbol::One => Some(1),
            TrackSymbol::Pad => None,
        }
    }

    pub fn is_pad(self) -> bool {
        self == TrackSymbol::Pad
    }

    pub fn to_char(self) -> char {
        match self {
            TrackSymbol::Zero => '0',
            TrackSymbol::One => '1',
            TrackSymbol::Pad => 'P',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(TrackSymbol::Zero),
            '1' => Some(TrackSymbol::One),
            'P' => Some(TrackSymbol::Pad),
            _ => None,
        }
    }
}

/// Number of letters of the padded column alphabet of the given arity.
pub fn alphabet_size(arity: usize) -> usize {
    3usize.pow(arity as u32)
}

pub fn encode_column(col: &[TrackSymbol]) -> usize {
    col.iter().rev().fold(0, |acc, s| acc * 3 + s.index())
}

pub fn decode_column(letter: usize, arity: usize) -> Vec<TrackSymbol> {
    let mut out = Vec::with_capacity(arity);
    let mut l = letter;
    for _ in 0..arity {
        out.push(TrackSymbol::from_index(l % 3));
        l /= 3;
    }
    out
}

/// A finite binary word.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_bits(bits: impl IntoIterator<Item = u8>) -> Self {
        Word(bits.into_iter().map(|b| (b != 0) as u8).collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, bit: u8) {
        self.0.push((bit != 0) as u8);
    }

    pub fn pushed(&self, bit: u8) -> Word {
        let mut w = self.clone();
        w.push(bit);
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Track symbol at column `i`, `Pad` past the end.
    pub fn symbol(&self, i: usize) -> TrackSymbol {
        match self.0.get(i) {
            Some(&b) => TrackSymbol::from_bit(b),
            None => TrackSymbol::Pad,
        }
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        (0u64..(1u64 << len)).map(move |x| Word((0..len).map(|i| ((x >> (len - 1 - i)) & 1) as u8).collect()))
    }

    /// All words of length at most `max_len`, in length-lex order.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Word> {
        (0..=max_len).flat_map(Word::all_of_length)
    }
}

impl Ord for Word {
    /// Length-lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `0`/`1` strings; `ε`, `_` and the empty string denote the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" || s == "_" {
            return Ok(Word::new());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::param(format!("not a binary word: {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl From<&str> for Word {
    /// Panics on non-binary input; meant for literals.
    fn from(s: &str) -> Self {
        s.parse().expect("binary word literal")
    }
}

/// Convolution of a tuple of words: one column per position, end-padded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvWord {
    arity: usize,
    columns: Vec<Vec<TrackSymbol>>,
}

/// Convolves a nonempty list of words.
pub fn convolve(words: &[Word]) -> Result<ConvWord> {
    if words.is_empty() {
        return Err(Error::param("convolution of an empty word list"));
    }
    Ok(ConvWord::of(words))
}

impl ConvWord {
    pub(crate) fn of(words: &[Word]) -> Self {
        let len = words.iter().map(Word::len).max().unwrap_or(0);
        let columns = (0..len)
            .map(|i| words.iter().map(|w| w.symbol(i)).collect())
            .collect();
        ConvWord {
            arity: words.len(),
            columns,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Vec<TrackSymbol>] {
        &self.columns
    }

    pub fn letters(&self) -> Vec<usize> {
        self.columns.iter().map(|c| encode_column(c)).collect()
    }

    pub fn from_letters(arity: usize, letters: &[usize]) -> Self {
        ConvWord {
            arity,
            columns: letters.iter().map(|&l| decode_column(l, arity)).collect(),
        }
    }

    /// Padding validity: no all-PAD column, PAD only as a suffix of each track.
    pub fn is_valid(&self) -> bool {
        let mut ended = vec![false; self.arity];
        for col in &self.columns {
            if col.iter().all(|s| s.is_pad()) {
                return false;
            }
            for (t, s) in col.iter().enumerate() {
                if s.is_pad() {
                    ended[t] = true;
                } else if ended[t] {
                    return false;
                }
            }
        }
        true
    }

    /// Strips padding from every track. Only meaningful for valid convolutions.
    pub fn deconvolve(&self) -> Vec<Word> {
        (0..self.arity)
            .map(|t| Word::from_bits(self.columns.iter().filter_map(|c| c[t].bit())))
            .collect()
    }
}

/// Length-lex comparison of word tuples: by convolution length, then
/// column by column with `0 < 1 < PAD`, matching `AutomaticRelation::ll_less`.
pub fn tuple_cmp(a: &[Word], b: &[Word]) -> Ordering {
    let la = a.iter().map(Word::len).max().unwrap_or(0);
    let lb = b.iter().map(Word::len).max().unwrap_or(0);
    la.cmp(&lb).then_with(|| {
        (0..la)
            .map(|i| {
                let ca = a.iter().map(|w| w.symbol(i));
                let cb = b.iter().map(|w| w.symbol(i));
                ca.cmp(cb)
            })
            .find(|o| o.is_ne())
            .unwrap_or_else(|| a.len().cmp(&b.len()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolve_pads_at_end() {
        let c = convolve(&["01".into(), "1".into()]).unwrap();
        use TrackSymbol::*;
        assert_eq!(c.columns(), &[vec![Zero, One], vec![One, Pad]]);
    }

    #[test]
    fn convolve_empty_words() {
        let c = convolve(&[Word::new(), Word::new()]).unwrap();
        assert!(c.is_empty());
        assert!(convolve(&[]).is_err());
    }

    #[test]
    fn convolve_three_tracks_round_trips() {
        use TrackSymbol::*;
        let words: Vec<Word> = vec!["101".into(), "0".into(), "11".into()];
        let c = convolve(&words).unwrap();
        assert_eq!(
            c.columns(),
            &[vec![One, Zero, One], vec![Zero, Pad, One], vec![One, Pad, Pad]]
        );
        assert!(c.is_valid());
        assert_eq!(c.deconvolve(), words);
    }

    #[test]
    fn column_codes_round_trip() {
        for arity in 0..4 {
            for l in 0..alphabet_size(arity) {
                assert_eq!(encode_column(&decode_column(l, arity)), l);
            }
        }
    }

    #[test]
    fn word_order_is_length_lex() {
        let mut ws: Vec<Word> = vec!["10".into(), "1".into(), Word::new(), "01".into(), "0".into()];
        ws.sort();
        let shown: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["ε", "0", "1", "01", "10"]);
        assert_eq!(Word::all_up_to(2).count(), 7);
    }
}

//! Infinite binary sequences given by finite specifications, and bounded
//! subword probes.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::Word;
use crate::error::{Error, Result};

/// Longest subword length the probes accept.
pub const MAX_SUBWORD_LEN: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSpec {
    /// `u v v v ...`
    Periodic { u: Word, v: Word },
    /// Every binary word in length-lex order, concatenated.
    Champernowne,
    /// Fixed point of the morphism `0 -> images[0]`, `1 -> images[1]`
    /// starting from `seed`.
    Morphic { images: [Word; 2], seed: u8 },
    /// `0`/`1` characters of a file; whitespace is skipped.
    File(PathBuf),
    /// ChaCha8 bits from a seed.
    Prng(u64),
}

impl SequenceSpec {
    pub fn periodic(u: Word, v: Word) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::param("period word must be nonempty"));
        }
        Ok(SequenceSpec::Periodic { u, v })
    }

    pub fn morphic(images: [Word; 2], seed: u8) -> Result<Self> {
        if seed > 1 {
            return Err(Error::param("seed must be a bit"));
        }
        let img = &images[usize::from(seed)];
        if img.len() < 2 || img.get(0) != Some(seed) {
            return Err(Error::param(format!("morphism is not prolongable on {seed}")));
        }
        Ok(SequenceSpec::Morphic { images, seed })
    }

    /// The Thue–Morse sequence `0110100110010110...`.
    pub fn thue_morse() -> Self {
        SequenceSpec::Morphic {
            images: [Word::from("01"), Word::from("10")],
            seed: 0,
        }
    }

    /// First `len` bits.
    pub fn prefix(&self, len: usize) -> Result<Word> {
        match self {
            SequenceSpec::Periodic { u, v } => {
                let bits = u.bits().iter().chain(v.bits().iter().cycle()).take(len).copied();
                Ok(Word::from_bits(bits))
            }
            SequenceSpec::Champernowne => {
                let mut bits = Vec::with_capacity(len);
                let mut n = 1;
                while bits.len() < len {
                    for w in Word::all_of_length(n) {
                        bits.extend_from_slice(w.bits());
                        if bits.len() >= len {
                            break;
                        }
                    }
                    n += 1;
                }
                bits.truncate(len);
                Ok(Word::from_bits(bits))
            }
            SequenceSpec::Morphic { images, seed } => {
                let mut cur = vec![*seed];
                while cur.len() < len {
                    let next: Vec<u8> = cur.iter().flat_map(|&b| images[usize::from(b)].bits().to_vec()).collect();
                    if next.len() <= cur.len() {
                        return Err(Error::param("morphism generates a finite word"));
                    }
                    cur = next;
                }
                cur.truncate(len);
                Ok(Word::from_bits(cur))
            }
            SequenceSpec::File(path) => {
                let text = fs::read_to_string(path)?;
                let mut bits = Vec::with_capacity(len);
                for (i, line) in text.lines().enumerate() {
                    for c in line.chars() {
                        match c {
                            '0' => bits.push(0),
                            '1' => bits.push(1),
                            c if c.is_whitespace() => {}
                            c => return Err(Error::parse(i + 1, format!("unexpected character {c:?}"))),
                        }
                    }
                    if bits.len() >= len {
                        break;
                    }
                }
                if bits.len() < len {
                    return Err(Error::FileUnderflow {
                        needed: len,
                        available: bits.len(),
                    });
                }
                bits.truncate(len);
                Ok(Word::from_bits(bits))
            }
            SequenceSpec::Prng(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok(Word::from_bits((0..len).map(|_| u8::from(rng.gen::<bool>()))))
            }
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    /// `periodic:<u>,<v>`, `champernowne`, `thue-morse`,
    /// `morphic:<a>-><img>;<b>-><img>@<seed>`, `file:<path>`, `prng:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::param(format!("sequence spec {s:?}: {msg}"));
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "champernowne" => Ok(SequenceSpec::Champernowne),
            "thue-morse" => Ok(SequenceSpec::thue_morse()),
            "periodic" => {
                let (u, v) = arg.split_once(',').ok_or_else(|| bad("expected <u>,<v>"))?;
                SequenceSpec::periodic(u.parse()?, v.parse()?)
            }
            "morphic" => {
                let (rules, seed) = arg.rsplit_once('@').ok_or_else(|| bad("missing @<seed>"))?;
                let mut images: [Option<Word>; 2] = [None, None];
                for rule in rules.split(';') {
                    let (a, img) = rule.split_once("->").ok_or_else(|| bad("rule needs ->"))?;
                    let slot = match a.trim() {
                        "0" => 0,
                        "1" => 1,
                        _ => return Err(bad("rule letter must be 0 or 1")),
                    };
                    if images[slot].replace(img.parse()?).is_some() {
                        return Err(bad("letter has two rules"));
                    }
                }
                let [Some(i0), Some(i1)] = images else {
                    return Err(bad("need a rule for each letter"));
                };
                let seed = match seed.trim() {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(bad("seed must be 0 or 1")),
                };
                SequenceSpec::morphic([i0, i1], seed)
            }
            "file" if !arg.is_empty() => Ok(SequenceSpec::File(PathBuf::from(arg))),
            "prng" => arg.parse().map(SequenceSpec::Prng).map_err(|_| bad("seed must be a u64")),
            _ => Err(bad("unknown kind")),
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plain = |w: &Word| w.bits().iter().map(|b| if *b == 0 { '0' } else { '1' }).collect::<String>();
        match self {
            SequenceSpec::Periodic { u, v } => write!(f, "periodic:{},{}", plain(u), plain(v)),
            SequenceSpec::Champernowne => f.write_str("champernowne"),
            SequenceSpec::Morphic { images, seed } => {
                write!(f, "morphic:0->{};1->{}@{seed}", plain(&images[0]), plain(&images[1]))
            }
            SequenceSpec::File(p) => write!(f, "file:{}", p.display()),
            SequenceSpec::Prng(seed) => write!(f, "prng:{seed}"),
        }
    }
}

/// First `len` bits of `spec`.
pub fn prefix(spec: &SequenceSpec, len: usize) -> Result<Word> {
    spec.prefix(len)
}

/// Length-`l` words that do not occur in the first `horizon` bits, in
/// length-lex order.
pub fn missing_words(spec: &SequenceSpec, l: usize, horizon: usize) -> Result<Vec<Word>> {
    if l > MAX_SUBWORD_LEN {
        return Err(Error::param(format!("subword length above {MAX_SUBWORD_LEN}")));
    }
    let x = spec.prefix(horizon)?;
    Ok(absent_subwords(&x, l))
}

/// Whether every word of length `l` occurs in the first `horizon` bits.
pub fn is_disjunctive_up_to(spec: &SequenceSpec, l: usize, horizon: usize) -> Result<bool> {
    Ok(missing_words(spec, l, horizon)?.is_empty())
}

/// Length-`l` words absent from `x`, by a rolling window over `x`.
fn absent_subwords(x: &Word, l: usize) -> Vec<Word> {
    let mut seen = vec![false; 1 << l];
    let mask = (1usize << l) - 1;
    let mut window = 0usize;
    for (i, &b) in x.bits().iter().enumerate() {
        window = ((window << 1) | usize::from(b)) & mask;
        if i + 1 >= l {
            seen[window] = true;
        }
    }
    if l == 0 {
        seen[0] = true;
    }
    Word::all_of_length(l).zip(seen).filter(|(_, s)| !s).map(|(w, _)| w).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(s: &str) -> SequenceSpec {
        s.parse().unwrap()
    }

    /// Naive scan: does `w` occur anywhere in `x`.
    fn occurs(x: &Word, w: &Word) -> bool {
        w.is_empty() || x.bits().windows(w.len()).any(|c| c == w.bits())
    }

    #[test]
    fn periodic_prefix() {
        assert_eq!(spec("periodic:,10").prefix(5).unwrap(), Word::from("10101"));
        assert_eq!(spec("periodic:0,1").prefix(4).unwrap(), Word::from("0111"));
        assert!("periodic:01,".parse::<SequenceSpec>().is_err());
    }

    #[test]
    fn champernowne_prefix() {
        let mut oracle = String::new();
        for n in 1..6 {
            for x in 0..(1u32 << n) {
                oracle.push_str(&format!("{x:0n$b}"));
            }
        }
        let got = SequenceSpec::Champernowne.prefix(100).unwrap();
        assert_eq!(got, Word::from(&oracle[..100]));
        assert_eq!(got.prefix(10), Word::from("0100011011"));
    }

    #[test]
    fn thue_morse_prefix() {
        let tm = spec("morphic:0->01;1->10@0");
        assert_eq!(tm, SequenceSpec::thue_morse());
        let x = tm.prefix(64).unwrap();
        for (i, &b) in x.bits().iter().enumerate() {
            assert_eq!(u32::from(b), (i as u32).count_ones() % 2, "bit {i}");
        }
        assert!("morphic:0->10;1->01@0".parse::<SequenceSpec>().is_err());
        assert!(spec("morphic:0->01;1->@0").prefix(10).is_err());
    }

    #[test]
    fn prng_is_deterministic() {
        let a = SequenceSpec::Prng(7).prefix(200).unwrap();
        assert_eq!(a, SequenceSpec::Prng(7).prefix(200).unwrap());
        assert_ne!(a, SequenceSpec::Prng(8).prefix(200).unwrap());
    }

    #[test]
    fn file_prefix_and_underflow() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bits.txt");
        fs::write(&path, "0110\n 10 1\n").unwrap();
        let s = SequenceSpec::File(path.clone());
        assert_eq!(s.prefix(7).unwrap(), Word::from("0110101"));
        assert!(matches!(s.prefix(8), Err(Error::FileUnderflow { needed: 8, available: 7 })));
        fs::write(&path, "01x\n").unwrap();
        assert!(matches!(s.prefix(2), Err(Error::Parse { line: 1, .. })));
        fs::write(&path, "1111").unwrap();
        assert_eq!(missing_words(&s, 1, 4).unwrap(), vec![Word::from("0")]);
    }

    #[test]
    fn disjunctivity_examples() {
        let ch = SequenceSpec::Champernowne;
        assert!(is_disjunctive_up_to(&ch, 3, 64).unwrap());
        assert_eq!(missing_words(&ch, 3, 64).unwrap(), Vec::<Word>::new());
        let alt = spec("periodic:,01");
        assert!(!is_disjunctive_up_to(&alt, 2, 100).unwrap());
        assert_eq!(missing_words(&alt, 2, 100).unwrap(), vec![Word::from("00"), Word::from("11")]);
        assert!(is_disjunctive_up_to(&alt, 0, 0).unwrap());
    }

    #[test]
    fn display_round_trip() {
        for s in ["periodic:,01", "periodic:1,0", "champernowne", "morphic:0->01;1->10@0", "prng:42", "file:/tmp/x"] {
            assert_eq!(spec(s).to_string(), s);
        }
    }

    proptest! {
        #[test]
        fn prefixes_are_consistent(seed in 0u64..1000, a in 0usize..200, b in 0usize..200) {
            let (lo, hi) = (a.min(b), a.max(b));
            for s in [SequenceSpec::Prng(seed), SequenceSpec::Champernowne, SequenceSpec::thue_morse()] {
                let short = s.prefix(lo).unwrap();
                prop_assert_eq!(short.len(), lo);
                prop_assert!(short.is_prefix_of(&s.prefix(hi).unwrap()));
            }
        }

        #[test]
        fn missing_words_match_scan(bits in proptest::collection::vec(0u8..2, 0..60), l in 0usize..5) {
            let x = Word::from_bits(bits);
            let expect: Vec<Word> = Word::all_of_length(l).filter(|w| !occurs(&x, w)).collect();
            prop_assert_eq!(absent_subwords(&x, l), expect);
        }
    }
}

//! Words in the free group on the two multitwist generators.
//!
//! Letters are written `a`, `b` for the generators and `A`, `B` for their
//! inverses. Words are always kept freely reduced.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// One of the four letters `a`, `A`, `b`, `B`.
///
/// The derived order `a < A < b < B` is the letter order used for every
/// lexicographic comparison of words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    A,
    B,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn new(generator: Generator, positive: bool) -> Self {
        match (generator, positive) {
            (Generator::A, true) => Letter::A,
            (Generator::A, false) => Letter::AInv,
            (Generator::B, true) => Letter::B,
            (Generator::B, false) => Letter::BInv,
        }
    }

    pub fn generator(self) -> Generator {
        match self {
            Letter::A | Letter::AInv => Generator::A,
            Letter::B | Letter::BInv => Generator::B,
        }
    }

    /// `+1` for a generator, `-1` for an inverse.
    pub fn sign(self) -> i8 {
        match self {
            Letter::A | Letter::B => 1,
            Letter::AInv | Letter::BInv => -1,
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    /// Exchanges the two generators, keeping the sign.
    pub fn swap(self) -> Self {
        match self {
            Letter::A => Letter::B,
            Letter::AInv => Letter::BInv,
            Letter::B => Letter::A,
            Letter::BInv => Letter::AInv,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a' => Ok(Letter::A),
            'A' => Ok(Letter::AInv),
            'b' => Ok(Letter::B),
            'B' => Ok(Letter::BInv),
            other => Err(Error::InvalidLetter(other)),
        }
    }

    /// Position in [`Letter::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Freely reduces an arbitrary letter sequence.
pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for letter in raw {
        if out.last() == Some(&letter.inverse()) {
            out.pop();
        } else {
            out.push(letter);
        }
    }
    Word { letters: out }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// The reduced product `self * other`.
    pub fn concat(&self, other: &Word) -> Word {
        reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, n: u32) -> Word {
        (0..n).fold(Word::identity(), |acc, _| acc.concat(self))
    }

    /// Exchanges `a <-> b` and `A <-> B`.
    pub fn swap_generators(&self) -> Word {
        Word {
            letters: self.letters.iter().map(|l| l.swap()).collect(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(first), Some(last)) => self.letters.len() == 1 || *first != last.inverse(),
            _ => true,
        }
    }

    /// Strips inverse pairs from the two ends, giving a cyclically reduced
    /// conjugate.
    pub fn cyclic_reduce(&self) -> Word {
        let letters = &self.letters;
        let (mut lo, mut hi) = (0usize, letters.len());
        while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Word {
            letters: letters[lo..hi].to_vec(),
        }
    }

    /// Cyclic rotation starting at position `k`. Only a conjugate when the
    /// word is cyclically reduced.
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return Word::identity();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word { letters }
    }

    /// Builds a word from letters that are already known to be reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        Word { letters }
    }
}

/// `u v u^-1 v^-1`, reduced.
pub fn commutator(u: &Word, v: &Word) -> Word {
    reduce(
        u.letters
            .iter()
            .chain(v.letters.iter())
            .copied()
            .chain(u.inverse().letters)
            .chain(v.inverse().letters),
    )
}

/// `w(1) = ab`, `w(k) = [w(k-1), b]`. The k-th word lies in the (k-1)st
/// term of the lower central series and has length `2^k`.
pub fn nested_commutator(k: u32) -> Result<Word> {
    if k == 0 {
        return Err(Error::InvalidParameter("nested commutator depth must be >= 1".into()));
    }
    let b = Word::letter(Letter::B);
    let mut w = Word::from_reduced(vec![Letter::A, Letter::B]);
    for _ in 1..k {
        w = commutator(&w, &b);
    }
    Ok(w)
}

/// Every freely reduced word of exactly `len` letters, in lexicographic
/// order. There are `4 * 3^(len-1)` of them.
pub fn reduced_words(len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(len);
    extend_reduced(&mut buf, len, &mut |w| out.push(Word::from_reduced(w.to_vec())));
    out
}

/// Every cyclically reduced word of exactly `len` letters, in lexicographic
/// order.
pub fn cyclically_reduced_words(len: usize) -> Vec<Word> {
    reduced_words(len)
        .into_iter()
        .filter(Word::is_cyclically_reduced)
        .collect()
}

fn extend_reduced(buf: &mut Vec<Letter>, len: usize, visit: &mut impl FnMut(&[Letter])) {
    if buf.len() == len {
        visit(buf);
        return;
    }
    for l in Letter::ALL {
        if buf.last() == Some(&l.inverse()) {
            continue;
        }
        buf.push(l);
        extend_reduced(buf, len, visit);
        buf.pop();
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses and freely reduces. Any character outside `aAbB` is rejected.
    fn from_str(s: &str) -> Result<Word> {
        let letters = s.chars().map(Letter::from_char).collect::<Result<Vec<_>>>()?;
        Ok(reduce(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

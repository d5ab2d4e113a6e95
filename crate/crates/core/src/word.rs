//! Letters, reduced words, cyclic words and automorphisms.
//!
//! A letter is stored as `2 * generator + inverse_bit`, so inversion flips
//! the low bit and the letter order is `a < A < b < B < ...`. Words render
//! with lowercase for generators and uppercase for their inverses.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub fn generator(index: usize) -> Self {
        Letter((2 * index) as u8)
    }

    pub fn from_index(index: usize) -> Self {
        Letter(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn generator_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn symbol(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + (self.0 >> 1)) as char
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// The symmetric basis of a free group of rank `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::InvalidRank(rank));
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of letters, `2n`.
    pub fn size(&self) -> usize {
        2 * self.rank
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.size()).map(Letter::from_index)
    }

    pub fn generators(&self) -> impl Iterator<Item = Letter> {
        (0..self.rank).map(Letter::generator)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.index() < self.size()
    }

    pub fn parse_letter(&self, symbol: char) -> Result<Letter> {
        let letter = letter_of_symbol(symbol)?;
        if !self.contains(letter) {
            return Err(Error::LetterOutOfRange { symbol, rank: self.rank });
        }
        Ok(letter)
    }

    /// Parses and freely reduces a word string such as `"abA"`.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let letters = text
            .chars()
            .map(|c| self.parse_letter(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::reduce(letters))
    }

    /// All reduced words of exactly the given length, in lexicographic order.
    pub fn reduced_words(&self, len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(len);
        self.extend_reduced(len, &mut buf, &mut out);
        out
    }

    /// All reduced words with length at most `max_len`, shortest first.
    pub fn reduced_words_up_to(&self, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| self.reduced_words(l)).collect()
    }

    /// All cyclically reduced words of exactly the given length.
    pub fn cyclically_reduced_words(&self, len: usize) -> Vec<Word> {
        self.reduced_words(len)
            .into_iter()
            .filter(Word::is_cyclically_reduced)
            .collect()
    }

    fn extend_reduced(&self, len: usize, buf: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if buf.len() == len {
            out.push(Word(buf.clone()));
            return;
        }
        for l in self.letters() {
            if buf.last().is_some_and(|&p| p == l.inverse()) {
                continue;
            }
            buf.push(l);
            self.extend_reduced(len, buf, out);
            buf.pop();
        }
    }
}

fn letter_of_symbol(symbol: char) -> Result<Letter> {
    match symbol {
        'a'..='z' => Ok(Letter(2 * (symbol as u8 - b'a'))),
        'A'..='Z' => Ok(Letter(2 * (symbol as u8 - b'A') + 1)),
        _ => Err(Error::UnknownSymbol(symbol)),
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(alloc::vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Wraps letters already known to be reduced.
    pub fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[1] != p[0].inverse()));
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut cancel = 0;
        let (a, b) = (&self.0, &other.0);
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == b[cancel].inverse() {
            cancel += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
        out.extend_from_slice(&a[..a.len() - cancel]);
        out.extend_from_slice(&b[cancel..]);
        Word(out)
    }

    pub fn pow(&self, exponent: usize) -> Word {
        let mut out = Word::empty();
        for _ in 0..exponent {
            out = out.mul(self);
        }
        out
    }

    /// Appends a letter, assuming the result stays reduced.
    pub fn push(&mut self, l: Letter) {
        debug_assert!(self.last() != Some(l.inverse()));
        self.0.push(l);
    }

    pub fn with(&self, l: Letter) -> Word {
        let mut w = self.clone();
        w.push(l);
        w
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn suffix(&self, n: usize) -> Word {
        Word(self.0[self.0.len() - n..].to_vec())
    }

    pub fn subword(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    pub fn contains_subword(&self, pattern: &Word) -> bool {
        if pattern.is_empty() {
            return true;
        }
        self.0.windows(pattern.len()).any(|w| w == pattern.letters())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = conjugator * core * conjugator^-1` with `core`
    /// cyclically reduced. `core` is `None` for the identity.
    pub fn cyclic_reduce(&self) -> (Option<CyclicWord>, Word) {
        let w = &self.0;
        let mut k = 0;
        while 2 * k + 1 < w.len() && w[k] == w[w.len() - 1 - k].inverse() {
            k += 1;
        }
        if 2 * k >= w.len() {
            // Only possible for the empty word; a nonempty reduced word never
            // fully cancels against its own reverse.
            return (None, Word(w[..w.len() / 2].to_vec()));
        }
        let core = Word(w[k..w.len() - k].to_vec());
        (Some(CyclicWord::from_core(core)), Word(w[..k].to_vec()))
    }

    /// The word and its inverse, smaller one first.
    pub fn flip_canonical(&self) -> Word {
        let inv = self.inverse();
        if inv < *self {
            inv
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Word {
    /// Renders without the `e` placeholder for the identity.
    pub fn to_letters_string(&self) -> String {
        self.0.iter().map(|l| l.symbol()).collect()
    }
}

/// A conjugacy class of nontrivial elements, stored as the least rotation
/// of a cyclically reduced representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicWord(Word);

impl CyclicWord {
    /// Cyclically reduces `w`. Returns `None` for the identity.
    pub fn new(w: &Word) -> Option<Self> {
        w.cyclic_reduce().0
    }

    fn from_core(core: Word) -> Self {
        CyclicWord(least_rotation(&core))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn inverse(&self) -> Self {
        CyclicWord::from_core(self.0.inverse())
    }

    /// The class of `g` identified with the class of `g^-1`.
    pub fn unoriented(&self) -> Self {
        let inv = self.inverse();
        if inv < *self {
            inv
        } else {
            self.clone()
        }
    }

    /// Returns `(h, k)` with `self = h^k` and `h` root-free.
    pub fn primitive_root(&self) -> (CyclicWord, usize) {
        let w = self.0.letters();
        let n = w.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| w[i] == w[(i + p) % n]))
            .unwrap_or(n);
        (CyclicWord::from_core(Word(w[..period].to_vec())), n / period)
    }

    pub fn is_root_free(&self) -> bool {
        self.primitive_root().1 == 1
    }

    pub fn pow(&self, k: usize) -> CyclicWord {
        CyclicWord(self.0.pow(k))
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn least_rotation(w: &Word) -> Word {
    let l = w.letters();
    let n = l.len();
    let best = (0..n)
        .min_by(|&i, &j| (0..n).map(|t| l[(i + t) % n]).cmp((0..n).map(|t| l[(j + t) % n])))
        .unwrap_or(0);
    Word((0..n).map(|t| l[(best + t) % n]).collect())
}

/// Number of positions `i` in one period of `g^∞` at which `u` is read.
pub fn occurrences(u: &Word, g: &CyclicWord) -> Result<usize> {
    if u.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let p = g.word().letters();
    let n = p.len();
    let u = u.letters();
    Ok((0..n).filter(|&i| u.iter().enumerate().all(|(j, &l)| p[(i + j) % n] == l)).count())
}

/// An automorphism given by generator images and certified inverse images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    alphabet: Alphabet,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

impl Automorphism {
    /// Both compositions must reduce to the identity on every generator.
    pub fn new(alphabet: Alphabet, images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self> {
        for list in [&images, &inverse_images] {
            if list.len() != alphabet.rank() {
                return Err(Error::ImageCount { expected: alphabet.rank(), got: list.len() });
            }
        }
        let phi = Automorphism { alphabet, images, inverse_images };
        for x in alphabet.generators() {
            let x = Word::letter(x);
            if phi.apply(&phi.apply_inverse(&x)) != x {
                return Err(Error::NotInverse(x));
            }
            if phi.apply_inverse(&phi.apply(&x)) != x {
                return Err(Error::NotInverse(x));
            }
        }
        Ok(phi)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let ids: Vec<Word> = alphabet.generators().map(Word::letter).collect();
        Automorphism { alphabet, images: ids.clone(), inverse_images: ids }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn apply(&self, w: &Word) -> Word {
        substitute(&self.images, w)
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        substitute(&self.inverse_images, w)
    }

    pub fn inverse(&self) -> Self {
        Automorphism {
            alphabet: self.alphabet,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Self {
        Automorphism {
            alphabet: self.alphabet,
            images: other.images.iter().map(|w| self.apply(w)).collect(),
            inverse_images: self.inverse_images.iter().map(|w| other.apply_inverse(w)).collect(),
        }
    }
}

fn substitute(images: &[Word], w: &Word) -> Word {
    let mut out = Word::empty();
    for &l in w.letters() {
        let img = &images[l.generator_index()];
        out = if l.is_inverse() { out.mul(&img.inverse()) } else { out.mul(img) };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        f2().parse(s).unwrap()
    }

    fn c(s: &str) -> CyclicWord {
        CyclicWord::new(&w(s)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(w("aA").is_empty());
        assert_eq!(w("abBa"), w("aa"));
        assert_eq!(w("aba").to_letters_string(), "aba");
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("ab").inverse(), w("BA"));
        assert_eq!(Word::empty().inverse(), Word::empty());
        assert_eq!(w("a").inverse(), w("A"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, conj) = w("baB").cyclic_reduce();
        assert_eq!(core.unwrap().word(), &w("a"));
        assert_eq!(conj, w("b"));
        let (core, conj) = w("ab").cyclic_reduce();
        assert_eq!(core.unwrap().word(), &w("ab"));
        assert!(conj.is_empty());
        let (core, _) = w("abBA").cyclic_reduce();
        assert!(core.is_none());
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(c("abab").primitive_root(), (c("ab"), 2));
        assert_eq!(c("ab").primitive_root(), (c("ab"), 1));
        assert_eq!(c("aaa").primitive_root(), (c("a"), 3));
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(occurrences(&w("a"), &c("ab")).unwrap(), 1);
        assert_eq!(occurrences(&w("aa"), &c("a")).unwrap(), 1);
        assert_eq!(occurrences(&w("b"), &c("a")).unwrap(), 0);
        assert!(occurrences(&Word::empty(), &c("a")).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let phi = Automorphism::new(f2(), vec![w("ab"), w("b")], vec![w("aB"), w("b")]).unwrap();
        assert_eq!(phi.apply(&w("a")), w("ab"));
        assert_eq!(phi.apply(&Word::empty()), Word::empty());
        assert_eq!(phi.apply(&w("aB")), w("a"));
        assert!(Automorphism::new(f2(), vec![w("ab"), w("b")], vec![w("a"), w("b")]).is_err());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(f2().parse("a#"), Err(Error::UnknownSymbol('#')));
        assert!(matches!(f2().parse("c"), Err(Error::LetterOutOfRange { .. })));
    }

    #[test]
    fn letter_order_and_counts() {
        let letters: String = f2().letters().map(|l| l.symbol()).collect();
        assert_eq!(letters, "aAbB");
        assert_eq!(f2().reduced_words(2).len(), 12);
        assert_eq!(f2().reduced_words(3).len(), 36);
    }

    #[test]
    fn cyclic_word_is_rotation_invariant() {
        assert_eq!(c("ba"), c("ab"));
        assert_eq!(c("bAB"), c("A"));
    }
}

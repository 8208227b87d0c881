//! Symbols, alphabets, words and canonical word sets.

use std::fmt;

use crate::error::{invalid, Result};

pub type Symbol = u8;

/// An unstructured symbol set `{0, .., q-1}` with one symbol reserved as the
/// star (error flag) by convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    q: Symbol,
    star: Symbol,
}

impl Alphabet {
    /// Alphabet of size `q` with the star at `q - 1`.
    pub fn new(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(invalid(format!(
                "alphabet size must be at least 2, got {q}"
            )));
        }
        if q > Symbol::MAX as usize {
            return Err(invalid(format!(
                "alphabet size {q} exceeds {}",
                Symbol::MAX
            )));
        }
        Ok(Self {
            q: q as Symbol,
            star: (q - 1) as Symbol,
        })
    }

    pub fn with_star(q: usize, star: usize) -> Result<Self> {
        let mut a = Self::new(q)?;
        if star >= q {
            return Err(invalid(format!(
                "star {star} is not a symbol of an alphabet of size {q}"
            )));
        }
        a.star = star as Symbol;
        Ok(a)
    }

    pub fn size(&self) -> usize {
        self.q as usize
    }

    pub fn star(&self) -> Symbol {
        self.star
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + Clone {
        0..self.q
    }

    /// Symbols other than the star, ascending.
    pub fn non_star(&self) -> impl Iterator<Item = Symbol> + Clone {
        let star = self.star;
        (0..self.q).filter(move |&s| s != star)
    }

    /// `q^len`, or `None` on overflow.
    pub fn word_count(&self, len: usize) -> Option<usize> {
        (self.q as usize).checked_pow(len as u32)
    }

    /// All words of length `len` in lexicographic order.
    pub fn words(&self, len: usize) -> impl Iterator<Item = Word> {
        let q = self.q as usize;
        let count = self.word_count(len).unwrap_or(usize::MAX);
        (0..count).map(move |r| Word::from_rank(r, q, len))
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.symbols().iter().all(|&s| s < self.q)
    }
}

/// A fixed-length sequence of symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    /// Big-endian base-`q` rank; rank order equals lexicographic order.
    pub fn rank(&self, q: usize) -> usize {
        rank_of(&self.0, q)
    }

    pub fn from_rank(mut rank: usize, q: usize, len: usize) -> Self {
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = (rank % q) as Symbol;
            rank /= q;
        }
        Self(out)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The `j`-th block of `width` consecutive symbols (0-indexed).
    pub fn block(&self, j: usize, width: usize) -> Result<Word> {
        let end = (j + 1)
            .checked_mul(width)
            .ok_or_else(|| invalid("block index overflow"))?;
        if width == 0 || end > self.len() {
            return Err(invalid(format!(
                "block {j} of width {width} is out of range for a word of length {}",
                self.len()
            )));
        }
        Ok(Word(self.0[j * width..end].to_vec()))
    }

    /// Lane `lane` (1-based, `1..=width`) of every block: `(x_lane, x_{width+lane}, ..)`.
    pub fn projection(&self, lane: usize, width: usize) -> Result<Word> {
        if width == 0 || !self.len().is_multiple_of(width) {
            return Err(invalid(format!(
                "word length {} is not divisible by width {width}",
                self.len()
            )));
        }
        if lane == 0 || lane > width {
            return Err(invalid(format!("lane {lane} outside 1..={width}")));
        }
        Ok(Word(
            self.0
                .iter()
                .skip(lane - 1)
                .step_by(width)
                .copied()
                .collect(),
        ))
    }

    pub fn blocks(&self, width: usize) -> impl Iterator<Item = &[Symbol]> {
        self.0.chunks(width)
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn rank_of(symbols: &[Symbol], q: usize) -> usize {
    symbols.iter().fold(0usize, |acc, &s| acc * q + s as usize)
}

pub fn hamming_distance(a: &[Symbol], b: &[Symbol]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// True iff some `width`-block of `x` and `y` is at Hamming distance at least
/// `min_dist`.
pub fn blockwise_separated(x: &Word, y: &Word, width: usize, min_dist: usize) -> bool {
    x.blocks(width)
        .zip(y.blocks(width))
        .any(|(a, b)| hamming_distance(a, b) >= min_dist)
}

/// A canonical (sorted, duplicate-free) set of words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WordSet(Vec<Word>);

impl WordSet {
    pub fn from_unsorted(mut words: Vec<Word>) -> Self {
        words.sort_unstable();
        words.dedup();
        Self(words)
    }

    pub fn singleton(w: Word) -> Self {
        Self(vec![w])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.0.binary_search(w).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Word> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Word] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Word> {
        self.0
    }

    /// Smallest word present in both sets.
    pub fn first_common(&self, other: &WordSet) -> Option<&Word> {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(&self.0[i]),
            }
        }
        None
    }

    pub fn intersects(&self, other: &WordSet) -> bool {
        self.first_common(other).is_some()
    }

    pub fn is_subset(&self, other: &WordSet) -> bool {
        self.0.iter().all(|w| other.contains(w))
    }
}

impl<'a> IntoIterator for &'a WordSet {
    type Item = &'a Word;
    type IntoIter = std::slice::Iter<'a, Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<Word> for WordSet {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        Self::from_unsorted(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u8]) -> Word {
        Word::from(v)
    }

    #[test]
    fn block_examples() {
        let x = w(&[0, 1, 2, 2, 1, 0]);
        assert_eq!(x.block(1, 3).unwrap(), w(&[2, 1, 0]));
        assert_eq!(x.block(0, 3).unwrap(), w(&[0, 1, 2]));
        assert_eq!(x.block(0, 6).unwrap(), x);
        assert!(x.block(2, 3).is_err());
    }

    #[test]
    fn projection_examples() {
        let x = w(&[10, 11, 12, 13, 14, 15]);
        assert_eq!(x.projection(1, 3).unwrap(), w(&[10, 13]));
        assert_eq!(w(&[0, 1, 2, 2, 1, 0]).projection(3, 3).unwrap(), w(&[2, 0]));
        assert_eq!(w(&[4, 5, 6]).projection(2, 3).unwrap(), w(&[5]));
        assert!(w(&[0, 1, 2, 3]).projection(1, 3).is_err());
        assert!(x.projection(4, 3).is_err());
    }

    #[test]
    fn rank_roundtrip_is_lexicographic() {
        let a = Alphabet::new(3).unwrap();
        let words: Vec<_> = a.words(3).collect();
        assert_eq!(words.len(), 27);
        assert!(words.windows(2).all(|p| p[0] < p[1]));
        for (r, x) in words.iter().enumerate() {
            assert_eq!(x.rank(3), r);
        }
    }

    #[test]
    fn alphabet_rejects_bad_sizes() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::with_star(3, 3).is_err());
        assert_eq!(Alphabet::new(4).unwrap().star(), 3);
    }

    #[test]
    fn wordset_intersection() {
        let a = WordSet::from_unsorted(vec![w(&[2]), w(&[0]), w(&[2])]);
        let b = WordSet::from_unsorted(vec![w(&[1]), w(&[2])]);
        assert_eq!(a.len(), 2);
        assert_eq!(a.first_common(&b), Some(&w(&[2])));
        assert!(!a.intersects(&WordSet::singleton(w(&[1]))));
    }
}

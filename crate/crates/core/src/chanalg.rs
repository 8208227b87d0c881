//! Finite set-valued (adversarial) channels and their algebra.
//!
//! A [`ChannelMap`] is intensional: it carries an evaluator rule rather than a
//! full table. [`ChannelMap::memoized`] adds a shared memo and
//! [`ChannelMap::tabulate`] builds the full table for small domains.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use itertools::Itertools;

use crate::error::{invalid, shape, Result};
use crate::word::{blockwise_separated, Alphabet, Word, WordSet};

/// Largest input domain `q^{n_in}` that [`ChannelMap::tabulate`] will build.
pub const MAX_TABULATED: usize = 1 << 20;

type Evaluator = dyn Fn(&Word) -> WordSet + Send + Sync;

#[derive(Clone)]
pub struct ChannelMap {
    n_in: usize,
    n_out: usize,
    alphabet: Alphabet,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for ChannelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChannelMap")
            .field("n_in", &self.n_in)
            .field("n_out", &self.n_out)
            .field("alphabet", &self.alphabet)
            .finish_non_exhaustive()
    }
}

impl ChannelMap {
    /// Wraps an evaluator. The rule must be deterministic and return a
    /// non-empty set of `n_out`-words for every `n_in`-word.
    pub fn from_fn<F>(alphabet: Alphabet, n_in: usize, n_out: usize, f: F) -> Self
    where
        F: Fn(&Word) -> WordSet + Send + Sync + 'static,
    {
        Self {
            n_in,
            n_out,
            alphabet,
            eval: Arc::new(f),
        }
    }

    /// A channel whose every output set is the singleton `{f(x)}`.
    pub fn deterministic<F>(alphabet: Alphabet, n_in: usize, n_out: usize, f: F) -> Self
    where
        F: Fn(&Word) -> Word + Send + Sync + 'static,
    {
        Self::from_fn(alphabet, n_in, n_out, move |x| WordSet::singleton(f(x)))
    }

    pub fn identity(alphabet: Alphabet, n: usize) -> Self {
        Self::deterministic(alphabet, n, n, Word::clone)
    }

    pub fn input_len(&self) -> usize {
        self.n_in
    }

    pub fn output_len(&self) -> usize {
        self.n_out
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn apply(&self, x: &Word) -> Result<WordSet> {
        if x.len() != self.n_in {
            return Err(shape(format!(
                "channel expects words of length {}, got {}",
                self.n_in,
                x.len()
            )));
        }
        if !self.alphabet.contains(x) {
            return Err(invalid(format!("{x} has symbols outside the alphabet")));
        }
        Ok((self.eval)(x))
    }

    /// Same channel with a shared memo keyed by input word. Concurrent callers
    /// always observe complete entries.
    pub fn memoized(&self) -> Self {
        let inner = Arc::clone(&self.eval);
        let memo: Arc<RwLock<HashMap<Word, WordSet>>> = Arc::default();
        Self::from_fn(self.alphabet, self.n_in, self.n_out, move |x| {
            if let Some(hit) = memo.read().expect("memo poisoned").get(x) {
                return hit.clone();
            }
            let out = inner(x);
            memo.write()
                .expect("memo poisoned")
                .entry(x.clone())
                .or_insert_with(|| out.clone());
            out
        })
    }

    /// Output sets for every input in rank order.
    pub fn tabulate(&self) -> Result<Vec<WordSet>> {
        let size = self
            .alphabet
            .word_count(self.n_in)
            .filter(|&s| s <= MAX_TABULATED)
            .ok_or_else(|| {
                crate::Error::TooLarge(format!(
                    "domain {}^{} exceeds the tabulation limit",
                    self.alphabet.size(),
                    self.n_in
                ))
            })?;
        let q = self.alphabet.size();
        Ok((0..size)
            .map(|r| (self.eval)(&Word::from_rank(r, q, self.n_in)))
            .collect())
    }

    /// True iff both channels have equal shapes and agree on every input.
    pub fn pointwise_eq(&self, other: &ChannelMap) -> Result<bool> {
        if (self.n_in, self.n_out, self.alphabet) != (other.n_in, other.n_out, other.alphabet) {
            return Ok(false);
        }
        Ok(self.tabulate()? == other.tabulate()?)
    }
}

/// `Ω(x)` = Hamming ball of `radius` around `x` in `A^n`.
pub fn hamming_ball_channel(alphabet: Alphabet, n: usize, radius: usize) -> Result<ChannelMap> {
    if radius > n {
        return Err(invalid(format!("radius {radius} exceeds block length {n}")));
    }
    Ok(ChannelMap::from_fn(alphabet, n, n, move |x| {
        hamming_ball(alphabet, x, radius)
    }))
}

pub fn hamming_ball(alphabet: Alphabet, x: &Word, radius: usize) -> WordSet {
    let n = x.len();
    let mut out = Vec::new();
    for k in 0..=radius.min(n) {
        for positions in (0..n).combinations(k) {
            let choices = positions.iter().map(|&p| {
                let orig = x.symbols()[p];
                alphabet.symbols().filter(move |&s| s != orig)
            });
            if k == 0 {
                out.push(x.clone());
                continue;
            }
            for values in choices.multi_cartesian_product() {
                let mut y = x.symbols().to_vec();
                for (&p, v) in positions.iter().zip(values) {
                    y[p] = v;
                }
                out.push(Word::new(y));
            }
        }
    }
    WordSet::from_unsorted(out)
}

/// `(Ω1 × Ω2)(x1, x2) = Ω1(x1) × Ω2(x2)` on concatenated words.
pub fn product(c1: &ChannelMap, c2: &ChannelMap) -> Result<ChannelMap> {
    if c1.alphabet != c2.alphabet {
        return Err(shape("product of channels over different alphabets"));
    }
    let (a, b) = (c1.clone(), c2.clone());
    let split = c1.n_in;
    Ok(ChannelMap::from_fn(
        c1.alphabet,
        c1.n_in + c2.n_in,
        c1.n_out + c2.n_out,
        move |x| {
            let (x1, x2) = x.symbols().split_at(split);
            let left = (a.eval)(&Word::from(x1));
            let right = (b.eval)(&Word::from(x2));
            WordSet::from_unsorted(
                left.iter()
                    .cartesian_product(right.iter())
                    .map(|(l, r)| l.concat(r))
                    .collect(),
            )
        },
    ))
}

/// The `i`-fold product of `c` with itself.
pub fn power(c: &ChannelMap, i: usize) -> Result<ChannelMap> {
    if i < 1 {
        return Err(invalid("channel power needs i >= 1"));
    }
    let mut acc = c.clone();
    for _ in 1..i {
        acc = product(&acc, c)?;
    }
    Ok(acc)
}

/// `(Ω1 ▶ Ω2)(x) = ⋃_{y ∈ Ω1(x)} Ω2(y)`.
pub fn concatenate(c1: &ChannelMap, c2: &ChannelMap) -> Result<ChannelMap> {
    if c1.alphabet != c2.alphabet || c1.n_out != c2.n_in {
        return Err(shape(format!(
            "cannot feed {}-words into a channel expecting {}-words",
            c1.n_out, c2.n_in
        )));
    }
    let (a, b) = (c1.clone(), c2.clone());
    Ok(ChannelMap::from_fn(
        c1.alphabet,
        c1.n_in,
        c2.n_out,
        move |x| {
            let mid = (a.eval)(x);
            WordSet::from_unsorted(mid.iter().flat_map(|y| (b.eval)(y).into_vec()).collect())
        },
    ))
}

/// Symbols of `x` restricted to one width-sized block, as a fresh word.
pub fn block(x: &Word, j: usize, width: usize) -> Result<Word> {
    x.block(j, width)
}

pub fn projection(x: &Word, lane: usize, width: usize) -> Result<Word> {
    x.projection(lane, width)
}

/// Blockwise distance criterion: `x` and `y` are separable by `H^i` with
/// radius-1 balls of width `width` iff some block pair is at distance ≥ 3.
pub fn blockwise_distinguishable(x: &Word, y: &Word, width: usize) -> bool {
    blockwise_separated(x, y, width, 3)
}

/// Ball-intersection form of the same test: the `H^i` output sets of `x` and
/// `y` are disjoint.
pub fn ball_outputs_disjoint(h_power: &ChannelMap, x: &Word, y: &Word) -> Result<bool> {
    Ok(!h_power.apply(x)?.intersects(&h_power.apply(y)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(q: usize) -> Alphabet {
        Alphabet::new(q).unwrap()
    }

    #[test]
    fn ball_sizes() {
        let h = hamming_ball_channel(a(3), 3, 1).unwrap();
        for x in a(3).words(3) {
            assert_eq!(h.apply(&x).unwrap().len(), 7);
        }
        let h = hamming_ball_channel(a(2), 4, 1).unwrap();
        for x in a(2).words(4) {
            assert_eq!(h.apply(&x).unwrap().len(), 5);
        }
        let h0 = hamming_ball_channel(a(3), 3, 0).unwrap();
        let x = Word::from(vec![0, 2, 1]);
        assert_eq!(h0.apply(&x).unwrap(), WordSet::singleton(x));
        assert!(hamming_ball_channel(a(3), 3, 4).is_err());
    }

    #[test]
    fn power_two_sizes_and_blocks() {
        let h = hamming_ball_channel(a(3), 3, 1).unwrap();
        let h2 = power(&h, 2).unwrap();
        assert_eq!((h2.input_len(), h2.output_len()), (6, 6));
        let x = Word::from(vec![0, 1, 2, 2, 1, 0]);
        let out = h2.apply(&x).unwrap();
        assert_eq!(out.len(), 49);
        let expected: WordSet = a(3)
            .words(6)
            .filter(|y| {
                (0..2).all(|j| {
                    let d = crate::word::hamming_distance(
                        x.block(j, 3).unwrap().symbols(),
                        y.block(j, 3).unwrap().symbols(),
                    );
                    d <= 1
                })
            })
            .collect();
        assert_eq!(out, expected);
        assert!(power(&h, 0).is_err());
        assert!(power(&h, 1).unwrap().pointwise_eq(&h).unwrap());
    }

    #[test]
    fn product_with_identity_keeps_sizes() {
        let h = hamming_ball_channel(a(3), 2, 1).unwrap();
        let id = ChannelMap::identity(a(3), 1);
        let p = product(&h, &id).unwrap();
        for x in a(3).words(3) {
            let head = Word::from(&x.symbols()[..2]);
            assert_eq!(p.apply(&x).unwrap().len(), h.apply(&head).unwrap().len());
        }
        let other = hamming_ball_channel(a(2), 1, 1).unwrap();
        assert!(product(&h, &other).is_err());
    }

    #[test]
    fn concatenate_examples() {
        let h = hamming_ball_channel(a(3), 3, 1).unwrap();
        let id = ChannelMap::identity(a(3), 3);
        assert!(concatenate(&id, &h).unwrap().pointwise_eq(&h).unwrap());
        let f = ChannelMap::deterministic(a(3), 3, 3, |x| {
            Word::new(x.symbols().iter().map(|s| (s + 1) % 3).collect())
        });
        let fh = concatenate(&f, &h).unwrap();
        for x in a(3).words(3) {
            let fx = Word::new(x.symbols().iter().map(|s| (s + 1) % 3).collect());
            assert_eq!(fh.apply(&x).unwrap(), h.apply(&fx).unwrap());
        }
        let short = ChannelMap::identity(a(3), 2);
        assert!(concatenate(&short, &h).is_err());
    }

    #[test]
    fn apply_checks_shape() {
        let h = hamming_ball_channel(a(2), 3, 1).unwrap();
        assert!(h.apply(&Word::from(vec![0, 1])).is_err());
        assert!(h.apply(&Word::from(vec![0, 1, 2])).is_err());
    }

    #[test]
    fn memo_returns_same_sets() {
        let h = hamming_ball_channel(a(3), 3, 1).unwrap();
        let m = h.memoized();
        for x in a(3).words(3) {
            assert_eq!(m.apply(&x).unwrap(), h.apply(&x).unwrap());
            assert_eq!(m.apply(&x).unwrap(), h.apply(&x).unwrap());
        }
    }

    #[test]
    fn blockwise_criterion_example() {
        let x = Word::from(vec![0, 0, 0, 1, 1, 1]);
        let y = Word::from(vec![0, 0, 1, 0, 0, 0]);
        assert!(blockwise_distinguishable(&x, &y, 3));
        let z = Word::from(vec![0, 1, 1, 1, 1, 0]);
        assert!(!blockwise_distinguishable(&x, &z, 3));
    }
}

use std::fmt;

use smallvec::SmallVec;

use crate::{Error, Result};

/// A binary assignment over `n` variables (or vertices), stored as a bitset.
///
/// The textual form is a bitstring whose first character is variable 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

impl State {
    pub fn zeros(len: usize) -> Self {
        State {
            len,
            words: SmallVec::from_elem(0, len.div_ceil(64)),
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = State::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set(i, true);
            }
        }
        s
    }

    /// The state whose set points are `points`.
    pub fn from_points(len: usize, points: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = State::zeros(len);
        for p in points {
            if p >= len {
                return Err(Error::Invalid(format!("point {p} outside 0..{len}")));
            }
            s.set(p, true);
        }
        Ok(s)
    }

    /// Parses a bitstring of `0`/`1` characters.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let mut bits = Vec::with_capacity(text.len());
        for (col, ch) in text.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::parse(
                        1,
                        col + 1,
                        format!("unexpected character {other:?} in bitstring"),
                    ))
                }
            }
        }
        Ok(State::from_bits(&bits))
    }

    /// The `index`-th state of `{0,1}^len` in lexicographic bitstring order
    /// (variable 0 is the most significant bit). Requires `len <= 64`.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= 64, "index encoding needs len <= 64");
        let mut s = State::zeros(len);
        for v in 0..len {
            if (index >> (len - 1 - v)) & 1 == 1 {
                s.set(v, true);
            }
        }
        s
    }

    /// Inverse of [`from_index`](Self::from_index).
    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 64, "index encoding needs len <= 64");
        self.ones().fold(0u64, |acc, v| acc | 1u64 << (self.len - 1 - v))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn with(&self, i: usize, value: bool) -> State {
        let mut s = self.clone();
        s.set(i, value);
        s
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Set points in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + bit)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Hamming distance; lengths must agree.
    pub fn hamming(&self, other: &State) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State({self})")
    }
}

//! Word-packed bit vectors.
//!
//! Everything downstream (gap sets, ideal windows, census nodes) stores
//! membership as bits over a half-open integer range. This module only knows
//! about indices; callers translate between semigroup elements and offsets.

/// Fixed-length bit vector. Bits outside `len` are kept zero so that
/// word-level equality and hashing agree with logical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            len,
            words: vec![0u64; len.div_ceil(64)],
        }
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
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn last_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(k * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    /// Iterate set positions in increasing order.
    pub fn ones(&self) -> Ones<'_> {
        Ones {
            bits: self,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// OR `src` shifted left by `shift` into `self`, dropping bits that land
    /// at or beyond `self.len`. Word-parallel, so the cost is words not bits.
    pub fn or_shifted(&mut self, src: &Bits, shift: usize) {
        if shift >= self.len {
            return;
        }
        let word = shift / 64;
        let bit = shift % 64;
        let n = self.words.len();
        for (i, &s) in src.words.iter().enumerate() {
            if s == 0 {
                continue;
            }
            let lo = i + word;
            if lo >= n {
                break;
            }
            self.words[lo] |= s << bit;
            if bit != 0 && lo + 1 < n {
                self.words[lo + 1] |= s >> (64 - bit);
            }
        }
        let spare = n * 64 - self.len;
        if spare > 0 {
            self.words[n - 1] &= u64::MAX >> spare;
        }
    }

    /// Keep only bits with index < `new_len`.
    pub fn truncate(&mut self, new_len: usize) {
        assert!(new_len <= self.len);
        self.len = new_len;
        self.words.truncate(new_len.div_ceil(64));
        let spare = self.words.len() * 64 - new_len;
        if spare > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> spare;
            }
        }
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Bits[{}]{{", self.len)?;
        let mut first = true;
        for i in self.ones() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

pub struct Ones<'a> {
    bits: &'a Bits,
    word_idx: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.bits.words.len() {
                return None;
            }
            self.current = self.bits.words[self.word_idx];
        }
    }
}

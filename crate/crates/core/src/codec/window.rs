//! Flexible-length window scheme: each `(q−1)`-bit block becomes a nonempty
//! subset of one period `1 2 .. q` of `A_q`, of size at most `⌈q/2⌉`.
//!
//! Subsets are ordered by size, then lexicographically within a size, and a
//! block value is its index in that order. There are at least `2^(q−1)` such
//! subsets for every `q >= 2`, so the map is injective at rate `(q−1)/q`.

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Oligo, Symbol};

use super::bits::BitString;

/// Largest supported alphabet (block values fit in 63 bits).
pub const WINDOW_MAX_Q: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowCodec {
    alphabet: Alphabet,
    max_weight: usize,
    /// `binom[n][k]` for `n, k <= q`.
    binom: Vec<Vec<u128>>,
}

impl WindowCodec {
    pub fn new(q: u32) -> Result<Self> {
        if !(2..=WINDOW_MAX_Q).contains(&q) {
            return Err(Error::domain(format!("window scheme supports 2 <= q <= {WINDOW_MAX_Q}, got {q}")));
        }
        let n = q as usize;
        let mut binom = vec![vec![0u128; n + 1]; n + 1];
        for i in 0..=n {
            binom[i][0] = 1;
            for k in 1..=i {
                binom[i][k] = binom[i - 1][k - 1] + binom[i - 1][k];
            }
        }
        let max_weight = n.div_ceil(2);
        let codewords: u128 = (1..=max_weight).map(|k| binom[n][k]).sum();
        if codewords < 1u128 << (n - 1) {
            return Err(Error::config(format!("only {codewords} windows for {} payload bits", n - 1)));
        }
        Ok(WindowCodec { alphabet: Alphabet::new(q)?, max_weight, binom })
    }

    pub fn q(&self) -> u32 {
        self.alphabet.size()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn block_bits(&self) -> usize {
        self.q() as usize - 1
    }

    /// Largest number of symbols synthesized per window, `⌈q/2⌉`.
    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn rate(&self) -> f64 {
        self.block_bits() as f64 / self.q() as f64
    }

    fn n(&self) -> usize {
        self.q() as usize
    }

    pub fn encode_block(&self, block: &BitString) -> Result<Oligo> {
        if block.len() != self.block_bits() {
            return Err(Error::domain(format!("expected {} bits, got {}", self.block_bits(), block.len())));
        }
        let mut v = block.to_u128();
        let n = self.n();
        let mut size = 1;
        while v >= self.binom[n][size] {
            v -= self.binom[n][size];
            size += 1;
        }
        debug_assert!(size <= self.max_weight);
        let mut out = Vec::with_capacity(size);
        let mut next = 1usize;
        for j in 0..size {
            let remaining = size - j - 1;
            loop {
                // subsets whose j-th element is `next`
                let with_next = self.binom[n - next][remaining];
                if v < with_next {
                    break;
                }
                v -= with_next;
                next += 1;
            }
            out.push(next as Symbol);
            next += 1;
        }
        Oligo::new(self.alphabet, out)
    }

    pub fn decode_block(&self, symbols: &[Symbol]) -> Result<BitString> {
        let n = self.n();
        let size = symbols.len();
        if size == 0 || size > self.max_weight {
            return Err(Error::CorruptBlock(format!("window holds {size} symbols, expected 1..={}", self.max_weight)));
        }
        if symbols.windows(2).any(|w| w[0] >= w[1]) || symbols.iter().any(|&s| !self.alphabet.contains(s)) {
            return Err(Error::CorruptBlock("window symbols must increase strictly within 1..=q".into()));
        }
        let mut v: u128 = (1..size).map(|k| self.binom[n][k]).sum();
        let mut next = 1usize;
        for (j, &s) in symbols.iter().enumerate() {
            let remaining = size - j - 1;
            while next < s as usize {
                v += self.binom[n - next][remaining];
                next += 1;
            }
            next += 1;
        }
        if v >> self.block_bits() != 0 {
            return Err(Error::CorruptBlock("window index exceeds the payload range".into()));
        }
        Ok(BitString::from_u128(v, self.block_bits()))
    }
}

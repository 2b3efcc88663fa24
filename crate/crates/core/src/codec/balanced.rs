//! Balanced encoder for density near 1/2.
//!
//! With `f_q = max { n : n + ⌈log2 n⌉ + 1 <= q }` and
//! `q* = f_q + ⌈log2 f_q⌉ + 1`, an `f_q`-bit word is mapped by a Knuth-style
//! balancing step to a `q*`-bit word of weight exactly `⌊q*/2⌋`. The word is
//! laid out as the payload with its first `k` bits inverted, then the Gray
//! code of `k` in `⌈log2 f_q⌉` bits, then one balancing bit; `k` is the
//! smallest index that reaches the target weight. The set bits select
//! symbols from `1 2 .. q*`, giving a strictly increasing block that fits in
//! one period of `A_{q*}`.
//!
//! Not every `f_q` admits a valid `k` for all payloads under this layout;
//! [`balance_failures`] counts the exceptions exactly, and only alphabet
//! sizes with none are accepted by [`BalancedCodec`].

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Oligo, Symbol};

use super::bits::BitString;

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `(f_q, q*)` for `q >= 4`.
pub fn f_and_qstar(q: u32) -> Result<(usize, usize)> {
    if q < 4 {
        return Err(Error::domain(format!("the balanced encoder needs q >= 4, got {q}")));
    }
    let q = q as usize;
    let f = (1..=q).take_while(|&n| n + ceil_log2(n) < q).last().expect("n = 1 always fits");
    Ok((f, f + ceil_log2(f) + 1))
}

/// `π(s, u)`: the entries of `s` at the set positions of `u`.
pub fn project<T: Clone>(s: &[T], u: &BitString) -> Result<Vec<T>> {
    if s.len() != u.len() {
        return Err(Error::domain(format!("projection length mismatch: {} vs {}", s.len(), u.len())));
    }
    Ok(s.iter().zip(u.iter()).filter(|(_, b)| *b).map(|(x, _)| x.clone()).collect())
}

#[inline]
fn gray(k: usize) -> usize {
    k ^ (k >> 1)
}

fn gray_inverse(g: usize) -> usize {
    let mut k = g;
    let mut shift = g >> 1;
    while shift != 0 {
        k ^= shift;
        shift >>= 1;
    }
    k
}

/// Knuth-style balancing of `f`-bit words with a Gray-coded flip index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnuthBalancer {
    f: usize,
    index_bits: usize,
    max_flip: usize,
    target: usize,
}

impl KnuthBalancer {
    pub fn new(f: usize) -> Result<Self> {
        if f == 0 || f > 120 {
            return Err(Error::domain(format!("payload width {f} is outside 1..=120")));
        }
        let index_bits = ceil_log2(f);
        let max_flip = f.min((1usize << index_bits) - 1);
        let q_star = f + index_bits + 1;
        Ok(KnuthBalancer { f, index_bits, max_flip, target: q_star / 2 })
    }

    pub fn payload_bits(&self) -> usize {
        self.f
    }

    pub fn output_bits(&self) -> usize {
        self.f + self.index_bits + 1
    }

    /// Output weight `⌊q*/2⌋`.
    pub fn target_weight(&self) -> usize {
        self.target
    }

    /// Weight of payload + index before the balancing bit, for flip index `k`.
    fn partial_weight(&self, flipped_weight: usize, k: usize) -> usize {
        flipped_weight + gray(k).count_ones() as usize
    }

    pub fn balance(&self, u: &BitString) -> Result<BitString> {
        if u.len() != self.f {
            return Err(Error::domain(format!("expected {} payload bits, got {}", self.f, u.len())));
        }
        let mut flipped_weight = u.weight();
        for k in 0..=self.max_flip {
            if k > 0 {
                // bit k-1 is now inverted
                if u.get(k - 1).expect("k <= f") {
                    flipped_weight -= 1;
                } else {
                    flipped_weight += 1;
                }
            }
            let w = self.partial_weight(flipped_weight, k);
            if w == self.target || w + 1 == self.target {
                let mut out: BitString = u.iter().enumerate().map(|(i, b)| b ^ (i < k)).collect();
                let g = gray(k);
                for i in (0..self.index_bits).rev() {
                    out.push(g >> i & 1 == 1);
                }
                out.push(w + 1 == self.target);
                return Ok(out);
            }
        }
        Err(Error::Construction(format!("no flip index balances {u} to weight {}", self.target)))
    }

    pub fn unbalance(&self, w: &BitString) -> Result<BitString> {
        if w.len() != self.output_bits() {
            return Err(Error::CorruptBlock(format!(
                "expected {} balanced bits, got {}",
                self.output_bits(),
                w.len()
            )));
        }
        if w.weight() != self.target {
            return Err(Error::CorruptBlock(format!("weight {} is not {}", w.weight(), self.target)));
        }
        let g = w.bits()[self.f..self.f + self.index_bits].iter().fold(0usize, |acc, &b| acc << 1 | usize::from(b));
        let k = gray_inverse(g);
        if k > self.max_flip {
            return Err(Error::CorruptBlock(format!("flip index {k} out of range")));
        }
        let u: BitString = w.bits()[..self.f].iter().enumerate().map(|(i, &b)| b ^ (i < k)).collect();
        // only the canonical (smallest-k) word is a codeword
        if self.balance(&u).as_ref() != Ok(w) {
            return Err(Error::CorruptBlock("non-canonical balanced word".into()));
        }
        Ok(u)
    }
}

/// Exact number of `f`-bit payloads for which no flip index reaches the target weight.
///
/// Dynamic program over prefixes: for a fixed total weight `W`, the weight
/// after flipping the first `k` bits is `W + k − 2·(ones among them)`, so a
/// payload is characterised by its prefix one-counts.
pub fn balance_failures(f: usize) -> Result<u128> {
    let b = KnuthBalancer::new(f)?;
    let ok = |w_total: usize, k: usize, ones: usize| {
        let w = w_total + k - 2 * ones + gray(k).count_ones() as usize;
        w == b.target || w + 1 == b.target
    };
    let mut failures = 0u128;
    for w_total in 0..=f {
        // alive[j]: prefixes with j ones that have not yet hit the target
        let mut alive = vec![0u128; f + 1];
        if !ok(w_total, 0, 0) {
            alive[0] = 1;
        }
        for k in 1..=f {
            let mut next = vec![0u128; f + 1];
            for (j, &c) in alive.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for bit in 0..=1usize {
                    let nj = j + bit;
                    if nj > w_total || w_total - nj > f - k {
                        continue;
                    }
                    next[nj] += c;
                }
            }
            if k <= b.max_flip {
                for (j, c) in next.iter_mut().enumerate() {
                    if *c > 0 && j <= k && ok(w_total, k, j) {
                        *c = 0;
                    }
                }
            }
            alive = next;
        }
        failures += alive[w_total];
    }
    Ok(failures)
}

/// `K(u)` for alphabet size `q`.
pub fn knuth_balance(q: u32, u: &BitString) -> Result<BitString> {
    let (f, _) = f_and_qstar(q)?;
    KnuthBalancer::new(f)?.balance(u)
}

pub fn knuth_unbalance(q: u32, w: &BitString) -> Result<BitString> {
    let (f, _) = f_and_qstar(q)?;
    KnuthBalancer::new(f)?.unbalance(w)
}

/// `E_1(u) = π(1 2 .. q*, K(u))`.
pub fn e1_encode(q: u32, u: &BitString) -> Result<Oligo> {
    let (f, q_star) = f_and_qstar(q)?;
    e1_with(&KnuthBalancer::new(f)?, q_star, u)
}

pub fn e1_decode(q: u32, oligo: &Oligo) -> Result<BitString> {
    let (f, q_star) = f_and_qstar(q)?;
    e1_inverse(&KnuthBalancer::new(f)?, q_star, oligo.symbols())
}

fn e1_with(balancer: &KnuthBalancer, q_star: usize, u: &BitString) -> Result<Oligo> {
    let k = balancer.balance(u)?;
    let symbols: Vec<Symbol> = k.support().into_iter().map(|i| i as Symbol).collect();
    Oligo::new(Alphabet::new(q_star as u32)?, symbols)
}

fn e1_inverse(balancer: &KnuthBalancer, q_star: usize, block: &[Symbol]) -> Result<BitString> {
    if block.len() != balancer.target_weight() {
        return Err(Error::CorruptBlock(format!(
            "block has {} symbols, expected {}",
            block.len(),
            balancer.target_weight()
        )));
    }
    if block.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::CorruptBlock("block symbols are not strictly increasing".into()));
    }
    if block.iter().any(|&s| s < 1 || s as usize > q_star) {
        return Err(Error::CorruptBlock(format!("block symbol outside 1..={q_star}")));
    }
    let mut indicator = BitString::zeros(0);
    let mut next = block.iter().peekable();
    for pos in 1..=q_star {
        let hit = next.peek().is_some_and(|&&s| s as usize == pos);
        if hit {
            next.next();
        }
        indicator.push(hit);
    }
    balancer.unbalance(&indicator)
}

/// Concatenated balanced blocks: rate `f_q/q*` at density `⌊q*/2⌋/q*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalancedCodec {
    q: u32,
    f: usize,
    q_star: usize,
    balancer: KnuthBalancer,
}

impl BalancedCodec {
    /// Fails when some payload of width `f_q` cannot be balanced.
    pub fn new(q: u32) -> Result<Self> {
        let (f, q_star) = f_and_qstar(q)?;
        let failures = balance_failures(f)?;
        if failures > 0 {
            return Err(Error::config(format!(
                "q = {q} (f_q = {f}) is unsupported: {failures} payloads cannot be balanced"
            )));
        }
        Ok(BalancedCodec { q, f, q_star, balancer: KnuthBalancer::new(f)? })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn q_star(&self) -> usize {
        self.q_star
    }

    /// Symbols per block, `⌊q*/2⌋`.
    pub fn block_symbols(&self) -> usize {
        self.q_star / 2
    }

    pub fn rate(&self) -> f64 {
        self.f as f64 / self.q_star as f64
    }

    pub fn rho(&self) -> f64 {
        self.block_symbols() as f64 / self.q_star as f64
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.q_star as u32).expect("q* >= 4")
    }

    pub fn encode_block(&self, u: &BitString) -> Result<Oligo> {
        e1_with(&self.balancer, self.q_star, u)
    }

    pub fn decode_block(&self, block: &[Symbol]) -> Result<BitString> {
        e1_inverse(&self.balancer, self.q_star, block)
    }

    /// `E_2`: payload (already a multiple of `f_q` bits) to one oligo.
    pub fn encode_stream(&self, payload: &BitString) -> Result<Oligo> {
        if !payload.len().is_multiple_of(self.f) {
            return Err(Error::domain(format!("payload length is not a multiple of {}", self.f)));
        }
        let mut out = Vec::with_capacity(payload.len() / self.f * self.block_symbols());
        for block in payload.padded_blocks(self.f) {
            out.extend(self.encode_block(&block)?.into_symbols());
        }
        Oligo::new(self.alphabet(), out)
    }

    pub fn decode_stream(&self, symbols: &[Symbol]) -> Result<BitString> {
        let t = self.block_symbols();
        if !symbols.len().is_multiple_of(t) {
            return Err(Error::CorruptStream(format!(
                "stream of {} symbols is not a whole number of {t}-symbol blocks",
                symbols.len()
            )));
        }
        let mut out = BitString::new();
        for block in symbols.chunks(t) {
            out.extend_from(&self.decode_block(block)?);
        }
        Ok(out)
    }
}

//! Exact counting of distinct subsequences of `A_q[C]`, plus enumerative
//! coding (rank/unrank) over them.
//!
//! Counts go through the deletion-sphere recursion
//! `D_q(C,t) = Σ_{i=0}^{t} binom(C−t, i) · D_{q−1}(t, t−i)` with
//! `M_q(C,L) = D_q(C, C−L)`. Ranking uses a second, independent route: a
//! next-occurrence table over suffixes of the alternating sequence.

use std::collections::{HashMap, HashSet};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Oligo, Symbol};

/// Largest cycle count accepted by [`brute_force_count`].
pub const BRUTE_FORCE_MAX_CYCLES: u64 = 20;

/// Memo of deletion-sphere sizes keyed by `(q, C, t)`.
///
/// Append-only; concurrent readers and insert-if-absent writers observe the
/// same values a fresh recomputation would produce.
#[derive(Debug, Default)]
pub struct CountCache {
    memo: RwLock<HashMap<(u32, u64, u64), BigUint>>,
}

impl CountCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache used by the free functions of this module.
    pub fn global() -> &'static CountCache {
        static CACHE: OnceLock<CountCache> = OnceLock::new();
        CACHE.get_or_init(CountCache::new)
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("count cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `D_q(C, t)`: number of distinct strings left after exactly `t` deletions from `A_q[C]`.
    pub fn deletion_ball_size(&self, q: u32, cycles: u64, t: u64) -> Result<BigUint> {
        if q < 1 {
            return Err(Error::domain("alphabet size must be at least 1"));
        }
        if t > cycles {
            return Err(Error::domain(format!("cannot delete {t} symbols from {cycles}")));
        }
        Ok(self.ball(q, cycles, t))
    }

    pub fn subsequence_count(&self, q: u32, cycles: u64, length: u64) -> Result<BigUint> {
        if length > cycles {
            return Err(Error::domain(format!(
                "subsequence length {length} exceeds cycle count {cycles}"
            )));
        }
        self.deletion_ball_size(q, cycles, cycles - length)
    }

    fn ball(&self, q: u32, cycles: u64, t: u64) -> BigUint {
        if t == 0 || t == cycles || q == 1 {
            return BigUint::one();
        }
        let key = (q, cycles, t);
        if let Some(v) = self.memo.read().expect("count cache poisoned").get(&key) {
            return v.clone();
        }

        let kept = cycles - t;
        let mut sum = BigUint::zero();
        let mut binom = BigUint::one(); // binom(kept, i)
        for i in 0..=t.min(kept) {
            if i > 0 {
                binom = binom * (kept - i + 1) / i;
            }
            sum += &binom * self.ball(q - 1, t, t - i);
        }

        self.memo
            .write()
            .expect("count cache poisoned")
            .entry(key)
            .or_insert(sum)
            .clone()
    }
}

/// `D_q(C, t)` through the shared cache.
pub fn deletion_ball_size(q: u32, cycles: u64, t: u64) -> Result<BigUint> {
    CountCache::global().deletion_ball_size(q, cycles, t)
}

/// `M_q(C, L)`: number of distinct length-`L` subsequences of `A_q[C]`.
pub fn subsequence_count(q: u32, cycles: u64, length: u64) -> Result<BigUint> {
    CountCache::global().subsequence_count(q, cycles, length)
}

/// Counts distinct length-`L` subsequences by enumerating every position subset.
///
/// Exponential in `C`; meant as an independent check of [`subsequence_count`].
pub fn brute_force_count(q: u32, cycles: u64, length: u64) -> Result<BigUint> {
    if q < 1 {
        return Err(Error::domain("alphabet size must be at least 1"));
    }
    if cycles > BRUTE_FORCE_MAX_CYCLES {
        return Err(Error::domain(format!(
            "brute-force enumeration is limited to C <= {BRUTE_FORCE_MAX_CYCLES}"
        )));
    }
    if length > cycles {
        return Err(Error::domain(format!(
            "subsequence length {length} exceeds cycle count {cycles}"
        )));
    }
    let alphabet = Alphabet::new(q)?;
    let hay: Vec<Symbol> = crate::sequence::alternating_prefix(alphabet, cycles);
    let mut seen: HashSet<Vec<Symbol>> = HashSet::new();
    for mask in 0u32..(1u32 << cycles) {
        if mask.count_ones() as u64 != length {
            continue;
        }
        let s: Vec<Symbol> = (0..cycles as usize).filter(|&i| mask >> i & 1 == 1).map(|i| hay[i]).collect();
        seen.insert(s);
    }
    Ok(BigUint::from(seen.len()))
}

/// Lexicographic rank/unrank over the distinct length-`L` subsequences of `A_q[C]`.
///
/// Holds `table[m][r] = M_q(m, r)` for every suffix length `m <= C`; any
/// suffix of an alternating sequence is a relabelled alternating sequence, so
/// the count of completions depends only on how many cycles remain.
#[derive(Debug, Clone)]
pub struct SubsequenceRanker {
    alphabet: Alphabet,
    cycles: u64,
    length: usize,
    table: Vec<Vec<BigUint>>,
}

impl SubsequenceRanker {
    pub fn new(alphabet: Alphabet, cycles: u64, length: usize) -> Result<Self> {
        if length as u64 > cycles {
            return Err(Error::domain(format!(
                "subsequence length {length} exceeds cycle count {cycles}"
            )));
        }
        let q = alphabet.size() as usize;
        let c = cycles as usize;
        let mut table: Vec<Vec<BigUint>> = Vec::with_capacity(c + 1);
        for m in 0..=c {
            let mut row = Vec::with_capacity(length + 1);
            row.push(BigUint::one());
            for r in 1..=length {
                let mut v = BigUint::zero();
                // first remaining symbol value at offset k lands at suffix m - k - 1
                for k in 0..q.min(m) {
                    v += &table[m - k - 1][r - 1];
                }
                row.push(v);
            }
            table.push(row);
        }
        Ok(SubsequenceRanker { alphabet, cycles, length, table })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// `M_q(C, L)`, the size of the code space.
    pub fn count(&self) -> &BigUint {
        &self.table[self.cycles as usize][self.length]
    }

    /// Cycle offset from position `pos` to the next offer of `symbol`.
    fn wait(&self, pos: u64, symbol: Symbol) -> u64 {
        let q = self.alphabet.size() as u64;
        (symbol as u64 - 1 + q - pos % q) % q
    }

    pub fn rank(&self, symbols: &[Symbol]) -> Result<BigUint> {
        let not_member = || Error::NotAMember { q: self.alphabet.size(), cycles: self.cycles };
        if symbols.len() != self.length {
            return Err(not_member());
        }
        let mut index = BigUint::zero();
        let mut pos = 0u64;
        for (j, &s) in symbols.iter().enumerate() {
            if !self.alphabet.contains(s) {
                return Err(not_member());
            }
            let rest = self.length - j - 1;
            for a in 1..s {
                let at = pos + self.wait(pos, a);
                if at < self.cycles {
                    index += &self.table[(self.cycles - at - 1) as usize][rest];
                }
            }
            let at = pos + self.wait(pos, s);
            if at >= self.cycles {
                return Err(not_member());
            }
            pos = at + 1;
        }
        Ok(index)
    }

    pub fn unrank(&self, index: &BigUint) -> Result<Oligo> {
        if index >= self.count() {
            return Err(Error::domain(format!("index {index} out of range 0..{}", self.count())));
        }
        let mut index = index.clone();
        let mut pos = 0u64;
        let mut out = Vec::with_capacity(self.length);
        for j in 0..self.length {
            let rest = self.length - j - 1;
            let mut chosen = None;
            for a in 1..=self.alphabet.size() {
                let at = pos + self.wait(pos, a);
                if at >= self.cycles {
                    continue;
                }
                let block = &self.table[(self.cycles - at - 1) as usize][rest];
                if index < *block {
                    chosen = Some((a, at));
                    break;
                }
                index -= block;
            }
            let (a, at) = chosen.expect("index within count always selects a symbol");
            out.push(a);
            pos = at + 1;
        }
        Oligo::new(self.alphabet, out)
    }
}

/// Lexicographic index of `oligo` among the distinct length-`|oligo|` subsequences of `A_q[C]`.
pub fn rank(q: u32, cycles: u64, oligo: &Oligo) -> Result<BigUint> {
    let alphabet = Alphabet::new(q)?;
    if oligo.len() as u64 > cycles {
        return Err(Error::NotAMember { q, cycles });
    }
    SubsequenceRanker::new(alphabet, cycles, oligo.len())?.rank(oligo.symbols())
}

/// Inverse of [`rank`].
pub fn unrank(q: u32, cycles: u64, length: u64, index: &BigUint) -> Result<Oligo> {
    let alphabet = Alphabet::new(q)?;
    SubsequenceRanker::new(alphabet, cycles, length as usize)?.unrank(index)
}

//! Multi-size alphabet encoder.
//!
//! An oligo of length `L` is split into consecutive parts, each over its own
//! alphabet size `i` and produced by the single-redundancy encoder, so the
//! machine runs `A_{i}[⌊(i+1)L_i/2⌋]` for each part in turn. With a fraction
//! `α_i` of the symbols over alphabet `i`, the rate is `ρ·Σ α_i log2 i` and
//! `ρ = 2 / (1 + Σ i·α_i)`. The optimal profile uses two adjacent sizes
//! `s, s+1` with `α_s = s + 2 − 2/ρ`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::base::{base_cycle_budget, base_decode, base_encode};
use crate::capacity::linear_threshold;
use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Oligo, Segment, SupersequenceSpec, Symbol};

const ALPHA_TOL: f64 = 1e-12;

/// Fractions `α_1..α_q` of an oligo spent on each alphabet size.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaProfile {
    alphas: Vec<f64>,
}

impl AlphaProfile {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::domain("alpha profile needs at least one entry"));
        }
        if alphas.iter().any(|&a| a.is_nan() || a < 0.0) {
            return Err(Error::domain("alpha entries must be non-negative"));
        }
        let total: f64 = alphas.iter().sum();
        if (total - 1.0).abs() > ALPHA_TOL {
            return Err(Error::domain(format!("alpha entries sum to {total}, not 1")));
        }
        Ok(AlphaProfile { alphas })
    }

    pub fn q(&self) -> u32 {
        self.alphas.len() as u32
    }

    /// `α_i` for 1-based `i`.
    pub fn alpha(&self, i: u32) -> f64 {
        self.alphas[i as usize - 1]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// 1-based sizes with positive weight.
    pub fn support(&self) -> Vec<u32> {
        (1..=self.q()).filter(|&i| self.alpha(i) > 0.0).collect()
    }

    /// `2 / (1 + Σ i·α_i)`.
    pub fn rho(&self) -> f64 {
        let mean: f64 = self.alphas.iter().enumerate().map(|(i, a)| (i + 1) as f64 * a).sum();
        2.0 / (1.0 + mean)
    }

    /// `ρ·Σ α_i log2 i`.
    pub fn rate(&self) -> f64 {
        let info: f64 = self.alphas.iter().enumerate().map(|(i, a)| a * ((i + 1) as f64).log2()).sum();
        self.rho() * info
    }
}

/// The adjacent pair `(s, α_s)` maximizing the rate at `ρ`; `α_{s+1} = 1 − α_s`.
///
/// Valid for `2/(q+1) <= ρ <= 1`. When `ρ = 2/(s+1)` the larger `s` is
/// chosen, so the profile collapses to a single alphabet with `α_s = 1`.
pub fn optimal_alpha(q: u32, rho: f64) -> Result<(u32, f64)> {
    if q < 2 {
        return Err(Error::domain("multi-size encoding needs q >= 2"));
    }
    let lo = linear_threshold(q);
    if !(rho >= lo - ALPHA_TOL && rho <= 1.0) {
        return Err(Error::domain(format!("rho = {rho} is outside [{lo}, 1]")));
    }
    // 2/ρ − 1 lies in [s, s+1]
    let mean = 2.0 / rho - 1.0;
    let s = ((mean + ALPHA_TOL).floor() as u32).clamp(1, q - 1);
    let mut alpha_s = (s as f64 + 2.0 - 2.0 / rho).clamp(0.0, 1.0);
    if alpha_s < ALPHA_TOL {
        alpha_s = 0.0;
    } else if 1.0 - alpha_s < ALPHA_TOL {
        alpha_s = 1.0;
    }
    Ok((s, alpha_s))
}

pub fn optimal_profile(q: u32, rho: f64) -> Result<AlphaProfile> {
    let (s, alpha_s) = optimal_alpha(q, rho)?;
    let mut alphas = vec![0.0; q as usize];
    alphas[s as usize - 1] = alpha_s;
    alphas[s as usize] = 1.0 - alpha_s;
    AlphaProfile::new(alphas)
}

/// `R* = (ρ(s+2) − 2)·log2 s + (2 − ρ(s+1))·log2(s+1)`.
pub fn multisize_rate(q: u32, rho: f64) -> Result<f64> {
    let (s, _) = optimal_alpha(q, rho)?;
    let s = s as f64;
    Ok((rho * (s + 2.0) - 2.0) * s.log2() + (2.0 - rho * (s + 1.0)) * (s + 1.0).log2())
}

/// Block code over a fixed sequence of `(alphabet, length)` parts.
///
/// A block value is spread into mixed-radix digits (the first part's base
/// first, least significant digit first); each part of length `ℓ` carries
/// `ℓ − 1` digits through the single-redundancy encoder. Alphabet-1 parts
/// carry nothing and are emitted as constant runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedCodec {
    parts: Vec<(Alphabet, usize)>,
    block_bits: u64,
    spec: SupersequenceSpec,
    alphabet: Alphabet,
}

impl SegmentedCodec {
    pub fn new(parts: Vec<(Alphabet, usize)>) -> Result<Self> {
        let parts: Vec<_> = parts.into_iter().filter(|&(_, len)| len > 0).collect();
        if parts.is_empty() {
            return Err(Error::config("segmented code needs at least one nonempty part"));
        }
        let mut space = BigUint::one();
        for &(a, len) in &parts {
            space *= BigUint::from(a.size()).pow(len as u32 - 1);
        }
        if space.bits() < 2 {
            return Err(Error::config("configuration carries no information bits"));
        }
        let block_bits = space.bits() - 1;
        let spec = SupersequenceSpec::new(
            parts
                .iter()
                .map(|&(alphabet, len)| Segment { alphabet, cycles: base_cycle_budget(alphabet.size(), len) })
                .collect(),
        );
        let alphabet = parts.iter().map(|&(a, _)| a).max().expect("nonempty");
        Ok(SegmentedCodec { parts, block_bits, spec, alphabet })
    }

    pub fn parts(&self) -> &[(Alphabet, usize)] {
        &self.parts
    }

    pub fn segment_lengths(&self) -> Vec<usize> {
        self.parts.iter().map(|&(_, l)| l).collect()
    }

    pub fn length(&self) -> usize {
        self.parts.iter().map(|&(_, l)| l).sum()
    }

    pub fn block_bits(&self) -> u64 {
        self.block_bits
    }

    pub fn spec(&self) -> &SupersequenceSpec {
        &self.spec
    }

    /// Information bits per synthesis cycle.
    pub fn rate(&self) -> f64 {
        self.block_bits as f64 / self.spec.total_cycles() as f64
    }

    pub fn rho(&self) -> f64 {
        self.length() as f64 / self.spec.total_cycles() as f64
    }

    pub fn encode_value(&self, value: &BigUint) -> Result<Oligo> {
        if value.bits() > self.block_bits {
            return Err(Error::domain(format!("block value exceeds {} bits", self.block_bits)));
        }
        let mut rest = value.clone();
        let mut out = Vec::with_capacity(self.length());
        for &(alphabet, len) in &self.parts {
            if alphabet.size() == 1 {
                out.extend(std::iter::repeat_n(1, len));
                continue;
            }
            let radix = BigUint::from(alphabet.size());
            let info: Vec<Symbol> = (0..len - 1)
                .map(|_| {
                    let (q, r) = rest.div_rem(&radix);
                    rest = q;
                    u32::try_from(&r).expect("digit below radix") + 1
                })
                .collect();
            out.extend(base_encode(alphabet, &info)?.into_symbols());
        }
        debug_assert!(rest.is_zero());
        Oligo::new(self.alphabet, out)
    }

    pub fn decode_value(&self, symbols: &[Symbol]) -> Result<BigUint> {
        if symbols.len() != self.length() {
            return Err(Error::CorruptBlock(format!(
                "expected {} symbols, found {}",
                self.length(),
                symbols.len()
            )));
        }
        let mut digits: Vec<(u32, Vec<Symbol>)> = Vec::with_capacity(self.parts.len());
        let mut at = 0;
        for &(alphabet, len) in &self.parts {
            let chunk = &symbols[at..at + len];
            at += len;
            if alphabet.size() == 1 {
                if chunk.iter().any(|&s| s != 1) {
                    return Err(Error::CorruptBlock("constant run contains a non-1 symbol".into()));
                }
                continue;
            }
            let part = Oligo::new(alphabet, chunk.to_vec()).map_err(|e| Error::CorruptBlock(e.to_string()))?;
            digits.push((alphabet.size(), base_decode(&part)?));
        }
        let mut value = BigUint::zero();
        for (radix, info) in digits.iter().rev() {
            for &d in info.iter().rev() {
                value = value * *radix + (d - 1);
            }
        }
        if value.bits() > self.block_bits {
            return Err(Error::CorruptBlock("decoded value exceeds block width".into()));
        }
        Ok(value)
    }
}

/// Multi-size encoder at target density `ρ` with oligo length `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultisizeCodec {
    q: u32,
    rho: f64,
    s: u32,
    alpha_s: f64,
    inner: SegmentedCodec,
}

impl MultisizeCodec {
    pub fn new(q: u32, rho: f64, length: usize) -> Result<Self> {
        let (s, alpha_s) = optimal_alpha(q, rho)?;
        let len_s = crate::capacity::floor_length(alpha_s, length as u64) as usize;
        let len_next = length - len_s;
        if alpha_s > 0.0 && alpha_s < 1.0 && (len_s == 0 || len_next == 0) {
            return Err(Error::config(format!(
                "length {length} is too short to hold both alphabet sizes {s} and {}",
                s + 1
            )));
        }
        let inner = SegmentedCodec::new(vec![
            (Alphabet::new(s)?, len_s),
            (Alphabet::new(s + 1)?, len_next),
        ])?;
        Ok(MultisizeCodec { q, rho, s, alpha_s, inner })
    }

    /// Rebuilds a codec from stored segment lengths (decode path).
    pub(crate) fn from_parts(q: u32, rho: f64, inner: SegmentedCodec) -> Result<Self> {
        let (s, alpha_s) = optimal_alpha(q, rho)?;
        Ok(MultisizeCodec { q, rho, s, alpha_s, inner })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn alpha_s(&self) -> f64 {
        self.alpha_s
    }

    pub fn segments(&self) -> &SegmentedCodec {
        &self.inner
    }

    /// Asymptotic optimum `R*` at this `ρ`.
    pub fn asymptotic_rate(&self) -> f64 {
        multisize_rate(self.q, self.rho).expect("validated at construction")
    }
}

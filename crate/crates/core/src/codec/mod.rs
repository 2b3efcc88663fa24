//! Encoder/decoder families.
//!
//! | scheme      | density ρ               | rate (bits/cycle)             |
//! |-------------|-------------------------|-------------------------------|
//! | `lookup`    | any ρ with ρ·d·q ∈ ℕ    | `⌊log2 M_q(dq, ρdq)⌋ / (dq)`  |
//! | `base`      | ≈ 2/(q+1)               | → ρ·log2 q                    |
//! | `multisize` | 2/(q+1) ..= 1           | → R*(q, ρ)                    |
//! | `balanced`  | ⌊q*/2⌋ / q*             | f_q / q*                      |
//! | `window`    | flexible, ≤ ⌈q/2⌉/q     | (q−1) / q                     |
//!
//! All schemes are block codes: the payload is zero-padded to whole blocks
//! and the true bit length travels in [`EncodedBatch::payload_bits`].

mod balanced;
mod base;
mod batch;
mod bits;
mod lookup;
mod multisize;
mod window;

use serde::{Deserialize, Serialize};

pub use balanced::{
    balance_failures, e1_decode, e1_encode, f_and_qstar, knuth_balance, knuth_unbalance, project, BalancedCodec,
    KnuthBalancer,
};
pub use base::{base_cycle_budget, base_decode, base_encode};
pub use batch::{BlockLayout, EncodedBatch, Scheme};
pub use bits::BitString;
pub use lookup::LookupCodec;
pub use multisize::{multisize_rate, optimal_alpha, optimal_profile, AlphaProfile, MultisizeCodec, SegmentedCodec};
pub use window::{WindowCodec, WINDOW_MAX_Q};

use crate::capacity::{cap_fixed_length, linear_threshold};
use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Oligo, SupersequenceSpec, Symbol};

/// Upper bound on lookup block width when choosing `d` for rate tables.
pub const LOOKUP_MAX_BLOCK_BITS: u64 = 32;
/// Largest program length searched when choosing `d` for rate tables.
pub const LOOKUP_MAX_CYCLES: u64 = 512;

/// Parameters selecting and configuring a scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodecConfig {
    pub scheme: Scheme,
    pub q: u32,
    #[serde(default)]
    pub rho: Option<f64>,
    /// Lookup: periods of `A_q` per block.
    #[serde(default)]
    pub d: Option<u64>,
    /// Base and multisize: oligo length.
    #[serde(default)]
    pub length: Option<usize>,
}

impl CodecConfig {
    pub fn new(scheme: Scheme, q: u32) -> Self {
        CodecConfig { scheme, q, rho: None, d: None, length: None }
    }

    pub fn rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn d(mut self, d: u64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn length(mut self, length: usize) -> Self {
        self.length = Some(length);
        self
    }
}

/// Summary of a configured codec.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodecProfile {
    pub scheme: Scheme,
    pub q: u32,
    pub rho: f64,
    /// Information bits per synthesis cycle.
    pub rate: f64,
    pub block_bits: u64,
    /// Cycles of machine program per block.
    pub cycles_per_block: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_star: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub segment_lengths: Vec<usize>,
}

impl CodecProfile {
    pub fn cycles_per_bit(&self) -> f64 {
        1.0 / self.rate
    }

    fn bare(scheme: Scheme, q: u32, rho: f64, block_bits: u64, cycles_per_block: u64) -> Self {
        CodecProfile {
            scheme,
            q,
            rho,
            rate: block_bits as f64 / cycles_per_block as f64,
            block_bits,
            cycles_per_block,
            d: None,
            length: None,
            s: None,
            alpha_s: None,
            f_q: None,
            q_star: None,
            segment_lengths: Vec::new(),
        }
    }
}

/// A configured encoder/decoder.
#[derive(Debug, Clone)]
pub enum Codec {
    Lookup(LookupCodec),
    Base { q: u32, inner: SegmentedCodec },
    Multisize(MultisizeCodec),
    Balanced(BalancedCodec),
    Window(WindowCodec),
}

impl Codec {
    pub fn lookup(q: u32, d: u64, rho: f64) -> Result<Self> {
        Ok(Codec::Lookup(LookupCodec::new(q, d, rho)?))
    }

    /// Single-redundancy blocks of `length` symbols over `Σ_q`.
    pub fn base(q: u32, length: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::config("the base scheme needs q >= 2"));
        }
        Ok(Codec::Base { q, inner: SegmentedCodec::new(vec![(Alphabet::new(q)?, length)])? })
    }

    pub fn multisize(q: u32, rho: f64, length: usize) -> Result<Self> {
        Ok(Codec::Multisize(MultisizeCodec::new(q, rho, length)?))
    }

    pub fn balanced(q: u32) -> Result<Self> {
        Ok(Codec::Balanced(BalancedCodec::new(q)?))
    }

    pub fn window(q: u32) -> Result<Self> {
        Ok(Codec::Window(WindowCodec::new(q)?))
    }

    pub fn from_config(cfg: &CodecConfig) -> Result<Self> {
        let need = |what: &str| Error::config(format!("scheme {} needs --{what}", cfg.scheme));
        match cfg.scheme {
            Scheme::Lookup => Codec::lookup(cfg.q, cfg.d.ok_or_else(|| need("d"))?, cfg.rho.ok_or_else(|| need("rho"))?),
            Scheme::Base => Codec::base(cfg.q, cfg.length.ok_or_else(|| need("length"))?),
            Scheme::Multisize => Codec::multisize(
                cfg.q,
                cfg.rho.ok_or_else(|| need("rho"))?,
                cfg.length.ok_or_else(|| need("length"))?,
            ),
            Scheme::Balanced => Codec::balanced(cfg.q),
            Scheme::Window => Codec::window(cfg.q),
        }
    }

    /// Rebuilds the codec that produced `batch`. Inconsistent metadata is
    /// reported as a corrupt stream.
    pub fn for_batch(batch: &EncodedBatch) -> Result<Self> {
        let corrupt = |e: Error| if e.is_corruption() { e } else { Error::CorruptStream(e.to_string()) };
        let q = batch.q;
        let codec = match batch.scheme {
            Scheme::Lookup => {
                let [seg] = batch.spec.segments() else {
                    return Err(Error::CorruptStream("lookup batches use a single segment".into()));
                };
                if seg.alphabet.size() != q || seg.cycles % q as u64 != 0 {
                    return Err(Error::CorruptStream("lookup segment does not match q".into()));
                }
                let length = batch.oligos.first().map_or(0, Oligo::len);
                Codec::Lookup(LookupCodec::with_length(q, seg.cycles / q as u64, length).map_err(corrupt)?)
            }
            Scheme::Base => {
                let [length] = batch.layout.segment_lengths[..] else {
                    return Err(Error::CorruptStream("base batches record one segment length".into()));
                };
                Codec::base(q, length).map_err(corrupt)?
            }
            Scheme::Multisize => {
                let segs = batch.spec.segments();
                if segs.len() != batch.layout.segment_lengths.len() {
                    return Err(Error::CorruptStream("segment lengths do not match the program".into()));
                }
                let parts = segs.iter().zip(&batch.layout.segment_lengths).map(|(s, &l)| (s.alphabet, l)).collect();
                let inner = SegmentedCodec::new(parts).map_err(corrupt)?;
                Codec::Multisize(MultisizeCodec::from_parts(q, batch.rho, inner).map_err(corrupt)?)
            }
            Scheme::Balanced => Codec::balanced(q).map_err(corrupt)?,
            Scheme::Window => Codec::window(q).map_err(corrupt)?,
        };
        Ok(codec)
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            Codec::Lookup(_) => Scheme::Lookup,
            Codec::Base { .. } => Scheme::Base,
            Codec::Multisize(_) => Scheme::Multisize,
            Codec::Balanced(_) => Scheme::Balanced,
            Codec::Window(_) => Scheme::Window,
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            Codec::Lookup(c) => c.q(),
            Codec::Base { q, .. } => *q,
            Codec::Multisize(c) => c.q(),
            Codec::Balanced(c) => c.q(),
            Codec::Window(c) => c.q(),
        }
    }

    pub fn block_bits(&self) -> u64 {
        match self {
            Codec::Lookup(c) => c.block_bits(),
            Codec::Base { inner, .. } => inner.block_bits(),
            Codec::Multisize(c) => c.segments().block_bits(),
            Codec::Balanced(c) => c.f() as u64,
            Codec::Window(c) => c.block_bits() as u64,
        }
    }

    pub fn profile(&self) -> CodecProfile {
        let scheme = self.scheme();
        let q = self.q();
        match self {
            Codec::Lookup(c) => CodecProfile {
                d: Some(c.d()),
                length: Some(c.length()),
                ..CodecProfile::bare(scheme, q, c.rho(), c.block_bits(), c.cycles())
            },
            Codec::Base { inner, .. } => CodecProfile {
                length: Some(inner.length()),
                segment_lengths: inner.segment_lengths(),
                ..CodecProfile::bare(scheme, q, inner.rho(), inner.block_bits(), inner.spec().total_cycles())
            },
            Codec::Multisize(c) => {
                let inner = c.segments();
                CodecProfile {
                    length: Some(inner.length()),
                    s: Some(c.s()),
                    alpha_s: Some(c.alpha_s()),
                    segment_lengths: inner.segment_lengths(),
                    ..CodecProfile::bare(scheme, q, c.rho(), inner.block_bits(), inner.spec().total_cycles())
                }
            }
            Codec::Balanced(c) => CodecProfile {
                f_q: Some(c.f()),
                q_star: Some(c.q_star()),
                length: Some(c.block_symbols()),
                ..CodecProfile::bare(scheme, q, c.rho(), c.f() as u64, c.q_star() as u64)
            },
            Codec::Window(c) => {
                CodecProfile::bare(scheme, q, window_mean_density(c), c.block_bits() as u64, q as u64)
            }
        }
    }

    fn layout(&self) -> BlockLayout {
        let segment_lengths = match self {
            Codec::Base { inner, .. } => inner.segment_lengths(),
            Codec::Multisize(c) => c.segments().segment_lengths(),
            _ => Vec::new(),
        };
        BlockLayout { block_bits: self.block_bits(), segment_lengths }
    }

    /// Program for `blocks` encoded blocks.
    fn spec_for(&self, blocks: usize) -> SupersequenceSpec {
        match self {
            Codec::Lookup(c) => c.spec(),
            Codec::Base { inner, .. } => inner.spec().clone(),
            Codec::Multisize(c) => c.segments().spec().clone(),
            Codec::Balanced(c) => SupersequenceSpec::alternating(c.alphabet(), (blocks * c.q_star()) as u64),
            Codec::Window(c) => SupersequenceSpec::alternating(c.alphabet(), c.q() as u64),
        }
    }

    fn encode_block(&self, block: &BitString) -> Result<Oligo> {
        match self {
            Codec::Lookup(c) => c.encode_block(block),
            Codec::Base { inner, .. } => inner.encode_value(&block.to_biguint()),
            Codec::Multisize(c) => c.segments().encode_value(&block.to_biguint()),
            Codec::Balanced(c) => c.encode_block(block),
            Codec::Window(c) => c.encode_block(block),
        }
    }

    fn decode_block(&self, symbols: &[Symbol]) -> Result<BitString> {
        let width = self.block_bits() as usize;
        let widen = |v: num_bigint::BigUint| {
            BitString::from_biguint(&v, width).map_err(|_| Error::CorruptBlock("block value too wide".into()))
        };
        match self {
            Codec::Lookup(c) => c.decode_block(symbols),
            Codec::Base { inner, .. } => widen(inner.decode_value(symbols)?),
            Codec::Multisize(c) => widen(c.segments().decode_value(symbols)?),
            Codec::Balanced(c) => c.decode_block(symbols),
            Codec::Window(c) => c.decode_block(symbols),
        }
    }

    pub fn encode(&self, payload: &BitString) -> Result<EncodedBatch> {
        let width = self.block_bits() as usize;
        let blocks = payload.padded_blocks(width);
        let oligos = match self {
            Codec::Balanced(c) => {
                let mut padded = payload.clone();
                padded.extend_from(&BitString::zeros(blocks.len() * width - payload.len()));
                vec![c.encode_stream(&padded)?]
            }
            _ => blocks.iter().map(|b| self.encode_block(b)).collect::<Result<Vec<_>>>()?,
        };
        Ok(EncodedBatch {
            scheme: self.scheme(),
            q: self.q(),
            rho: self.profile().rho,
            payload_bits: payload.len() as u64,
            spec: self.spec_for(blocks.len()),
            oligos,
            layout: self.layout(),
        })
    }

    pub fn decode(&self, batch: &EncodedBatch) -> Result<BitString> {
        if batch.scheme != self.scheme() || batch.q != self.q() {
            return Err(Error::CorruptStream(format!(
                "batch is {} over q = {}, codec is {} over q = {}",
                batch.scheme,
                batch.q,
                self.scheme(),
                self.q()
            )));
        }
        let width = self.block_bits() as usize;
        if batch.layout.block_bits != width as u64 {
            return Err(Error::CorruptStream(format!(
                "batch records {} bits per block, codec carries {width}",
                batch.layout.block_bits
            )));
        }
        let blocks = (batch.payload_bits as usize).div_ceil(width);
        if batch.spec != self.spec_for(blocks) {
            return Err(Error::CorruptStream("synthesis program does not match the codec".into()));
        }
        let mut out = BitString::new();
        match self {
            Codec::Balanced(c) => {
                let [oligo] = &batch.oligos[..] else {
                    return Err(Error::CorruptStream("balanced batches hold exactly one oligo".into()));
                };
                if oligo.len() != blocks * c.block_symbols() {
                    return Err(Error::CorruptStream(format!(
                        "stream holds {} symbols, expected {} blocks of {}",
                        oligo.len(),
                        blocks,
                        c.block_symbols()
                    )));
                }
                out = c.decode_stream(oligo.symbols())?;
            }
            _ => {
                if batch.oligos.len() != blocks {
                    return Err(Error::CorruptStream(format!(
                        "expected {blocks} oligos for {} payload bits, found {}",
                        batch.payload_bits,
                        batch.oligos.len()
                    )));
                }
                for oligo in &batch.oligos {
                    out.extend_from(&self.decode_block(oligo.symbols())?);
                }
            }
        }
        if out.bits()[batch.payload_bits as usize..].iter().any(|&b| b) {
            return Err(Error::CorruptStream("nonzero padding after the payload".into()));
        }
        out.truncate(batch.payload_bits as usize);
        Ok(out)
    }
}

/// Expected symbols per cycle of the window scheme over uniform payloads.
fn window_mean_density(c: &WindowCodec) -> f64 {
    let bits = c.block_bits();
    let n = c.q() as u128;
    // codewords are taken in order of increasing size
    let mut left: u128 = 1 << bits;
    let mut weighted = 0f64;
    let mut binom: u128 = 1;
    for k in 1..=c.max_weight() as u128 {
        binom = binom * (n - k + 1) / k;
        let used = binom.min(left);
        weighted += used as f64 * k as f64;
        left -= used;
        if left == 0 {
            break;
        }
    }
    weighted / (1u128 << bits) as f64 / c.q() as f64
}

/// Inverts any batch using the parameters it records.
pub fn decode_batch(batch: &EncodedBatch) -> Result<BitString> {
    if batch.payload_bits == 0 && batch.oligos.iter().all(Oligo::is_empty) {
        return Ok(BitString::new());
    }
    Codec::for_batch(batch)?.decode(batch)
}

pub fn lookup_encode(q: u32, d: u64, rho: f64, payload: &BitString) -> Result<EncodedBatch> {
    Codec::lookup(q, d, rho)?.encode(payload)
}

pub fn lookup_decode(batch: &EncodedBatch) -> Result<BitString> {
    expect_scheme(batch, Scheme::Lookup)?;
    decode_batch(batch)
}

pub fn multisize_encode(q: u32, rho: f64, payload: &BitString, length: usize) -> Result<EncodedBatch> {
    Codec::multisize(q, rho, length)?.encode(payload)
}

pub fn multisize_decode(batch: &EncodedBatch) -> Result<BitString> {
    expect_scheme(batch, Scheme::Multisize)?;
    decode_batch(batch)
}

/// `E_2`: concatenated balanced blocks in a single oligo.
pub fn e2_encode(q: u32, payload: &BitString) -> Result<EncodedBatch> {
    Codec::balanced(q)?.encode(payload)
}

pub fn e2_decode(batch: &EncodedBatch) -> Result<BitString> {
    expect_scheme(batch, Scheme::Balanced)?;
    decode_batch(batch)
}

/// One oligo per `(q−1)`-bit window.
pub fn window_encode(q: u32, payload: &BitString) -> Result<EncodedBatch> {
    Codec::window(q)?.encode(payload)
}

pub fn window_decode(batch: &EncodedBatch) -> Result<BitString> {
    expect_scheme(batch, Scheme::Window)?;
    decode_batch(batch)
}

fn expect_scheme(batch: &EncodedBatch, scheme: Scheme) -> Result<()> {
    if batch.scheme != scheme {
        return Err(Error::CorruptStream(format!("expected a {scheme} batch, found {}", batch.scheme)));
    }
    Ok(())
}

/// One point of an achievable-rate curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub scheme: Scheme,
    pub rho: f64,
    pub rate: f64,
    pub cap: f64,
}

/// `⌊log2 M_q(m, r)⌋` for all `m, r <= max_cycles`, saturating far above 2^64.
struct SaturatingCounts {
    table: Vec<Vec<u128>>,
}

impl SaturatingCounts {
    const CEILING: u128 = 1 << 100;

    fn new(q: u32, max_cycles: usize) -> Self {
        let q = q as usize;
        let mut table: Vec<Vec<u128>> = Vec::with_capacity(max_cycles + 1);
        for m in 0..=max_cycles {
            let mut row = vec![0u128; m + 1];
            row[0] = 1;
            for (r, slot) in row.iter_mut().enumerate().skip(1) {
                let mut v = 0u128;
                for k in 0..q.min(m) {
                    if let Some(&x) = table[m - k - 1].get(r - 1) {
                        v = (v + x).min(Self::CEILING);
                    }
                }
                *slot = v;
            }
            table.push(row);
        }
        SaturatingCounts { table }
    }

    fn floor_log2(&self, cycles: usize, length: usize) -> u64 {
        let v = self.table[cycles][length];
        if v == 0 {
            0
        } else {
            127 - v.leading_zeros() as u64
        }
    }
}

/// Largest `d` with `ρ·d·q` integral and `B <= max_bits`, with its `B >= 1`.
fn best_lookup_design(counts: &SaturatingCounts, q: u32, rho: f64, max_bits: u64) -> Option<(u64, u64)> {
    let mut best = None;
    let mut d = 1u64;
    while d * q as u64 <= LOOKUP_MAX_CYCLES {
        let cycles = d * q as u64;
        let raw = rho * cycles as f64;
        if (raw - raw.round()).abs() <= 1e-9 {
            let b = counts.floor_log2(cycles as usize, raw.round() as usize);
            if b > max_bits {
                break;
            }
            if b >= 1 {
                best = Some((d, b));
            }
        }
        d += 1;
    }
    best
}

/// Achievable rates per scheme on `rho_grid`, next to `cap(q, ρ)`.
///
/// Lookup rows use the largest `d` whose block width stays within
/// [`LOOKUP_MAX_BLOCK_BITS`]. Base and balanced schemes exist at a single
/// density and contribute one row each when that density lies inside the
/// grid's range. The window scheme has no fixed density and is omitted.
/// Rows are sorted by ρ, then scheme name.
pub fn rate_table(q: u32, rho_grid: &[f64]) -> Result<Vec<RateRow>> {
    if q < 2 {
        return Err(Error::domain("rate tables need q >= 2"));
    }
    if let Some(bad) = rho_grid.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(Error::domain(format!("grid value {bad} is outside [0, 1]")));
    }
    let mut rows = Vec::new();
    let counts = SaturatingCounts::new(q, LOOKUP_MAX_CYCLES as usize);
    let threshold = linear_threshold(q);
    for &rho in rho_grid {
        let cap = cap_fixed_length(q, rho)?;
        if let Some((d, b)) = best_lookup_design(&counts, q, rho, LOOKUP_MAX_BLOCK_BITS) {
            rows.push(RateRow { scheme: Scheme::Lookup, rho, rate: b as f64 / (d * q as u64) as f64, cap });
        }
        if rho >= threshold {
            rows.push(RateRow { scheme: Scheme::Multisize, rho, rate: multisize_rate(q, rho)?, cap });
        }
    }

    let lo = rho_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rho_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let in_range = |r: f64| r >= lo - 1e-12 && r <= hi + 1e-12;
    if in_range(threshold) {
        let cap = cap_fixed_length(q, threshold)?;
        rows.push(RateRow { scheme: Scheme::Base, rho: threshold, rate: threshold * (q as f64).log2(), cap });
    }
    if let Ok(c) = BalancedCodec::new(q) {
        if in_range(c.rho()) {
            rows.push(RateRow { scheme: Scheme::Balanced, rho: c.rho(), rate: c.rate(), cap: cap_fixed_length(q, c.rho())? });
        }
    }
    rows.sort_by(|a, b| a.rho.total_cmp(&b.rho).then_with(|| a.scheme.as_str().cmp(b.scheme.as_str())));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::cap_flexible;
    use crate::counting::subsequence_count;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn random_bits(rng: &mut StdRng, n: usize) -> BitString {
        (0..n).map(|_| rng.gen::<bool>()).collect()
    }

    fn all_codecs() -> Vec<Codec> {
        vec![
            Codec::lookup(2, 2, 0.5).unwrap(),
            Codec::lookup(4, 6, 0.5).unwrap(),
            Codec::base(3, 7).unwrap(),
            Codec::base(4, 40).unwrap(),
            Codec::multisize(5, 0.45, 60).unwrap(),
            Codec::multisize(4, 0.8, 20).unwrap(),
            Codec::balanced(6).unwrap(),
            Codec::balanced(8).unwrap(),
            Codec::window(4).unwrap(),
            Codec::window(9).unwrap(),
        ]
    }

    #[test]
    fn lookup_worked_example() {
        let batch = lookup_encode(2, 2, 0.5, &BitString::parse("10").unwrap()).unwrap();
        assert_eq!(batch.oligos.len(), 1);
        assert_eq!(batch.oligos[0].symbols(), &[2, 1]);
        assert_eq!(lookup_decode(&batch).unwrap().to_string(), "10");
    }

    #[test]
    fn roundtrip_random_payloads() {
        let mut rng = StdRng::seed_from_u64(7);
        for codec in all_codecs() {
            for len in [0usize, 1, 5, 64, 333] {
                let p = random_bits(&mut rng, len);
                let batch = codec.encode(&p).unwrap();
                assert!(batch.fits_cycle_budget(), "{:?}", codec.scheme());
                assert_eq!(codec.decode(&batch).unwrap(), p);
                let parsed = EncodedBatch::from_json(&batch.to_json()).unwrap();
                assert_eq!(decode_batch(&parsed).unwrap(), p, "{:?} len={len}", codec.scheme());
            }
        }
    }

    #[test]
    fn profiles_respect_capacity() {
        for codec in all_codecs() {
            let p = codec.profile();
            let cap = match p.scheme {
                Scheme::Window => cap_flexible(p.q).unwrap(),
                _ => cap_fixed_length(p.q, p.rho).unwrap(),
            };
            assert!(p.rate <= cap + 1e-9, "{:?}: rate {} > cap {}", p.scheme, p.rate, cap);
        }
    }

    #[test]
    fn balanced_profile_q8() {
        let p = Codec::balanced(8).unwrap().profile();
        assert_eq!((p.f_q, p.q_star), (Some(4), Some(7)));
        assert_eq!(p.rate, 4.0 / 7.0);
        assert_eq!(p.cycles_per_bit(), 7.0 / 4.0);
    }

    #[test]
    fn e2_spec_and_rates() {
        for (q, r) in [(4u32, 0.5), (8, 4.0 / 7.0), (16, 0.6875), (32, 0.8125)] {
            let c = BalancedCodec::new(q).unwrap();
            assert_eq!(c.rate(), r);
        }
        let mut rng = StdRng::seed_from_u64(3);
        for q in [4u32, 8, 16, 32] {
            let p = random_bits(&mut rng, 200);
            let batch = e2_encode(q, &p).unwrap();
            let (f, q_star) = f_and_qstar(q).unwrap();
            let n = 200usize.div_ceil(f);
            assert_eq!(batch.spec.total_cycles(), (n * q_star) as u64);
            assert_eq!(batch.oligos[0].len(), n * (q_star / 2));
            assert!(batch.fits_cycle_budget());
            assert_eq!(e2_decode(&batch).unwrap(), p);
        }
    }

    #[test]
    fn window_batch_shape() {
        let batch = window_encode(4, &BitString::parse("1011100").unwrap()).unwrap();
        assert_eq!(batch.spec.segments().len(), 1);
        assert_eq!(batch.spec.total_cycles() % 4, 0);
        assert_eq!(batch.oligos.len(), 3);
        assert_eq!(window_decode(&batch).unwrap().to_string(), "1011100");
    }

    #[test]
    fn distinct_payloads_distinct_batches() {
        for codec in all_codecs() {
            let bits = 10usize;
            let mut seen = std::collections::HashSet::new();
            for v in 0u128..1 << bits {
                let batch = codec.encode(&BitString::from_u128(v, bits)).unwrap();
                assert!(seen.insert(batch.to_json()), "{:?}", codec.scheme());
            }
        }
    }

    #[test]
    fn decode_rejects_mismatches() {
        let p = BitString::parse("110010101").unwrap();
        let batch = Codec::window(4).unwrap().encode(&p).unwrap();

        let mut wrong = batch.clone();
        wrong.scheme = Scheme::Balanced;
        assert!(decode_batch(&wrong).is_err());
        assert!(window_decode(&wrong).unwrap_err().is_corruption());

        let mut short = batch.clone();
        short.oligos.pop();
        assert!(decode_batch(&short).unwrap_err().is_corruption());

        let mut bad_spec = batch.clone();
        bad_spec.spec = SupersequenceSpec::alternating(Alphabet::new(4).unwrap(), 8);
        assert!(decode_batch(&bad_spec).unwrap_err().is_corruption());

        let mut bad_layout = batch.clone();
        bad_layout.layout.block_bits = 2;
        assert!(decode_batch(&bad_layout).unwrap_err().is_corruption());

        // 9 bits in 3-bit blocks leaves no padding; claim 8 so the last bit becomes padding
        let mut pad = batch;
        pad.payload_bits = 8;
        assert!(decode_batch(&pad).unwrap_err().is_corruption());
    }

    #[test]
    fn config_requires_parameters() {
        assert!(Codec::from_config(&CodecConfig::new(Scheme::Lookup, 4)).is_err());
        assert!(Codec::from_config(&CodecConfig::new(Scheme::Lookup, 4).d(2).rho(0.5)).is_ok());
        assert!(Codec::from_config(&CodecConfig::new(Scheme::Multisize, 5).rho(0.45)).is_err());
        assert!(Codec::from_config(&CodecConfig::new(Scheme::Window, 5)).is_ok());
        assert!(Codec::base(1, 5).is_err());
    }

    #[test]
    fn saturating_counts_agree_with_exact() {
        let counts = SaturatingCounts::new(3, 60);
        for c in 0..=60u64 {
            for l in 0..=c {
                let exact = subsequence_count(3, c, l).unwrap();
                assert_eq!(counts.floor_log2(c as usize, l as usize), exact.bits().saturating_sub(1));
            }
        }
    }

    #[test]
    fn rate_table_rows() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        for q in [2u32, 4, 8] {
            let rows = rate_table(q, &grid).unwrap();
            for r in &rows {
                assert!(r.rate <= r.cap + 1e-9, "{r:?}");
            }
            let threshold = linear_threshold(q);
            let base = rows.iter().find(|r| r.scheme == Scheme::Base).unwrap();
            assert!((base.rate - threshold * (q as f64).log2()).abs() < 1e-12);
            let ms = multisize_rate(q, threshold).unwrap();
            assert!((ms - threshold * (q as f64).log2()).abs() < 1e-12);
            let balanced: Vec<_> = rows.iter().filter(|r| r.scheme == Scheme::Balanced).collect();
            match BalancedCodec::new(q) {
                Ok(c) => {
                    assert_eq!(balanced.len(), 1);
                    assert_eq!(balanced[0].rho, c.rho());
                }
                Err(_) => assert!(balanced.is_empty()),
            }
            assert!(rows.windows(2).all(|w| w[0].rho <= w[1].rho));
            // lookup is feasible at ρ = 1/2
            assert!(rows.iter().any(|r| r.scheme == Scheme::Lookup && r.rho == 0.5));
        }
        assert!(rate_table(4, &[1.5]).is_err());
    }
}

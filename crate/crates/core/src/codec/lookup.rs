//! Enumerative ("lookup table") encoder.
//!
//! Every `B = ⌊log2 M_q(dq, L)⌋` payload bits select, by lexicographic
//! unranking, one distinct length-`L` subsequence of `A_q[dq]`. The table is
//! never materialized.

use num_bigint::BigUint;

use super::bits::BitString;
use crate::counting::SubsequenceRanker;
use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Oligo, SupersequenceSpec, Symbol};

#[derive(Debug, Clone)]
pub struct LookupCodec {
    d: u64,
    ranker: SubsequenceRanker,
    block_bits: u64,
}

impl LookupCodec {
    /// Requires `ρ·d·q` to be an integer.
    pub fn new(q: u32, d: u64, rho: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::config("d must be at least 1"));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::config(format!("rho = {rho} is outside [0, 1]")));
        }
        let cycles = d * q as u64;
        let raw = rho * cycles as f64;
        if (raw - raw.round()).abs() > 1e-9 {
            return Err(Error::config(format!("rho·d·q = {raw} is not an integer")));
        }
        Self::with_length(q, d, raw.round() as usize)
    }

    pub fn with_length(q: u32, d: u64, length: usize) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        let ranker = SubsequenceRanker::new(alphabet, d * q as u64, length)?;
        let count = ranker.count();
        if count.bits() < 2 {
            return Err(Error::config(format!(
                "M_{q}({}, {length}) = {count} gives no whole payload bit",
                d * q as u64
            )));
        }
        let block_bits = count.bits() - 1;
        Ok(LookupCodec { d, ranker, block_bits })
    }

    pub fn q(&self) -> u32 {
        self.ranker.alphabet().size()
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn cycles(&self) -> u64 {
        self.ranker.cycles()
    }

    pub fn length(&self) -> usize {
        self.ranker.length()
    }

    /// `B`.
    pub fn block_bits(&self) -> u64 {
        self.block_bits
    }

    pub fn rho(&self) -> f64 {
        self.length() as f64 / self.cycles() as f64
    }

    /// `B / (dq)`.
    pub fn rate(&self) -> f64 {
        self.block_bits as f64 / self.cycles() as f64
    }

    pub fn spec(&self) -> SupersequenceSpec {
        SupersequenceSpec::alternating(self.ranker.alphabet(), self.cycles())
    }

    pub fn encode_block(&self, block: &BitString) -> Result<Oligo> {
        self.ranker.unrank(&block.to_biguint())
    }

    pub fn decode_block(&self, symbols: &[Symbol]) -> Result<BitString> {
        let index: BigUint = self.ranker.rank(symbols).map_err(|e| Error::CorruptBlock(e.to_string()))?;
        BitString::from_biguint(&index, self.block_bits as usize)
            .map_err(|_| Error::CorruptBlock("rank exceeds the payload range".into()))
    }
}

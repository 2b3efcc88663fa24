use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Bit sequence with an explicit length (never byte-padded internally).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    pub fn zeros(len: usize) -> Self {
        BitString { bits: vec![false; len] }
    }

    /// Bits of `bytes`, most significant bit of each byte first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let bits = bytes.iter().flat_map(|&b| (0..8).rev().map(move |i| b >> i & 1 == 1)).collect();
        BitString { bits }
    }

    /// Packs MSB-first, zero-filling the last byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i))))
            .collect()
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from_bits)
    }

    /// `value` as exactly `width` bits, most significant first.
    pub fn from_biguint(value: &BigUint, width: usize) -> Result<Self> {
        if value.bits() > width as u64 {
            return Err(Error::domain(format!("value {value} does not fit in {width} bits")));
        }
        let bits = (0..width).rev().map(|i| value.bit(i as u64)).collect();
        Ok(BitString { bits })
    }

    pub fn from_u128(value: u128, width: usize) -> Self {
        debug_assert!(width >= 128 || value >> width == 0);
        BitString { bits: (0..width).rev().map(|i| i < 128 && value >> i & 1 == 1).collect() }
    }

    /// Unsigned value, most significant bit first.
    pub fn to_biguint(&self) -> BigUint {
        let mut v = BigUint::zero();
        for (i, &b) in self.bits.iter().rev().enumerate() {
            if b {
                v.set_bit(i as u64, true);
            }
        }
        v
    }

    pub fn to_u128(&self) -> u128 {
        assert!(self.bits.len() <= 128, "bit string too long for u128");
        self.bits.iter().fold(0u128, |acc, &b| acc << 1 | u128::from(b))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// 1-based indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 1).collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Splits into `block`-bit pieces, zero-padding the last one.
    pub fn padded_blocks(&self, block: usize) -> Vec<BitString> {
        assert!(block > 0, "block size must be positive");
        self.bits
            .chunks(block)
            .map(|c| {
                let mut bits = c.to_vec();
                bits.resize(block, false);
                BitString { bits }
            })
            .collect()
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString { bits: iter.into_iter().collect() }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn msb_first_bytes() {
        let b = BitString::from_bytes(&[0b1000_0001, 0xF0]);
        assert_eq!(b.to_string(), "1000000111110000");
        let mut short = BitString::parse("101").unwrap();
        assert_eq!(short.to_bytes(), vec![0b1010_0000]);
        short.push(true);
        assert_eq!(short.weight(), 3);
        assert_eq!(short.support(), vec![1, 3, 4]);
        assert!(BitString::parse("10a").is_err());
    }

    #[test]
    fn padding_blocks() {
        let b = BitString::parse("11011").unwrap();
        let blocks = b.padded_blocks(2);
        assert_eq!(blocks.iter().map(|x| x.to_string()).collect::<Vec<_>>(), vec!["11", "01", "10"]);
    }

    #[test]
    fn integer_views() {
        let b = BitString::parse("0110").unwrap();
        assert_eq!(b.to_u128(), 6);
        assert_eq!(b.to_biguint(), BigUint::from(6u8));
        assert_eq!(BitString::from_u128(6, 4), b);
        assert_eq!(BitString::from_biguint(&BigUint::from(6u8), 4).unwrap(), b);
        assert!(BitString::from_biguint(&BigUint::from(16u8), 4).is_err());
    }

    proptest! {
        #[test]
        fn bytes_roundtrip(bytes in prop::collection::vec(any::<u8>(), 0..64)) {
            prop_assert_eq!(BitString::from_bytes(&bytes).to_bytes(), bytes);
        }

        #[test]
        fn biguint_roundtrip(bits in prop::collection::vec(any::<bool>(), 0..300)) {
            let b = BitString::from_bits(bits);
            prop_assert_eq!(BitString::from_biguint(&b.to_biguint(), b.len()).unwrap(), b);
        }
    }
}

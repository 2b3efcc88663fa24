//! Machine model for cyclic synthesis.
//!
//! The machine offers the symbols of a fixed supersequence one per cycle and
//! every oligo grows by at most one symbol per cycle, so an oligo can be
//! produced in `C` cycles exactly when it is a subsequence of the first `C`
//! offered symbols. The canonical supersequence is the alternating sequence
//! `A_q = 1 2 .. q 1 2 .. q ..`; multi-alphabet programs concatenate prefixes
//! of several alternating sequences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 1-based symbol value.
pub type Symbol = u32;

/// The alphabet `{1, 2, .., q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Alphabet(u32);

impl Alphabet {
    pub fn new(q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("alphabet size must be at least 1"));
        }
        Ok(Alphabet(q))
    }

    #[inline]
    pub fn size(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn contains(self, symbol: Symbol) -> bool {
        (1..=self.0).contains(&symbol)
    }

    /// Symbol offered at 0-based `cycle` of the alternating sequence.
    #[inline]
    pub fn alternating_symbol(self, cycle: u64) -> Symbol {
        (cycle % self.0 as u64) as Symbol + 1
    }

    /// Number of cycles from offering `from` to the next offer of `to` (1..=q).
    #[inline]
    pub fn gap(self, from: Symbol, to: Symbol) -> u64 {
        let q = self.0 as i64;
        ((to as i64 - from as i64 - 1).rem_euclid(q) + 1) as u64
    }
}

impl TryFrom<u32> for Alphabet {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        Alphabet::new(q)
    }
}

impl From<Alphabet> for u32 {
    fn from(a: Alphabet) -> u32 {
        a.0
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Σ_{}", self.0)
    }
}

/// A synthesized strand: a finite string over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Oligo {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
}

impl Oligo {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(Error::InvalidSymbol { symbol: bad, q: alphabet.size() });
        }
        Ok(Oligo { alphabet, symbols })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Oligo { alphabet, symbols: Vec::new() }
    }

    /// Parses comma-separated decimal symbols, e.g. `"1,3,2"`. Empty text is the empty oligo.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Oligo::empty(alphabet));
        }
        let symbols = text
            .split(',')
            .map(|tok| {
                Symbol::from_str(tok.trim())
                    .map_err(|_| Error::CorruptBlock(format!("bad symbol token {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Oligo::new(alphabet, symbols)
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    /// Letter view for quaternary oligos (1→A, 2→C, 3→G, 4→T).
    pub fn to_dna(&self) -> Result<String> {
        if self.alphabet.size() != 4 {
            return Err(Error::domain("the DNA letter view requires q = 4"));
        }
        Ok(self.symbols.iter().map(|&s| b"ACGT"[s as usize - 1] as char).collect())
    }
}

impl fmt::Display for Oligo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// One `A_q[C]` block of a machine program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub alphabet: Alphabet,
    pub cycles: u64,
}

/// The machine program `A_{q_1}[C_1] ∘ A_{q_2}[C_2] ∘ ..`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u32, u64)>", into = "Vec<(u32, u64)>")]
pub struct SupersequenceSpec {
    segments: Vec<Segment>,
}

impl SupersequenceSpec {
    pub fn new(segments: Vec<Segment>) -> Self {
        SupersequenceSpec { segments }
    }

    /// The single-segment program `A_q[C]`.
    pub fn alternating(alphabet: Alphabet, cycles: u64) -> Self {
        SupersequenceSpec { segments: vec![Segment { alphabet, cycles }] }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_cycles(&self) -> u64 {
        self.segments.iter().map(|s| s.cycles).sum()
    }

    /// Largest alphabet appearing in any segment.
    pub fn max_alphabet(&self) -> Option<Alphabet> {
        self.segments.iter().map(|s| s.alphabet).max()
    }

    /// Offered symbols in cycle order.
    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.segments
            .iter()
            .flat_map(|seg| (0..seg.cycles).map(move |c| seg.alphabet.alternating_symbol(c)))
    }

    pub fn materialize(&self) -> Vec<Symbol> {
        self.iter().collect()
    }
}

impl TryFrom<Vec<(u32, u64)>> for SupersequenceSpec {
    type Error = Error;

    fn try_from(raw: Vec<(u32, u64)>) -> Result<Self> {
        let segments = raw
            .into_iter()
            .map(|(q, cycles)| Ok(Segment { alphabet: Alphabet::new(q)?, cycles }))
            .collect::<Result<Vec<_>>>()?;
        Ok(SupersequenceSpec { segments })
    }
}

impl From<SupersequenceSpec> for Vec<(u32, u64)> {
    fn from(spec: SupersequenceSpec) -> Self {
        spec.segments.iter().map(|s| (s.alphabet.size(), s.cycles)).collect()
    }
}

/// Length-`cycles` prefix of the alternating sequence over `alphabet`.
pub fn alternating_prefix(alphabet: Alphabet, cycles: u64) -> Vec<Symbol> {
    (0..cycles).map(|c| alphabet.alternating_symbol(c)).collect()
}

/// Fewest cycles of `A_q` needed to synthesize `oligo`.
///
/// The first symbol costs its own value, every later symbol costs the cyclic
/// gap from its predecessor.
pub fn synthesis_cycles(oligo: &Oligo) -> u64 {
    let q = oligo.alphabet();
    let mut iter = oligo.symbols().iter();
    let Some(&first) = iter.next() else {
        return 0;
    };
    let mut prev = first;
    let mut total = first as u64;
    for &s in iter {
        total += q.gap(prev, s);
        prev = s;
    }
    total
}

/// Shortest prefix of `spec` containing `symbols` as a subsequence, by greedy
/// leftmost matching. `None` if the whole program does not contain it.
pub fn min_cycles_under(spec: &SupersequenceSpec, symbols: &[Symbol]) -> Option<u64> {
    let mut consumed = 0u64; // cycles fully used before the current segment
    let mut seg_idx = 0usize;
    let mut offset = 0u64; // next unused cycle inside the current segment
    let mut last_match = 0u64;

    'symbols: for &target in symbols {
        while seg_idx < spec.segments.len() {
            let seg = spec.segments[seg_idx];
            if offset < seg.cycles && seg.alphabet.contains(target) {
                let q = seg.alphabet.size() as u64;
                let current = offset % q; // 0-based symbol offered at `offset`
                let wait = (target as u64 - 1 + q - current) % q;
                if offset + wait < seg.cycles {
                    offset += wait + 1;
                    last_match = consumed + offset;
                    continue 'symbols;
                }
            }
            consumed += seg.cycles;
            seg_idx += 1;
            offset = 0;
        }
        return None;
    }
    Some(last_match)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(q: u32) -> Alphabet {
        Alphabet::new(q).unwrap()
    }

    fn oligo(q: u32, s: &[u32]) -> Oligo {
        Oligo::new(alpha(q), s.to_vec()).unwrap()
    }

    fn is_subsequence(needle: &[u32], hay: &[u32]) -> bool {
        let mut it = hay.iter();
        needle.iter().all(|n| it.any(|h| h == n))
    }

    #[test]
    fn alternating_prefix_examples() {
        assert_eq!(alternating_prefix(alpha(3), 7), vec![1, 2, 3, 1, 2, 3, 1]);
        assert_eq!(alternating_prefix(alpha(1), 4), vec![1, 1, 1, 1]);
        assert_eq!(alternating_prefix(alpha(4), 4), vec![1, 2, 3, 4]);
        assert!(alternating_prefix(alpha(4), 0).is_empty());
    }

    #[test]
    fn materialize_examples() {
        let spec = SupersequenceSpec::try_from(vec![(2, 3), (3, 3)]).unwrap();
        assert_eq!(spec.materialize(), vec![1, 2, 1, 1, 2, 3]);
        assert_eq!(spec.total_cycles(), 6);
        let spec = SupersequenceSpec::alternating(alpha(4), 8);
        assert_eq!(spec.materialize(), vec![1, 2, 3, 4, 1, 2, 3, 4]);
        assert!(SupersequenceSpec::default().materialize().is_empty());
    }

    #[test]
    fn synthesis_cycles_examples() {
        assert_eq!(synthesis_cycles(&oligo(4, &[1, 2, 3, 4])), 4);
        assert_eq!(synthesis_cycles(&oligo(4, &[4, 3, 2, 1])), 13);
        assert_eq!(synthesis_cycles(&oligo(2, &[1, 1])), 3);
        assert_eq!(synthesis_cycles(&Oligo::empty(alpha(3))), 0);
    }

    #[test]
    fn invalid_symbols_rejected() {
        assert_eq!(
            Oligo::new(alpha(3), vec![1, 4]),
            Err(Error::InvalidSymbol { symbol: 4, q: 3 })
        );
        assert!(Oligo::new(alpha(3), vec![0]).is_err());
        assert!(Alphabet::new(0).is_err());
    }

    #[test]
    fn min_cycles_examples() {
        let spec = SupersequenceSpec::alternating(alpha(4), 16);
        assert_eq!(min_cycles_under(&spec, &[4, 3, 2, 1]), Some(13));
        let spec = SupersequenceSpec::alternating(alpha(2), 2);
        assert_eq!(min_cycles_under(&spec, &[2, 2]), None);
        assert_eq!(min_cycles_under(&spec, &[]), Some(0));
    }

    #[test]
    fn min_cycles_multi_segment() {
        // 1,2,1 | 1,2,3
        let spec = SupersequenceSpec::try_from(vec![(2, 3), (3, 3)]).unwrap();
        assert_eq!(min_cycles_under(&spec, &[2, 3]), Some(6));
        assert_eq!(min_cycles_under(&spec, &[1, 1, 1]), Some(4));
        assert_eq!(min_cycles_under(&spec, &[3, 1]), None);
        assert_eq!(min_cycles_under(&spec, &[2, 2, 3]), Some(6));
        // zero-length segments are skipped
        let spec = SupersequenceSpec::try_from(vec![(4, 0), (2, 2)]).unwrap();
        assert_eq!(min_cycles_under(&spec, &[2]), Some(2));
    }

    /// Exhaustive: every oligo over Σ_q with q <= 4 and length <= 6 embeds in
    /// A_q[C] exactly when C >= synthesis_cycles.
    #[test]
    fn cycles_threshold_exhaustive() {
        for q in 1..=4u32 {
            let max_cycles = 6 * q as u64;
            let hay = alternating_prefix(alpha(q), max_cycles);
            for len in 0..=6u32 {
                for code in 0..(q as u64).pow(len) {
                    let mut c = code;
                    let s: Vec<u32> = (0..len)
                        .map(|_| {
                            let d = (c % q as u64) as u32 + 1;
                            c /= q as u64;
                            d
                        })
                        .collect();
                    let need = synthesis_cycles(&oligo(q, &s));
                    assert!(need <= max_cycles);
                    assert!(is_subsequence(&s, &hay[..need as usize]));
                    if need > 0 {
                        assert!(!is_subsequence(&s, &hay[..need as usize - 1]));
                    }
                    let spec = SupersequenceSpec::alternating(alpha(q), max_cycles);
                    assert_eq!(min_cycles_under(&spec, &s), Some(need));
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn oligo_strategy() -> impl Strategy<Value = (u32, Vec<u32>)> {
            (1u32..=9).prop_flat_map(|q| (Just(q), prop::collection::vec(1..=q, 0..40)))
        }

        proptest! {
            #[test]
            fn greedy_matches_closed_form((q, s) in oligo_strategy()) {
                let o = oligo(q, &s);
                let spec = SupersequenceSpec::alternating(alpha(q), q as u64 * (s.len() as u64 + 1));
                prop_assert_eq!(min_cycles_under(&spec, &s), Some(synthesis_cycles(&o)));
            }

            #[test]
            fn appending_costs_at_least_one((q, s) in oligo_strategy(), x in 1u32..=9) {
                let x = (x - 1) % q + 1;
                let base = synthesis_cycles(&oligo(q, &s));
                let mut longer = s.clone();
                longer.push(x);
                prop_assert!(synthesis_cycles(&oligo(q, &longer)) > base);
            }
        }
    }
}

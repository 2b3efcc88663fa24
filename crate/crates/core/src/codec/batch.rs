use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{min_cycles_under, Alphabet, Oligo, SupersequenceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Lookup,
    Base,
    Multisize,
    Balanced,
    Window,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::Lookup, Scheme::Base, Scheme::Multisize, Scheme::Balanced, Scheme::Window];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Lookup => "lookup",
            Scheme::Base => "base",
            Scheme::Multisize => "multisize",
            Scheme::Balanced => "balanced",
            Scheme::Window => "window",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown scheme {s:?}")))
    }
}

/// Block geometry needed to invert a batch.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BlockLayout {
    /// Payload bits carried per block.
    pub block_bits: u64,
    /// Per-part oligo lengths for the segmented schemes (base, multisize).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub segment_lengths: Vec<usize>,
}

/// Encoder output: oligos plus the machine program that synthesizes them.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedBatch {
    pub scheme: Scheme,
    pub q: u32,
    pub rho: f64,
    /// True payload length before block padding.
    pub payload_bits: u64,
    pub spec: SupersequenceSpec,
    pub oligos: Vec<Oligo>,
    pub layout: BlockLayout,
}

#[derive(Serialize, Deserialize)]
struct BatchRecord {
    scheme: Scheme,
    q: u32,
    rho: f64,
    payload_bits: u64,
    spec: SupersequenceSpec,
    oligos: Vec<String>,
    #[serde(default)]
    layout: BlockLayout,
}

impl EncodedBatch {
    /// Every oligo fits within the program's total cycles.
    pub fn fits_cycle_budget(&self) -> bool {
        let total = self.spec.total_cycles();
        self.oligos
            .iter()
            .all(|o| min_cycles_under(&self.spec, o.symbols()).is_some_and(|c| c <= total))
    }

    pub fn symbol_count(&self) -> usize {
        self.oligos.iter().map(Oligo::len).sum()
    }

    fn record(&self) -> BatchRecord {
        BatchRecord {
            scheme: self.scheme,
            q: self.q,
            rho: self.rho,
            payload_bits: self.payload_bits,
            spec: self.spec.clone(),
            oligos: self.oligos.iter().map(Oligo::to_string).collect(),
            layout: self.layout.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("batch serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.record()).expect("batch serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: BatchRecord =
            serde_json::from_str(text).map_err(|e| Error::CorruptStream(format!("invalid batch JSON: {e}")))?;
        let alphabet = match rec.spec.max_alphabet() {
            Some(a) => a,
            None => Alphabet::new(rec.q).map_err(|e| Error::CorruptStream(e.to_string()))?,
        };
        let oligos = rec
            .oligos
            .iter()
            .map(|s| Oligo::parse(alphabet, s).map_err(|e| Error::CorruptStream(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(EncodedBatch {
            scheme: rec.scheme,
            q: rec.q,
            rho: rec.rho,
            payload_bits: rec.payload_bits,
            spec: rec.spec,
            oligos,
            layout: rec.layout,
        })
    }
}

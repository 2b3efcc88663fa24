//! Cycle-complexity toolkit for cyclic (photolithographic) DNA synthesis.
//!
//! * [`sequence`]: the machine model, alternating supersequences and per-oligo cycle cost.
//! * [`counting`]: exact distinct-subsequence counts and rank/unrank coding.
//! * [`capacity`]: fixed- and flexible-length capacity.
//! * [`codec`]: lookup, single-redundancy, multi-size, balanced and window encoders.
//! * [`cost`]: synthesis cost model and its optimization over ρ and q.
//! * [`sweep`]: tabular data behind capacity, rate, ρ* and cost curves.

pub mod capacity;
pub mod codec;
pub mod cost;
pub mod counting;
pub mod error;
pub mod sequence;
pub mod sweep;

pub use error::{Error, Result};
pub use sequence::{Alphabet, Oligo, Segment, SupersequenceSpec, Symbol};

//! Single-redundancy encoder: `L − 1` information symbols to a length-`L`
//! oligo that `A_q` synthesizes within `⌊(q+1)L/2⌋` cycles.
//!
//! Each information symbol is read as the cycle gap to the next output
//! symbol. If the gaps sum to more than half of `(q+1)(L−1)`, every gap `g`
//! is replaced by `q + 1 − g`. The leading symbol flags the choice: `1` for
//! plain gaps, `2` for complemented ones.

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Oligo, Symbol};

const PLAIN: Symbol = 1;
const COMPLEMENTED: Symbol = 2;

/// `⌊(q+1)·L/2⌋`.
pub fn base_cycle_budget(q: u32, length: usize) -> u64 {
    (q as u64 + 1) * length as u64 / 2
}

pub fn base_encode(alphabet: Alphabet, info: &[Symbol]) -> Result<Oligo> {
    let q = alphabet.size();
    if q < 2 {
        return Err(Error::domain("the single-redundancy encoder needs q >= 2"));
    }
    if let Some(&bad) = info.iter().find(|&&s| !alphabet.contains(s)) {
        return Err(Error::InvalidSymbol { symbol: bad, q });
    }
    let gap_sum: u64 = info.iter().map(|&s| s as u64).sum();
    let flip = 2 * gap_sum > (q as u64 + 1) * info.len() as u64;

    let mut out = Vec::with_capacity(info.len() + 1);
    let mut cur = if flip { COMPLEMENTED } else { PLAIN };
    out.push(cur);
    for &g in info {
        let g = if flip { q + 1 - g } else { g };
        cur = (cur - 1 + g) % q + 1;
        out.push(cur);
    }
    Oligo::new(alphabet, out)
}

pub fn base_decode(oligo: &Oligo) -> Result<Vec<Symbol>> {
    let alphabet = oligo.alphabet();
    let q = alphabet.size();
    let symbols = oligo.symbols();
    let (&flag, rest) = symbols
        .split_first()
        .ok_or_else(|| Error::CorruptBlock("empty single-redundancy block".into()))?;
    let flip = match flag {
        PLAIN => false,
        COMPLEMENTED => true,
        other => return Err(Error::CorruptBlock(format!("invalid redundancy symbol {other}"))),
    };
    let mut prev = flag;
    let mut info = Vec::with_capacity(rest.len());
    for &s in rest {
        let g = alphabet.gap(prev, s) as Symbol;
        info.push(if flip { q + 1 - g } else { g });
        prev = s;
    }
    let gap_sum: u64 = info.iter().map(|&s| s as u64).sum();
    if (2 * gap_sum > (q as u64 + 1) * info.len() as u64) != flip {
        return Err(Error::CorruptBlock("redundancy symbol disagrees with gap sum".into()));
    }
    Ok(info)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::synthesis_cycles;

    fn all_words(q: u32, len: usize) -> impl Iterator<Item = Vec<Symbol>> {
        (0..(q as u64).pow(len as u32)).map(move |mut c| {
            (0..len)
                .map(|_| {
                    let d = (c % q as u64) as Symbol + 1;
                    c /= q as u64;
                    d
                })
                .collect()
        })
    }

    #[test]
    fn worked_example() {
        let a3 = Alphabet::new(3).unwrap();
        let o = base_encode(a3, &[3, 3]).unwrap();
        assert_eq!(o.symbols(), &[2, 3, 1]);
        assert_eq!(synthesis_cycles(&o), 4);
        assert!(synthesis_cycles(&o) <= base_cycle_budget(3, 3));
        assert_eq!(base_decode(&o).unwrap(), vec![3, 3]);
    }

    #[test]
    fn budget_exhaustive_sigma3_cubed() {
        let a3 = Alphabet::new(3).unwrap();
        let mut n = 0;
        for u in all_words(3, 3) {
            let o = base_encode(a3, &u).unwrap();
            assert!(synthesis_cycles(&o) <= base_cycle_budget(3, 4), "{u:?}");
            n += 1;
        }
        assert_eq!(n, 27);
    }

    #[test]
    fn roundtrip_exhaustive_q4_l4() {
        let a4 = Alphabet::new(4).unwrap();
        let mut outputs = std::collections::HashSet::new();
        for u in all_words(4, 4) {
            let o = base_encode(a4, &u).unwrap();
            assert_eq!(base_decode(&o).unwrap(), u);
            assert!(outputs.insert(o));
        }
        assert_eq!(outputs.len(), 256);
    }

    #[test]
    fn budget_exhaustive_small() {
        for q in 2..=4u32 {
            let a = Alphabet::new(q).unwrap();
            for l in 1..=5usize {
                for u in all_words(q, l - 1) {
                    let o = base_encode(a, &u).unwrap();
                    assert_eq!(o.len(), l);
                    assert!(synthesis_cycles(&o) <= base_cycle_budget(q, l), "q={q} u={u:?}");
                    assert_eq!(base_decode(&o).unwrap(), u);
                }
            }
        }
    }

    #[test]
    fn errors() {
        let a3 = Alphabet::new(3).unwrap();
        assert!(matches!(base_encode(a3, &[4]), Err(Error::InvalidSymbol { .. })));
        assert!(base_encode(Alphabet::new(1).unwrap(), &[1]).is_err());
        assert!(base_decode(&Oligo::new(a3, vec![3, 1]).unwrap()).unwrap_err().is_corruption());
        assert!(base_decode(&Oligo::empty(a3)).unwrap_err().is_corruption());
        // flag says plain but gaps exceed half the budget
        assert!(base_decode(&Oligo::new(a3, vec![1, 1, 1]).unwrap()).unwrap_err().is_corruption());
    }
}

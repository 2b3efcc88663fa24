//! Capacity of cyclic synthesis under the alternating supersequence.
//!
//! For fixed oligo length `L = ρC` the capacity is
//!
//! ```text
//! cap(q, ρ) = ρ·log2(q)                          for 0 <= ρ <= 2/(q+1)
//!           = ρ·log2(Σ_{i=1..q} x^(i − 1/ρ))     for 2/(q+1) < ρ < 1
//! ```
//!
//! where `x = x_q(ρ)` is the root in (0, 1) of `Σ_{i=1..q} (1 − ρi)·x^i`.
//! With flexible length, `cap(q) = −log2(x_q)` for the root of `Σ x^i = 1`.
//!
//! The closed form is used for every real ρ in [0, 1], not only the rational
//! ρ for which the entropy limit is proved.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::counting::subsequence_count;
use crate::error::{Error, Result};

/// Bisection bracket edge away from the open interval's endpoints.
const BRACKET_EPS: f64 = 1e-12;
/// Absolute tolerance on bisection roots.
const ROOT_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityKind {
    ClosedForm,
    Flexible,
    Empirical,
}

/// Bits per synthesis cycle at `(q, ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityPoint {
    pub q: u32,
    /// `None` for flexible-length capacity.
    pub rho: Option<f64>,
    pub value: f64,
    pub kind: CapacityKind,
}

impl CapacityPoint {
    pub fn closed_form(q: u32, rho: f64) -> Result<Self> {
        Ok(CapacityPoint { q, rho: Some(rho), value: cap_fixed_length(q, rho)?, kind: CapacityKind::ClosedForm })
    }

    pub fn flexible(q: u32) -> Result<Self> {
        Ok(CapacityPoint { q, rho: None, value: cap_flexible(q)?, kind: CapacityKind::Flexible })
    }

    pub fn empirical(q: u32, cycles: u64, rho: f64) -> Result<Self> {
        Ok(CapacityPoint { q, rho: Some(rho), value: empirical_cap(q, cycles, rho)?, kind: CapacityKind::Empirical })
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain(format!("rho = {rho} is outside [0, 1]")));
    }
    Ok(())
}

/// `H(ρ) = −ρ log2 ρ − (1−ρ) log2 (1−ρ)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(entropy_unchecked(rho))
}

#[inline]
pub(crate) fn entropy_unchecked(rho: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(rho) + term(1.0 - rho)
}

/// Bisection for a root of `f` on `[lo, hi]` given `f(lo) > 0 > f(hi)`.
pub(crate) fn bisect_decreasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v > 0.0 {
            lo = mid;
        } else if v < 0.0 {
            hi = mid;
        } else {
            return mid;
        }
    }
    // the endpoint with the smaller residual
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// `Σ_{i=1..q} (1 − ρi)·x^i`, evaluated by Horner.
pub fn fixed_length_polynomial(q: u32, rho: f64, x: f64) -> f64 {
    let mut acc = 0.0;
    for i in (1..=q).rev() {
        acc = acc * x + (1.0 - rho * i as f64);
    }
    acc * x
}

/// Threshold `2/(q+1)` below which `cap(q, ρ) = ρ log2 q`.
#[inline]
pub fn linear_threshold(q: u32) -> f64 {
    2.0 / (q as f64 + 1.0)
}

/// `x_q(ρ)`: the unique root in (0, 1) of `Σ (1 − ρi)·x^i`.
pub fn root_x_fixed(q: u32, rho: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain("fixed-length root needs q >= 2"));
    }
    let threshold = linear_threshold(q);
    if !(rho > threshold && rho < 1.0) {
        return Err(Error::domain(format!(
            "rho = {rho} is outside ({threshold}, 1); no interior root"
        )));
    }
    let f = |x: f64| fixed_length_polynomial(q, rho, x);
    // f(x) ~ (1 − ρ)x > 0 near 0; f(1) = q − ρq(q+1)/2 < 0 above the threshold.
    // Close to the threshold the root can sit above 1 − ε, so fall back to 1.
    let hi = if f(1.0 - BRACKET_EPS) < 0.0 { 1.0 - BRACKET_EPS } else { 1.0 };
    Ok(bisect_decreasing(f, BRACKET_EPS, hi, ROOT_TOL))
}

/// Fixed-length capacity `cap(q, ρ)` in bits per cycle.
pub fn cap_fixed_length(q: u32, rho: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain("fixed-length capacity needs q >= 2"));
    }
    check_rho(rho)?;
    if rho == 0.0 || rho == 1.0 {
        return Ok(0.0);
    }
    if rho <= linear_threshold(q) {
        return Ok(rho * (q as f64).log2());
    }
    let x = root_x_fixed(q, rho)?;
    let inv = 1.0 / rho;
    let sum: f64 = (1..=q).map(|i| x.powf(i as f64 - inv)).sum();
    Ok(rho * sum.log2())
}

/// `x_q`: the root in (0, 1] of `Σ_{i=1..q} x^i = 1`.
pub fn root_x_flexible(q: u32) -> Result<f64> {
    if q < 1 {
        return Err(Error::domain("alphabet size must be at least 1"));
    }
    if q == 1 {
        return Ok(1.0);
    }
    let f = |x: f64| {
        let mut acc = 0.0;
        for _ in 0..q {
            acc = (acc + 1.0) * x;
        }
        1.0 - acc
    };
    Ok(bisect_decreasing(f, 0.0, 1.0, ROOT_TOL))
}

/// Flexible-length capacity `cap(q) = −log2 x_q`.
pub fn cap_flexible(q: u32) -> Result<f64> {
    let x = root_x_flexible(q)?;
    Ok(if x >= 1.0 { 0.0 } else { -x.log2() })
}

/// `log2` of an arbitrary-precision integer; exact for powers of two.
pub fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (u64::try_from(n).expect("fits in u64") as f64).log2();
    }
    let shift = bits - 64;
    let top = u64::try_from(n >> shift).expect("top 64 bits");
    (top as f64).log2() + shift as f64
}

/// `⌊ρ·C⌋`, tolerant of representation error just below an integer.
pub fn floor_length(rho: f64, cycles: u64) -> u64 {
    let raw = rho * cycles as f64;
    let rounded = raw.round();
    if (raw - rounded).abs() < 1e-9 {
        rounded as u64
    } else {
        raw.floor() as u64
    }
}

/// Finite-`C` estimate `log2 M_q(C, ⌊ρC⌋) / C`.
pub fn empirical_cap(q: u32, cycles: u64, rho: f64) -> Result<f64> {
    if cycles < 1 {
        return Err(Error::domain("empirical capacity needs C >= 1"));
    }
    check_rho(rho)?;
    let count = subsequence_count(q, cycles, floor_length(rho, cycles))?;
    Ok(log2_big(&count) / cycles as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        for i in 1..100 {
            let p = i as f64 / 100.0;
            assert!(close(binary_entropy(p).unwrap(), binary_entropy(1.0 - p).unwrap(), 1e-15));
        }
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn fixed_root_examples() {
        // q = 2 closed form x = (1 − ρ)/(2ρ − 1)
        assert!(close(root_x_fixed(2, 0.8).unwrap(), 1.0 / 3.0, 1e-14));
        assert!(close(root_x_fixed(2, 0.75).unwrap(), 0.5, 1e-14));
        for &rho in &[0.7, 0.9, 0.95] {
            assert!(close(root_x_fixed(2, rho).unwrap(), (1.0 - rho) / (2.0 * rho - 1.0), 1e-14));
        }
        assert!(root_x_fixed(4, 0.4).is_err());
        assert!(root_x_fixed(4, 1.0).is_err());
        assert!(root_x_fixed(1, 0.9).is_err());
    }

    #[test]
    fn fixed_root_residual() {
        for q in 2..=16 {
            for k in 1..20 {
                let lo = linear_threshold(q);
                let rho = lo + (1.0 - lo) * k as f64 / 20.0;
                let x = root_x_fixed(q, rho).unwrap();
                assert!(x > 0.0 && x < 1.0);
                assert!(fixed_length_polynomial(q, rho, x).abs() <= 1e-14, "q={q} rho={rho}");
            }
        }
    }

    #[test]
    fn cap_examples() {
        assert!(close(cap_fixed_length(4, 0.4).unwrap(), 0.8, 1e-12));
        // 50-digit oracle: 0.92614299703761910582
        assert!(close(cap_fixed_length(4, 0.5).unwrap(), 0.926_142_997_037_619_1, 1e-12));
        // 0.8·log2(x^−0.25 + x^0.75) at x = 1/3 = 0.64902249956730629113
        assert!(close(cap_fixed_length(2, 0.8).unwrap(), 0.649_022_499_567_306_3, 1e-12));
        assert_eq!(cap_fixed_length(4, 1.0).unwrap(), 0.0);
        assert_eq!(cap_fixed_length(4, 0.0).unwrap(), 0.0);
        assert!(cap_fixed_length(1, 0.5).is_err());
        assert!(cap_fixed_length(4, 1.5).is_err());
    }

    #[test]
    fn flexible_examples() {
        assert!(close(root_x_flexible(2).unwrap(), 0.618_033_988_749_894_8, 1e-15));
        assert!(close(cap_flexible(2).unwrap(), 0.694_241_913_630_617_3, 1e-12));
        assert_eq!(cap_flexible(1).unwrap(), 0.0);
        for q in 2..=40 {
            let x = root_x_flexible(q).unwrap();
            let s: f64 = (1..=q).map(|i| x.powi(i as i32)).sum();
            assert!(close(s, 1.0, 1e-13));
        }
    }

    #[test]
    fn empirical_examples() {
        assert_eq!(empirical_cap(2, 20, 0.5).unwrap(), 0.5);
        assert_eq!(empirical_cap(3, 12, 1.0).unwrap(), 0.0);
        let e = empirical_cap(4, 200, 0.4).unwrap();
        assert!(close(e, 0.8, 0.02), "{e}");
        for n in 1..=10 {
            assert_eq!(empirical_cap(2, 2 * n, 0.5).unwrap(), 0.5);
        }
        assert!(empirical_cap(2, 0, 0.5).is_err());
    }

    #[test]
    fn floor_length_tolerates_representation_error() {
        assert_eq!(floor_length(0.57, 100), 57);
        assert_eq!(floor_length(0.4, 200), 80);
        assert_eq!(floor_length(0.5, 7), 3);
    }

    #[test]
    fn log2_big_exact_on_powers_of_two() {
        for n in [0u32, 1, 63, 64, 65, 200, 1000] {
            assert_eq!(log2_big(&(BigUint::from(1u8) << n)), n as f64);
        }
        assert!(close(log2_big(&BigUint::from(3u8)), 3f64.log2(), 1e-15));
    }

    #[test]
    fn branches_meet_at_threshold() {
        for q in 2..=32 {
            let t = linear_threshold(q);
            let left = cap_fixed_length(q, t).unwrap();
            let right = cap_fixed_length(q, t + 1e-7).unwrap();
            assert!(close(left, right, 1e-6), "q={q}: {left} vs {right}");
        }
    }

    #[test]
    fn monotone_in_q_and_below_entropy() {
        for k in 1..100 {
            let rho = k as f64 / 100.0;
            let h = entropy_unchecked(rho);
            let mut prev = 0.0;
            for q in 2..=64 {
                let c = cap_fixed_length(q, rho).unwrap();
                assert!(c + 1e-12 >= prev, "q={q} rho={rho}");
                assert!(c <= h + 1e-12, "q={q} rho={rho}");
                prev = c;
            }
        }
        let gaps: Vec<f64> = [4, 8, 16, 32].iter().map(|&q| 1.0 - cap_fixed_length(q, 0.5).unwrap()).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn flexible_dominates_fixed() {
        for q in 2..=32 {
            let flex = cap_flexible(q).unwrap();
            for k in 0..=200 {
                let rho = k as f64 / 200.0;
                assert!(cap_fixed_length(q, rho).unwrap() <= flex + 1e-12);
            }
        }
    }
}

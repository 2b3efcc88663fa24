//! Synthesis cost `cost*(N, C, q, ρ) = αC + βN·ρ/cap(q, ρ)` and its minimization.
//!
//! The minimizing density always lies in `[2/(q+1), ρ*(q)]` where `ρ*` solves
//! `ρ/H(ρ) = 1/log2 q`. Unimodality of `ρ/cap` on that interval is not
//! assumed: the optimizer scans a dense grid before refining locally.

use serde::{Deserialize, Serialize};

use crate::capacity::{bisect_decreasing, cap_fixed_length, entropy_unchecked, linear_threshold};
use crate::error::{Error, Result};

/// Grid points scanned by [`minimize_rho`].
pub const GRID_POINTS: usize = 10_001;

const TERNARY_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    /// Cost per synthesis cycle.
    pub alpha: f64,
    /// Cost per synthesized symbol.
    pub beta: f64,
    /// Information bits `N`.
    pub bits: u64,
    /// Cycles per oligo `C`.
    pub cycles: u64,
}

impl CostParams {
    pub fn new(alpha: f64, beta: f64, bits: u64, cycles: u64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::domain(format!("beta must be non-negative, got {beta}")));
        }
        if bits < 1 || cycles < 1 {
            return Err(Error::domain("bits and cycles must be at least 1"));
        }
        Ok(CostParams { alpha, beta, bits, cycles })
    }

    /// `αC`, the cost floor.
    pub fn cycle_cost(&self) -> f64 {
        self.alpha * self.cycles as f64
    }
}

/// Minimizer of the cost over ρ for a fixed `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostOptimum {
    pub q: u32,
    pub rho: f64,
    pub cost: f64,
    /// `ρ/cap(q, ρ)` at the minimizer.
    pub ratio: f64,
}

/// `ρ / cap(q, ρ)`, symbols synthesized per information bit.
pub fn symbols_per_bit(q: u32, rho: f64) -> Result<f64> {
    let cap = cap_fixed_length(q, rho)?;
    if rho <= 0.0 || rho >= 1.0 || cap <= 0.0 {
        return Err(Error::domain(format!("cap({q}, {rho}) = 0; cost is undefined")));
    }
    Ok(rho / cap)
}

pub fn cost_star(params: &CostParams, q: u32, rho: f64) -> Result<f64> {
    let ratio = symbols_per_bit(q, rho)?;
    Ok(params.cycle_cost() + params.beta * params.bits as f64 * ratio)
}

/// `ρ/H(ρ)` on (0, 1).
pub fn rho_over_entropy(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("rho = {rho} is outside (0, 1)")));
    }
    Ok(rho / entropy_unchecked(rho))
}

/// Root of `ρ/H(ρ) = 1/log2 q`.
pub fn rho_star(q: u32) -> Result<f64> {
    if q < 2 {
        return Err(Error::domain("rho_star needs q >= 2"));
    }
    let target = 1.0 / (q as f64).log2();
    let g = |rho: f64| target - rho / entropy_unchecked(rho);
    Ok(bisect_decreasing(g, 1e-300, 1.0 - 1e-16, 1e-16))
}

/// `[2/(q+1), ρ*(q)]`, the interval containing every cost-optimal ρ.
pub fn interval_of_interest(q: u32) -> Result<(f64, f64)> {
    Ok((linear_threshold(q), rho_star(q)?))
}

/// Minimizes `cost*` over ρ in `[2/(q+1), ρ*(q)]`; ties go to the smaller ρ.
pub fn minimize_rho(params: &CostParams, q: u32) -> Result<CostOptimum> {
    let (lo, hi) = interval_of_interest(q)?;
    let ratio = |rho: f64| symbols_per_bit(q, rho);

    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let point = |i: usize| if i == GRID_POINTS - 1 { hi } else { lo + step * i as f64 };
    let mut best_i = 0;
    let mut best = ratio(lo)?;
    for i in 1..GRID_POINTS {
        let v = ratio(point(i))?;
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let mut best_rho = point(best_i);

    let (mut a, mut b) = (point(best_i.saturating_sub(1)), point((best_i + 1).min(GRID_POINTS - 1)));
    for _ in 0..TERNARY_STEPS {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if ratio(m1)? <= ratio(m2)? {
            b = m2;
        } else {
            a = m1;
        }
    }
    let refined = 0.5 * (a + b);
    let v = ratio(refined)?;
    if v < best || (v == best && refined < best_rho) {
        best = v;
        best_rho = refined;
    }
    Ok(CostOptimum {
        q,
        rho: best_rho,
        cost: params.cycle_cost() + params.beta * params.bits as f64 * best,
        ratio: best,
    })
}

/// Best `(q, ρ)` with `q <= max_q`. Cost strictly decreases in `q`, so this
/// is `q = max_q`.
pub fn minimize_with_alphabet_bound(params: &CostParams, max_q: u32) -> Result<CostOptimum> {
    if max_q < 2 {
        return Err(Error::domain("the alphabet bound must be at least 2"));
    }
    minimize_rho(params, max_q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::binary_entropy;
    use proptest::prelude::*;

    fn unit() -> CostParams {
        CostParams::new(1.0, 1.0, 100, 50).unwrap()
    }

    #[test]
    fn plug_in_example() {
        assert!((cost_star(&unit(), 4, 0.4).unwrap() - 100.0).abs() < 1e-12);
        let free = CostParams::new(3.0, 0.0, 10, 7).unwrap();
        for (q, rho) in [(2, 0.3), (4, 0.45), (9, 0.9)] {
            assert_eq!(cost_star(&free, q, rho).unwrap(), 21.0);
        }
        assert!(cost_star(&unit(), 4, 0.0).is_err());
        assert!(cost_star(&unit(), 4, 1.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(CostParams::new(0.0, 1.0, 1, 1).is_err());
        assert!(CostParams::new(1.0, -1.0, 1, 1).is_err());
        assert!(CostParams::new(1.0, 1.0, 0, 1).is_err());
        assert!(CostParams::new(1.0, 1.0, 1, 0).is_err());
        assert!(CostParams::new(1.0, f64::NAN, 1, 1).is_err());
    }

    #[test]
    fn rho_star_values() {
        assert!((rho_star(4).unwrap() - 0.5).abs() < 1e-9);
        assert!((rho_star(2).unwrap() - 0.772907804780652).abs() < 1e-12);
        assert!((rho_star(3).unwrap() - 0.609089767923819).abs() < 1e-12);
        assert!((rho_star(8).unwrap() - 0.289250264292641).abs() < 1e-12);
        // fixed point H(ρ) = ρ for q = 2
        let r = rho_star(2).unwrap();
        assert!((binary_entropy(r).unwrap() - r).abs() < 1e-12);
        assert!(rho_star(1).is_err());
    }

    #[test]
    fn rho_star_residual_and_order() {
        let mut prev = f64::INFINITY;
        for q in 2..=64u32 {
            let r = rho_star(q).unwrap();
            let residual = rho_over_entropy(r).unwrap() - 1.0 / (q as f64).log2();
            assert!(residual.abs() <= 1e-12, "q={q} residual={residual}");
            assert!(r < prev);
            assert!(r > linear_threshold(q));
            prev = r;
        }
    }

    #[test]
    fn plateau_below_threshold() {
        let p = CostParams::new(2.0, 0.5, 1000, 80).unwrap();
        for q in [2u32, 4, 7, 16] {
            let expected = 160.0 + 500.0 / (q as f64).log2();
            let t = linear_threshold(q);
            for k in 1..=50 {
                let rho = t * k as f64 / 50.0;
                assert!((cost_star(&p, q, rho).unwrap() - expected).abs() < 1e-12 * expected);
            }
        }
    }

    #[test]
    fn minimizer_in_interval_and_at_threshold() {
        for q in 2..=16u32 {
            let p = unit();
            let opt = minimize_rho(&p, q).unwrap();
            let (lo, hi) = (linear_threshold(q), rho_star(q).unwrap());
            assert!(opt.rho >= lo && opt.rho <= hi);
            assert!(opt.cost <= cost_star(&p, q, lo).unwrap());
            assert!(opt.cost <= cost_star(&p, q, hi).unwrap());
            assert!((opt.rho - lo).abs() < 1e-8, "q={q} rho={}", opt.rho);
            assert!((opt.ratio - 1.0 / (q as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn cost_argmin_matches_ratio_argmin() {
        let p = CostParams::new(1.5, 2.0, 4096, 300).unwrap();
        for q in [2u32, 3, 5, 8] {
            let grid: Vec<f64> = (1..400).map(|i| i as f64 / 400.0).collect();
            let argmin = |f: &dyn Fn(f64) -> f64| {
                let mut best = 0;
                for i in 1..grid.len() {
                    if f(grid[i]) < f(grid[best]) {
                        best = i;
                    }
                }
                best
            };
            let by_cost = argmin(&|r| cost_star(&p, q, r).unwrap());
            let by_ratio = argmin(&|r| symbols_per_bit(q, r).unwrap());
            assert_eq!(by_cost, by_ratio);
        }
    }

    #[test]
    fn claim_strict_decrease_in_q() {
        let p = unit();
        for q in 2..=8u32 {
            let a = minimize_rho(&p, q).unwrap().cost;
            let b = minimize_rho(&p, q + 1).unwrap().cost;
            assert!(a > b, "q={q}: {a} <= {b}");
        }
    }

    #[test]
    fn alphabet_bound() {
        let p = CostParams::new(1.0, 1.0, 1000, 100).unwrap();
        let opt = minimize_with_alphabet_bound(&p, 256).unwrap();
        assert_eq!(opt.q, 256);
        assert!(opt.cost - p.cycle_cost() <= 0.15 * 1000.0);
        let free = CostParams::new(1.0, 0.0, 1000, 100).unwrap();
        assert_eq!(minimize_with_alphabet_bound(&free, 5).unwrap().cost, 100.0);
        assert!(minimize_with_alphabet_bound(&p, 1).is_err());
    }

    #[test]
    fn rho_over_entropy_limits() {
        let vals: Vec<f64> = [1e-1, 1e-3, 1e-6].iter().map(|&r| rho_over_entropy(r).unwrap()).collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2] && vals[2] > 0.0);
        let mut prev = 0.0;
        for i in 1..1000 {
            let v = rho_over_entropy(i as f64 / 1000.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    proptest! {
        #[test]
        fn ratio_dominates_entropy_bound(q in 2u32..40, rho in 0.001f64..0.999) {
            prop_assert!(symbols_per_bit(q, rho).unwrap() >= rho_over_entropy(rho).unwrap() - 1e-12);
        }
    }
}

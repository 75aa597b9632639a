use super::basic_range_fpr;
use crate::error::{Error, Result};

const GAMMA_GRID: usize = 4001;

/// Lower bound on the bits needed by any range filter with FPR `eps` for
/// ranges up to `r`, maximized over γ > 1 on a log-spaced grid of γ − 1.
pub fn lower_bound_space(n: f64, eps: f64, r: f64, d: u32) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::arg(format!("ε = {eps} outside (0, 1)")));
    }
    let slack = 1.0 - 4.0 * n * r / 2f64.powi(d as i32);
    if slack <= 0.0 {
        return Err(Error::arg(format!("4nR ≥ 2^{d}: domain too small for the bound")));
    }
    let best = (0..GAMMA_GRID)
        .map(|i| {
            let u = -6.0 + 12.0 * i as f64 / (GAMMA_GRID - 1) as f64;
            lower_bound_at(n, eps, r, slack, 1.0 + 10f64.powf(u))
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(best)
}

pub(crate) fn lower_bound_at(n: f64, eps: f64, r: f64, slack: f64, gamma: f64) -> f64 {
    let e = std::f64::consts::E;
    n * ((1.0 - gamma * eps) * r.log2() - eps.log2()) + n * (slack * (1.0 - 1.0 / gamma) / e).log2()
}

/// Rosetta first-cut space: log2(e)·n·log2(R/ε).
pub fn rosetta_firstcut_space(n: f64, eps: f64, r: f64) -> f64 {
    std::f64::consts::LOG2_E * n * (r / eps).log2()
}

/// Smallest m (bits) with `basic_range_fpr(n, m, k, Δ, R) ≤ eps`, by bisection.
pub fn solve_basic_space(n: f64, eps: f64, r: f64, k: u32, delta: u32) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::arg(format!("ε = {eps} outside (0, 1)")));
    }
    let f = |m: f64| basic_range_fpr(n, m, k, delta, r);
    let (mut lo, mut hi) = (n * 1e-3, n * 1e5);
    if f(hi)? > eps {
        return Err(Error::arg(format!("ε = {eps} unreachable with k={k}, Δ={delta}, R={r}")));
    }
    if f(lo)? <= eps {
        return Ok(lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > eps {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= hi * 1e-12 {
            break;
        }
    }
    Ok(hi)
}

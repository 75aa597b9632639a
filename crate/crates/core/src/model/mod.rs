//! Analytic false-positive models, space curves and the tuning advisor.

mod advisor;
mod profile;
mod space;

pub use advisor::{advise, config_from_kv, AdvisorResult, CandidateDiag, SweepPoint};
pub use profile::{extended_profile, extended_profile_with, FprProfile, TpEstimate};
pub use space::{lower_bound_space, rosetta_firstcut_space, solve_basic_space};

use crate::error::{Error, Result};

/// Point-query FPR of a Bloom-like structure: (1 − e^{−kn/m})^k.
pub fn point_fpr(n: f64, m: f64, k: f64) -> f64 {
    (1.0 - (-k * n / m).exp()).powf(k)
}

/// Range FPR bound 2·(1 − e^{−kn/m})^{k − log2(R)/Δ} for ranges up to `r`.
pub fn basic_range_fpr(n: f64, m: f64, k: u32, delta: u32, r: f64) -> Result<f64> {
    if !(n > 0.0 && m > 0.0 && k > 0 && delta > 0 && r >= 1.0) {
        return Err(Error::arg("basic_range_fpr needs positive arguments and R ≥ 1"));
    }
    let log_r = r.log2();
    if log_r > f64::from(k * delta) {
        return Err(Error::arg(format!("R = 2^{log_r:.2} exceeds the 2^{} represented levels", k * delta)));
    }
    let k = f64::from(k);
    Ok(2.0 * (1.0 - (-k * n / m).exp()).powf(k - log_r / f64::from(delta)))
}

/// Probability that a probe over `b` sub-intervals with `r` replicas is
/// positive when each bit is zero with probability `p`.
pub fn probe_positive_prob(b: f64, r: u32, p: f64) -> f64 {
    1.0 - (1.0 - (1.0 - p).powi(r as i32)).powf(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_bound_values() {
        let e17 = basic_range_fpr(1.0, 17.0, 6, 7, 16384.0).unwrap();
        assert!((e17 - 0.0156).abs() < 5e-4, "{e17}");
        let e22 = basic_range_fpr(1.0, 22.0, 6, 7, 2f64.powi(21)).unwrap();
        assert!((e22 - 0.027).abs() < 5e-4, "{e22}");
        let e1 = basic_range_fpr(1.0, 10.0, 6, 7, 1.0).unwrap();
        assert!((e1 - 2.0 * point_fpr(1.0, 10.0, 6.0)).abs() < 1e-12);
        assert!(basic_range_fpr(1.0, 10.0, 6, 7, 2f64.powi(43)).is_err());
    }

    #[test]
    fn point_values() {
        let q = 1.0 - (-0.6f64).exp();
        assert!((point_fpr(1.0, 10.0, 6.0) - q * q * q * q * q * q).abs() < 1e-15);
        assert!((point_fpr(1.0, 10.0, 6.0) - 0.00844).abs() < 1e-5);
        assert!(point_fpr(1.0, 1e12, 6.0) < 1e-30);
    }

    #[test]
    fn probe_expansions() {
        for p in [0.1, 0.5, 0.683] {
            let q: f64 = 1.0 - p;
            assert!((probe_positive_prob(1.0, 3, p) - q.powi(3)).abs() < 1e-12);
            assert!((probe_positive_prob(2.0, 1, p) - (2.0 * p * q + q * q)).abs() < 1e-12);
            let expand = 2.0 * p * p * q * q + 4.0 * p * q.powi(3) + q.powi(4);
            assert!((probe_positive_prob(2.0, 2, p) - expand).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn probe_monotonicity(b in 1u32..64, r in 1u32..6, p in 0.0f64..=1.0) {
            let v = probe_positive_prob(f64::from(b), r, p);
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(probe_positive_prob(f64::from(b), r + 1, p) <= v + 1e-12);
            prop_assert!(probe_positive_prob(f64::from(b + 1), r, p) >= v - 1e-12);
            prop_assert_eq!(probe_positive_prob(f64::from(b), r, 0.0), 1.0);
            prop_assert_eq!(probe_positive_prob(f64::from(b), r, 1.0), 0.0);
        }

        #[test]
        fn basic_bound_monotone(n in 1.0f64..1e6, bpk in 4.0f64..30.0, lr in 0u32..42) {
            let m = n * bpk;
            let r = 2f64.powi(lr as i32);
            let e = basic_range_fpr(n, m, 6, 7, r).unwrap();
            prop_assert!(basic_range_fpr(n, m, 6, 7, r * 2.0).unwrap() >= e);
            prop_assert!(basic_range_fpr(n * 1.1, m, 6, 7, r).unwrap() >= e);
            prop_assert!(basic_range_fpr(n, m * 1.1, 6, 7, r).unwrap() <= e);
        }
    }
}

//! Space comparison: bits per key needed for a target range FPR.

use std::fmt::Write as _;

use anyhow::Result;
use bloomrf::filter::layer_count;
use bloomrf::model::{lower_bound_space, rosetta_firstcut_space, solve_basic_space};

#[derive(Clone, Debug, PartialEq)]
pub struct ModelRow {
    pub eps: f64,
    pub range: f64,
    pub delta: u32,
    pub k: u32,
    /// None when ε is out of reach for this k and Δ.
    pub bloomrf_bpk: Option<f64>,
    pub rosetta_bpk: f64,
    pub lower_bound_bpk: Option<f64>,
}

impl ModelRow {
    /// False when the lower bound exceeds one of the other columns.
    pub fn dominated(&self) -> bool {
        self.lower_bound_bpk.is_none_or(|lb| {
            lb <= self.rosetta_bpk + 1e-9 && self.bloomrf_bpk.is_none_or(|b| lb <= b + 1e-9)
        })
    }
}

/// Δ matched to the range size: log2 R clamped to 1..=7.
pub fn auto_delta(range: f64) -> u32 {
    (range.max(2.0).log2().round() as u32).clamp(1, 7)
}

/// One row per (R, ε). `delta` of None picks [`auto_delta`] per R.
pub fn model_table(d: u32, n: u64, ranges: &[f64], eps_grid: &[f64], delta: Option<u32>) -> Result<Vec<ModelRow>> {
    let nf = n as f64;
    let mut rows = Vec::new();
    for &range in ranges {
        let delta = delta.unwrap_or_else(|| auto_delta(range));
        anyhow::ensure!((1..=7).contains(&delta), "Δ={delta} outside 1..=7");
        let k = layer_count(d, n, delta);
        for &eps in eps_grid {
            anyhow::ensure!(eps > 0.0 && eps < 1.0, "ε = {eps} outside (0, 1)");
            rows.push(ModelRow {
                eps,
                range,
                delta,
                k,
                bloomrf_bpk: solve_basic_space(nf, eps, range, k, delta).ok().map(|m| m / nf),
                rosetta_bpk: rosetta_firstcut_space(nf, eps, range) / nf,
                lower_bound_bpk: lower_bound_space(nf, eps, range, d).ok().map(|m| m / nf),
            });
        }
    }
    Ok(rows)
}

pub fn render(rows: &[ModelRow]) -> String {
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"));
    let mut s = String::new();
    let _ = writeln!(s, "{:>8} {:>10} {:>3} {:>3} {:>10} {:>10} {:>12}", "eps", "R", "Δ", "k", "bloomrf", "rosetta", "lower_bound");
    for r in rows {
        let flag = if r.dominated() { "" } else { "  lower bound above a column" };
        let _ = writeln!(
            s,
            "{:>8.4} {:>10} {:>3} {:>3} {:>10} {:>10.2} {:>12}{flag}",
            r.eps,
            r.range,
            r.delta,
            r.k,
            cell(r.bloomrf_bpk),
            r.rosetta_bpk,
            cell(r.lower_bound_bpk)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use bloomrf::basic_range_fpr;

    #[test]
    fn rosetta_column() {
        let rows = model_table(64, 100_000, &[64.0, 1024.0, 16384.0], &[0.02], None).unwrap();
        let got: Vec<f64> = rows.iter().map(|r| r.rosetta_bpk).collect();
        for (g, want) in got.iter().zip([17.0, 22.0, 28.0]) {
            assert!((g - want).abs() <= 1.0, "{g} vs {want}");
        }
        assert!(rows[0].dominated());
        assert!(rows.iter().all(|r| r.lower_bound_bpk.unwrap() <= r.rosetta_bpk));
    }

    #[test]
    fn violations_are_flagged() {
        let row = ModelRow { eps: 0.1, range: 4.0, delta: 2, k: 3, bloomrf_bpk: Some(1.0), rosetta_bpk: 9.0, lower_bound_bpk: Some(2.0) };
        assert!(!row.dominated());
        assert!(render(&[row]).contains("lower bound above"));
        assert_eq!(auto_delta(16.0), 4);
        assert_eq!(auto_delta(1e10), 7);
        assert_eq!(auto_delta(1.0), 1);
    }

    #[test]
    fn bisection_contract() {
        let rows = model_table(64, 100_000, &[1024.0], &[0.01, 0.05], Some(7)).unwrap();
        for r in rows {
            let m = r.bloomrf_bpk.unwrap() * 100_000.0;
            let e = basic_range_fpr(100_000.0, m, r.k, r.delta, r.range).unwrap();
            assert!((e - r.eps).abs() <= 1e-6 * r.eps);
        }
        assert!(render(&model_table(64, 1000, &[2.0], &[0.1], None).unwrap()).lines().count() == 2);
    }
}

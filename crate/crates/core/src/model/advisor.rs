//! Tuning advisor: picks an exact level, a Δ vector and a segment split that
//! minimize fpr_w² = fpr_m² + C²·fpr_p².

use std::fmt::Write as _;

use super::profile::{extended_profile, FprProfile};
use crate::error::{Error, Result};
use crate::filter::FilterConfig;

const SWEEP_STEPS: usize = 64;
const EXACT_SHARE: f64 = 0.6;
const BOTTOM_DELTA: u32 = 7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub m2: u64,
    pub fpr_m: f64,
    pub fpr_p: f64,
    pub fpr_w: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateDiag {
    pub exact_level: u32,
    /// Best point of the sweep.
    pub best: SweepPoint,
    pub sweep: Vec<SweepPoint>,
}

#[derive(Clone, Debug)]
pub struct AdvisorResult {
    pub config: FilterConfig,
    pub budget_bits: u64,
    pub range: f64,
    pub point_weight: f64,
    pub candidates: Vec<CandidateDiag>,
    pub chosen: usize,
    pub profile: FprProfile,
}

impl AdvisorResult {
    pub fn chosen_diag(&self) -> &CandidateDiag {
        &self.candidates[self.chosen]
    }

    pub fn point_fpr(&self) -> f64 {
        self.chosen_diag().best.fpr_p
    }

    /// Max dyadic-level FPR up to R.
    pub fn range_fpr(&self) -> f64 {
        self.chosen_diag().best.fpr_m
    }

    /// An arbitrary interval of size ≤ R meets at most two intervals per level.
    pub fn interval_fpr_bound(&self) -> f64 {
        (2.0 * self.range_fpr()).min(1.0)
    }

    pub fn render_table(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let top_first = |v: &[u32]| v.iter().rev().map(u32::to_string).collect::<Vec<_>>().join(",");
        let _ = writeln!(s, "budget        {} bits ({:.2} bits/key)", self.budget_bits, c.bits_per_key());
        let _ = writeln!(s, "exact level   {}", c.exact_level.map_or("none".into(), |l| l.to_string()));
        let _ = writeln!(s, "delta         ({})", top_first(&c.deltas));
        let _ = writeln!(s, "replicas      ({})", top_first(&c.replicas));
        let _ = writeln!(s, "segments      ({})", top_first(&c.segment_assignment));
        let sizes: Vec<String> = c.segment_bits.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "segment bits  {}", sizes.join(","));
        let _ = writeln!(s, "point fpr     {:.5}", self.point_fpr());
        let _ = writeln!(s, "range fpr     {:.5} (dyadic, R={:.3e})", self.range_fpr(), self.range);
        let _ = writeln!(s, "interval fpr  <= {:.5}", self.interval_fpr_bound());
        let _ = writeln!(s);
        let _ = writeln!(s, "{:>6} {:>14} {:>10} {:>10} {:>10}", "l_e", "m2", "fpr_m", "fpr_p", "fpr_w");
        for (i, cand) in self.candidates.iter().enumerate() {
            let b = cand.best;
            let mark = if i == self.chosen { " *" } else { "" };
            let _ = writeln!(
                s,
                "{:>6} {:>14} {:>10.5} {:>10.5} {:>10.5}{mark}",
                cand.exact_level, b.m2, b.fpr_m, b.fpr_p, b.fpr_w
            );
        }
        s
    }

    /// `key=value` lines readable by [`config_from_kv`]. Vectors are top layer first.
    pub fn render_kv(&self) -> String {
        let c = &self.config;
        let join = |v: Vec<String>| v.join(",");
        let top_first = |v: &[u32]| join(v.iter().rev().map(u32::to_string).collect());
        let mut s = String::new();
        let _ = writeln!(s, "d={}", c.domain_bits);
        let _ = writeln!(s, "n={}", c.expected_keys);
        let _ = writeln!(s, "exact_level={}", c.exact_level.map_or("none".into(), |l| l.to_string()));
        let _ = writeln!(s, "delta={}", top_first(&c.deltas));
        let _ = writeln!(s, "replicas={}", top_first(&c.replicas));
        let _ = writeln!(s, "segments={}", top_first(&c.segment_assignment));
        let _ = writeln!(s, "segment_bits={}", join(c.segment_bits.iter().map(u64::to_string).collect()));
        let _ = writeln!(s, "point_fpr={:.6}", self.point_fpr());
        let _ = writeln!(s, "range_fpr={:.6}", self.range_fpr());
        s
    }
}

/// Parses the layout lines of [`AdvisorResult::render_kv`]. Unknown keys are ignored.
pub fn config_from_kv(text: &str) -> Result<FilterConfig> {
    let mut d = None;
    let mut n = None;
    let mut exact = None;
    let (mut deltas, mut replicas, mut segments, mut sizes) = (None, None, None, None);
    fn list<T: std::str::FromStr>(v: &str) -> Result<Vec<T>> {
        v.split(',')
            .map(|x| x.trim().parse().map_err(|_| Error::arg(format!("bad list entry {x:?}"))))
            .collect()
    }
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::arg(format!("expected key=value, got {line:?}")))?;
        let value = value.trim();
        let num = |v: &str| v.parse::<u64>().map_err(|_| Error::arg(format!("bad number {v:?}")));
        match key.trim() {
            "d" => d = Some(num(value)? as u32),
            "n" => n = Some(num(value)?),
            "exact_level" => exact = Some(if value == "none" { None } else { Some(num(value)? as u32) }),
            "delta" => deltas = Some(list::<u32>(value)?),
            "replicas" => replicas = Some(list::<u32>(value)?),
            "segments" => segments = Some(list::<u32>(value)?),
            "segment_bits" => sizes = Some(list::<u64>(value)?),
            _ => {}
        }
    }
    let missing = |what: &str| Error::arg(format!("layout is missing {what}"));
    let rev = |v: Vec<u32>| v.into_iter().rev().collect::<Vec<_>>();
    FilterConfig::new(
        d.ok_or_else(|| missing("d"))?,
        n.ok_or_else(|| missing("n"))?,
        rev(deltas.ok_or_else(|| missing("delta"))?),
        rev(replicas.ok_or_else(|| missing("replicas"))?),
        rev(segments.ok_or_else(|| missing("segments"))?),
        sizes.ok_or_else(|| missing("segment_bits"))?,
        exact.ok_or_else(|| missing("exact_level"))?,
    )
}

/// Bottom-first Δ vector summing to `level`: as many Δ=7 bottom layers as fit
/// while leaving at least 8 levels, the rest split into shrinking mid layers.
fn layer_plan(level: u32) -> (Vec<u32>, usize) {
    let bottom = level.saturating_sub(8) / BOTTOM_DELTA;
    let mut deltas = vec![BOTTOM_DELTA; bottom as usize];
    let mut rest = level - bottom * BOTTOM_DELTA;
    while rest > 0 {
        let step = if rest <= 3 { rest } else { rest / 2 };
        deltas.push(step);
        rest -= step;
    }
    (deltas, bottom as usize)
}

fn round_up(x: u64, to: u64) -> u64 {
    x.div_ceil(to) * to
}

fn round_down(x: u64, to: u64) -> u64 {
    x / to * to
}

/// Advisor over exact-level candidates {ℓ_e, ℓ_e + 1} with
/// ℓ_e = min{ℓ : 2^{d−ℓ} < 0.6·budget}.
pub fn advise(d: u32, n: u64, budget_bits: u64, range: f64, point_weight: f64) -> Result<AdvisorResult> {
    if !(1..=64).contains(&d) {
        return Err(Error::Advisor(format!("domain bits {d} outside 1..=64")));
    }
    if n == 0 || budget_bits < 8 * n {
        return Err(Error::Advisor(format!("budget of {budget_bits} bits is below 8 bits per key")));
    }
    if !(range >= 1.0) || !(point_weight > 0.0) {
        return Err(Error::Advisor("R must be ≥ 1 and C positive".into()));
    }
    let le = (0..=d)
        .find(|&l| 2f64.powi((d - l) as i32) < EXACT_SHARE * budget_bits as f64)
        .ok_or_else(|| Error::Advisor("budget too small for any exact level".into()))?;

    let mut best: Option<(CandidateDiag, FilterConfig, FprProfile)> = None;
    let mut candidates = Vec::new();
    let mut chosen = 0;
    for cand in [le, le + 1] {
        if cand == 0 || cand > d {
            continue;
        }
        let m1 = 1u64 << (d - cand);
        if m1 >= budget_bits {
            continue;
        }
        let (deltas, bottom) = layer_plan(cand);
        let k = deltas.len();
        let mut replicas = vec![1u32; k];
        replicas[k - 1] = 2;
        let three = bottom > 0 && bottom < k;
        let segments: Vec<u32> = (0..k).map(|i| if three && i < bottom { 3 } else { 2 }).collect();
        let rest = round_up(budget_bits - m1, 64);
        let sweep_sizes: Vec<(u64, u64)> = if three {
            (0..SWEEP_STEPS)
                .map(|s| {
                    let share = 0.05 + 0.9 * s as f64 / (SWEEP_STEPS - 1) as f64;
                    let m2 = round_down((rest as f64 * share) as u64, 64).clamp(64, rest - 64);
                    (m2, rest - m2)
                })
                .collect()
        } else {
            vec![(rest, 0)]
        };
        if three && rest < 128 {
            continue;
        }
        let mut diag: Option<CandidateDiag> = None;
        let mut sweep = Vec::with_capacity(sweep_sizes.len());
        let mut best_cfg = None;
        for (m2, m3) in sweep_sizes {
            let mut sizes = vec![m1, m2];
            if three {
                sizes.push(m3);
            }
            let cfg = FilterConfig::new(d, n, deltas.clone(), replicas.clone(), segments.clone(), sizes, Some(cand))?;
            let prof = extended_profile(&cfg, n, point_weight);
            let (fpr_m, fpr_p) = (prof.max_up_to(range), prof.point());
            let pt = SweepPoint { m2, fpr_m, fpr_p, fpr_w: (fpr_m * fpr_m + point_weight * point_weight * fpr_p * fpr_p).sqrt() };
            sweep.push(pt);
            if diag.as_ref().is_none_or(|b| pt.fpr_w < b.best.fpr_w) {
                diag = Some(CandidateDiag { exact_level: cand, best: pt, sweep: Vec::new() });
                best_cfg = Some((cfg, prof));
            }
        }
        let mut diag = diag.expect("sweep is non-empty");
        diag.sweep = sweep;
        let (cfg, prof) = best_cfg.expect("sweep is non-empty");
        if best.as_ref().is_none_or(|(b, _, _)| diag.best.fpr_w < b.best.fpr_w) {
            chosen = candidates.len();
            best = Some((diag.clone(), cfg, prof));
        }
        candidates.push(diag);
    }
    let (_, config, profile) = best.ok_or_else(|| {
        Error::Advisor(format!("exact bitmap exceeds the {budget_bits}-bit budget at every candidate level"))
    })?;
    Ok(AdvisorResult {
        budget_bits: config.total_bits(),
        config,
        range,
        point_weight,
        candidates,
        chosen,
        profile,
    })
}

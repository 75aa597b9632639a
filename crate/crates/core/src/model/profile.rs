use super::probe_positive_prob;
use crate::filter::FilterConfig;

/// Estimate of the number of non-empty dyadic intervals on a level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TpEstimate {
    /// min(n, 2^{d−ℓ}): every key in its own interval until the level saturates.
    #[default]
    Saturating,
    /// Expected number of occupied intervals when n keys fall uniformly.
    Occupancy,
}

impl TpEstimate {
    fn eval(self, n: f64, d: u32, level: u32) -> f64 {
        let cells = 2f64.powi((d - level) as i32);
        match self {
            TpEstimate::Saturating => n.min(cells),
            TpEstimate::Occupancy if cells <= 1.0 => n.min(1.0),
            TpEstimate::Occupancy => -cells * (n * (-1.0 / cells).ln_1p()).exp_m1(),
        }
    }
}

/// Per-level interval counts; index = level, 0..=d.
#[derive(Clone, Debug, PartialEq)]
pub struct FprProfile {
    pub domain_bits: u32,
    pub tp: Vec<f64>,
    pub fp: Vec<f64>,
    pub tn: Vec<f64>,
    pub fpr: Vec<f64>,
    /// Zero-bit probability per segment (1.0 for segments without hashed layers).
    pub zero_prob: Vec<f64>,
    pub c: f64,
}

impl FprProfile {
    pub fn point(&self) -> f64 {
        self.fpr[0]
    }

    /// Largest dyadic-level FPR on levels 0..=⌊log2 R⌋.
    pub fn max_up_to(&self, range: f64) -> f64 {
        let top = (range.max(1.0).log2().floor() as usize).min(self.fpr.len() - 1);
        self.fpr[..=top].iter().copied().fold(0.0, f64::max)
    }
}

pub fn extended_profile(config: &FilterConfig, n: u64, c: f64) -> FprProfile {
    extended_profile_with(config, n, c, TpEstimate::Saturating)
}

/// Level-by-level recursion from the top represented level down to level 0.
/// Levels at or above the exact level (ΣΔ without one) count as exact.
pub fn extended_profile_with(config: &FilterConfig, n: u64, c: f64, tp_est: TpEstimate) -> FprProfile {
    let d = config.domain_bits;
    let nf = n as f64;
    let len = d as usize + 1;
    let (mut tp, mut fp, mut tn) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);

    let mut hashes_per_segment = vec![0u32; config.segment_bits.len()];
    for (i, &j) in config.segment_assignment.iter().enumerate() {
        hashes_per_segment[j as usize - 1] += config.replicas[i];
    }
    let zero_prob: Vec<f64> = config
        .segment_bits
        .iter()
        .zip(&hashes_per_segment)
        .map(|(&m, &kj)| {
            if kj == 0 {
                1.0
            } else {
                (1.0 - c / m as f64).max(0.0).powf(f64::from(kj) * nf)
            }
        })
        .collect();

    let top = config.exact_level.unwrap_or_else(|| config.top_level()).min(d);
    for level in top..=d {
        tp[level as usize] = tp_est.eval(nf, d, level);
        tn[level as usize] = 2f64.powi((d - level) as i32) - tp[level as usize];
    }
    let levels = config.levels();
    for i in (0..config.k()).rev() {
        let lo = levels[i];
        let parent = (lo + config.deltas[i]).min(d);
        let p = zero_prob[config.segment_assignment[i] as usize - 1];
        let r = config.replicas[i];
        let (fpp, tpp, tnp) = (fp[parent as usize], tp[parent as usize], tn[parent as usize]);
        for level in (lo..parent).rev() {
            let l = level as usize;
            let fanout = 2f64.powi((parent - level) as i32);
            tp[l] = tp_est.eval(nf, d, level);
            let pot = (fanout * (fpp + tpp) - tp[l]).max(0.0);
            let q = probe_positive_prob(2f64.powi((level - lo) as i32), r, p);
            fp[l] = q * pot;
            tn[l] = fanout * tnp + (1.0 - q) * pot;
        }
    }
    let fpr = fp
        .iter()
        .zip(&tn)
        .map(|(&f, &t)| if f + t > 0.0 { f / (f + t) } else { 0.0 })
        .collect();
    FprProfile { domain_bits: d, tp, fp, tn, fpr, zero_prob, c }
}

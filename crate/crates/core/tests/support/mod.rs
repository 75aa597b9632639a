//! Independent reference implementations used by the integration tests and
//! the acceptance target.

#![allow(dead_code)]

use bloomrf::{BloomRf, FilterConfig};
use rand::Rng;

/// Greedy dyadic cover of `[l, r]`: from the left, always take the largest
/// aligned block that still fits. Returns `(level, prefix)` pairs.
pub fn greedy_pieces(l: u64, r: u64) -> Vec<(u32, u64)> {
    let (mut x, end) = (u128::from(l), u128::from(r) + 1);
    let mut out = Vec::new();
    while x < end {
        let mut level = 0;
        while level < 64 && x % (1u128 << (level + 1)) == 0 && x + (1u128 << (level + 1)) <= end {
            level += 1;
        }
        out.push((level, (x >> level) as u64));
        x += 1u128 << level;
    }
    out
}

/// Every interval on one of `levels` that meets `[l, r]` without lying inside it.
pub fn brute_coverings(d: u32, l: u64, r: u64, levels: &[u32]) -> Vec<(u32, u64, u64)> {
    let mut out = Vec::new();
    for &level in levels {
        let level = level.min(d);
        let size = 1u128 << level;
        let first = u128::from(l) / size;
        let last = u128::from(r) / size;
        for p in first..=last {
            let (lo, hi) = (p * size, (p + 1) * size - 1);
            let inside = lo >= u128::from(l) && hi <= u128::from(r);
            if !inside {
                out.push((level, lo as u64, hi as u64));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn bit(f: &BloomRf, seg: usize, pos: u64) -> bool {
    f.store().test_bit(seg, pos).expect("position inside the segment")
}

fn covering_ok(f: &BloomRf, layer: usize, key: u64) -> bool {
    (0..f.layers()[layer].seeds.len()).all(|rep| {
        let (seg, pos) = f.code_position(layer, rep, key);
        bit(f, seg, pos)
    })
}

/// Every replica has at least one set bit among the level-ℓ_i prefixes of the piece.
fn piece_ok(f: &BloomRf, layer: usize, level: u32, prefix: u64) -> bool {
    let li = f.layers()[layer].level;
    let first = (u128::from(prefix) << level) >> li;
    let count = 1u128 << (level - li);
    (0..f.layers()[layer].seeds.len()).all(|rep| {
        (first..first + count).any(|x| {
            let (seg, pos) = f.code_position(layer, rep, (x << li) as u64);
            bit(f, seg, pos)
        })
    })
}

/// Probes every piece of the greedy decomposition together with all of its
/// ancestors on layer levels and on the exact level.
pub fn naive_range(f: &BloomRf, l: u64, r: u64) -> bool {
    let cfg = f.config();
    let top = cfg.top_level();
    let exact = cfg.exact_level.is_some();
    let levels: Vec<u32> = f.layers().iter().map(|s| s.level).collect();
    for (level, prefix) in greedy_pieces(l, r) {
        let key = (u128::from(prefix) << level) as u64;
        if level > top || (level == top && !exact) {
            return true;
        }
        if exact && !bit(f, 0, f.exact_position(key).unwrap()) {
            continue;
        }
        if level == top {
            return true;
        }
        let layer = levels.iter().rposition(|&lv| lv <= level).unwrap();
        if (layer + 1..levels.len()).all(|j| covering_ok(f, j, key)) && piece_ok(f, layer, level, prefix) {
            return true;
        }
    }
    false
}

/// Random valid config over a `d`-bit domain with replicas, several segments,
/// an optional exact level and optional reverse mitigation.
pub fn random_config(rng: &mut impl Rng, d: u32, n: u64) -> FilterConfig {
    loop {
        let k = rng.random_range(1..=4usize);
        let deltas: Vec<u32> = (0..k).map(|_| rng.random_range(1..=7)).collect();
        let levels_top: u32 = deltas[..k - 1].iter().sum();
        let sum: u32 = deltas.iter().sum();
        if levels_top >= d {
            continue;
        }
        let exact = sum <= d && rng.random_bool(0.4);
        let replicas: Vec<u32> = (0..k).map(|_| rng.random_range(1..=3)).collect();
        let hashed_segments = rng.random_range(1..=3u32);
        let first = u32::from(exact) + 1;
        let assignment: Vec<u32> = (0..k).map(|_| first + rng.random_range(0..hashed_segments)).collect();
        let mut sizes = Vec::new();
        if exact {
            sizes.push(1u64 << (d - sum));
        }
        for _ in 0..hashed_segments {
            sizes.push(64 * rng.random_range(1..=3u64));
        }
        let cfg = FilterConfig::new(d, n, deltas, replicas, assignment, sizes, exact.then_some(sum))
            .expect("generated config is valid")
            .with_seed(rng.random())
            .with_reverse_mitigation(rng.random_bool(0.5));
        return cfg;
    }
}

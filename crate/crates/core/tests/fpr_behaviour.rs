use std::collections::HashSet;

use bloomrf::workloads::{aligned_key, gen_degenerate_keys};
use bloomrf::{build_config, point_fpr, BloomRf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point_fp_rate(f: &BloomRf, keys: &HashSet<u64>, queries: impl Iterator<Item = u64>) -> (u64, u64) {
    let (mut fp, mut total) = (0, 0);
    for q in queries.filter(|q| !keys.contains(q)) {
        total += 1;
        fp += u64::from(f.point_lookup(q));
    }
    (fp, total)
}

#[test]
fn point_fpr_tracks_model() {
    let n = 20_000u64;
    let cfg = build_config(64, n, 10.0, None, None).unwrap();
    let k = cfg.k() as f64;
    let m = cfg.total_bits() as f64;
    let f = BloomRf::new(cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let keys: HashSet<u64> = (0..n).map(|_| rng.random()).collect();
    keys.iter().for_each(|&x| f.insert(x));
    let (fp, total) = point_fp_rate(&f, &keys, (0..200_000).map(|_| rng.random()));
    let measured = fp as f64 / total as f64;
    let model = point_fpr(n as f64, m, k);
    assert!(measured < 2.0 * model && measured > model / 2.0, "measured {measured}, model {model}");
}

fn degenerate_pair(keys: &[u64], queries: &[u64]) -> (f64, f64) {
    let set: HashSet<u64> = keys.iter().copied().collect();
    let rate = |mitigate: bool| {
        let cfg = build_config(64, keys.len() as u64, 12.0, None, None)
            .unwrap()
            .with_reverse_mitigation(mitigate);
        let f = BloomRf::new(cfg).unwrap();
        keys.iter().for_each(|&x| f.insert(x));
        let (fp, total) = point_fp_rate(&f, &set, queries.iter().copied());
        fp as f64 / total as f64
    };
    (rate(false), rate(true))
}

#[test]
fn mitigation_helps_on_degenerate_stream() {
    let n = 20_000;
    let keys = gen_degenerate_keys(n, 64, 7, 5, 21).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let queries: Vec<u64> = (0..100_000).map(|_| aligned_key(&mut rng, 64, 7, 5)).collect();
    let (plain, mitigated) = degenerate_pair(&keys, &queries);
    assert!(plain > 2.0 * mitigated, "without {plain}, with {mitigated}");
}

#[test]
fn mitigation_is_neutral_on_uniform_stream() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let keys: Vec<u64> = (0..20_000).map(|_| rng.random()).collect();
    let queries: Vec<u64> = (0..200_000).map(|_| rng.random()).collect();
    let (plain, mitigated) = degenerate_pair(&keys, &queries);
    // four binomial standard deviations of the difference
    let sigma = (2.0 * plain.max(mitigated) / queries.len() as f64).sqrt();
    assert!((plain - mitigated).abs() < 4.0 * sigma + 1e-4, "without {plain}, with {mitigated}");
}

mod support;

use bloomrf::workloads::{gen_degenerate_keys, gen_keys};
use bloomrf::{build_config, BloomRf, KeyDistribution, WorkloadSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn enclosing(rng: &mut impl Rng, key: u64, d: u32) -> (u64, u64) {
    let max = if d == 64 { u64::MAX } else { (1 << d) - 1 };
    let w = 1u64 << rng.random_range(0..d.min(63));
    let l = key.saturating_sub(rng.random_range(0..w));
    let r = key.saturating_add(rng.random_range(0..w)).min(max);
    (l, r)
}

fn run(keys: &[u64], d: u32, mitigation: bool, seed: u64) {
    let cfg = build_config(d, keys.len() as u64, 14.0, None, None)
        .unwrap()
        .with_reverse_mitigation(mitigation);
    let f = BloomRf::new(cfg).unwrap();
    keys.iter().for_each(|&k| f.insert(k));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &k in keys {
        assert!(f.point_lookup(k), "point miss {k}");
        for _ in 0..3 {
            let (l, r) = enclosing(&mut rng, k, d);
            assert!(f.range_lookup(l, r).unwrap(), "range miss {k} in [{l}, {r}]");
        }
    }
}

#[test]
fn every_distribution() {
    let n = 2000;
    for d in [16, 32, 64] {
        for dist in [KeyDistribution::Uniform, KeyDistribution::normal_default(), KeyDistribution::zipfian_default(n)] {
            let mut spec = WorkloadSpec::new(dist, d, n);
            spec.seed = u64::from(d);
            let keys = gen_keys(&spec).unwrap();
            run(&keys, d, false, 1);
            run(&keys, d, true, 2);
        }
        let keys = gen_degenerate_keys(n, d, 7, 5, 9).unwrap();
        run(&keys, d, false, 3);
        run(&keys, d, true, 4);
    }
}

#[test]
fn advised_layout() {
    let adv = bloomrf::advise(32, 5000, 5000 * 16, 1024.0, 1.0).unwrap();
    let f = BloomRf::new(adv.config.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let keys: Vec<u64> = (0..5000).map(|_| rng.random_range(0..1u64 << 32)).collect();
    keys.iter().for_each(|&k| f.insert(k));
    for &k in &keys {
        assert!(f.point_lookup(k));
        let (l, r) = enclosing(&mut rng, k, 32);
        assert!(f.range_lookup(l, r).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_configs(seed: u64, keys in prop::collection::vec(0u64..1 << 12, 1..64)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = BloomRf::new(support::random_config(&mut rng, 12, keys.len() as u64)).unwrap();
        keys.iter().for_each(|&k| f.insert(k));
        for &k in &keys {
            prop_assert!(f.point_lookup(k));
            let (l, r) = enclosing(&mut rng, k, 12);
            prop_assert!(f.range_lookup(l, r).unwrap());
        }
    }

    #[test]
    fn widening_keeps_positive(seed: u64, l in 0u64..1 << 20, len in 0u64..1 << 12, grow in 0u64..1 << 12) {
        let cfg = build_config(32, 256, 10.0, None, None).unwrap().with_seed(seed);
        let f = BloomRf::new(cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..256 {
            f.insert(rng.random_range(0..1u64 << 21));
        }
        if f.range_lookup(l, l + len).unwrap() {
            prop_assert!(f.range_lookup(l.saturating_sub(grow), l + len + grow).unwrap());
        }
    }
}

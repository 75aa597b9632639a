use bloomrf::baselines::{ClassicBloom, FencePointers, PrefixBloom};
use bloomrf::{advise, build_config, BloomRf, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn filled(seed: u64) -> BloomRf {
    let adv = advise(32, 2000, 2000 * 16, 4096.0, 1.0).unwrap();
    let f = BloomRf::new(adv.config.clone().with_reverse_mitigation(true)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..2000 {
        f.insert(rng.random_range(0..1u64 << 32));
    }
    f
}

#[test]
fn round_trip_agrees() {
    let f = filled(1);
    let bytes = f.to_bytes();
    let g = BloomRf::from_bytes(&bytes).unwrap();
    assert_eq!(g.to_bytes(), bytes);
    assert_eq!(g.inserted_count(), 2000);
    assert_eq!(g.config().deltas, f.config().deltas);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5000 {
        let a = rng.random_range(0..1u64 << 32);
        let w = 1u64 << rng.random_range(0..20);
        let b = (a + rng.random_range(0..w)).min(u32::MAX.into());
        assert_eq!(f.point_lookup(a), g.point_lookup(a));
        assert_eq!(f.range_lookup(a, b).unwrap(), g.range_lookup(a, b).unwrap());
    }
    let mut buf = Vec::new();
    f.write_to(&mut buf).unwrap();
    assert_eq!(BloomRf::read_from(buf.as_slice()).unwrap().to_bytes(), bytes);
}

#[test]
fn corruption_is_detected() {
    let bytes = filled(3).to_bytes();
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(BloomRf::from_bytes(&bad), Err(Error::BadMagic(_))));
    let mut bad = bytes.clone();
    bad[4] = 9;
    assert!(matches!(BloomRf::from_bytes(&bad), Err(Error::Version(9))));
    assert!(matches!(BloomRf::from_bytes(&bytes[..bytes.len() - 9]), Err(Error::Truncated)));
    assert!(BloomRf::from_bytes(&bytes[..3]).is_err());
    let mut bad = bytes.clone();
    bad[6] ^= 1;
    assert!(matches!(BloomRf::from_bytes(&bad), Err(Error::Checksum(_))));
    // segment count: parsing goes astray before the header CRC is reached
    let mut bad = bytes.clone();
    bad[8] ^= 1;
    assert!(BloomRf::from_bytes(&bad).is_err());
    let mut bad = bytes.clone();
    let mid = bytes.len() - 40;
    bad[mid] ^= 0x10;
    assert!(matches!(BloomRf::from_bytes(&bad), Err(Error::Checksum(_))));
    let mut long = bytes.clone();
    long.push(0);
    assert!(BloomRf::from_bytes(&long).is_err());
}

#[test]
fn empty_filter_round_trip() {
    let f = BloomRf::new(build_config(64, 1000, 10.0, None, None).unwrap()).unwrap();
    let g = BloomRf::from_bytes(&f.to_bytes()).unwrap();
    assert_eq!(g.to_bytes(), f.to_bytes());
    assert!(!g.range_lookup(5, 5).unwrap());
}

#[test]
fn baseline_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let keys: Vec<u64> = (0..1000).map(|_| rng.random()).collect();
    let bloom = ClassicBloom::with_bits_per_key(1000, 10.0).unwrap();
    let prefix = PrefixBloom::new(1000, 10_000, 8, None).unwrap();
    for &k in &keys {
        bloom.insert(k);
        prefix.insert(k);
    }
    let fence = FencePointers::build(&keys, 64).unwrap();
    assert_eq!(ClassicBloom::from_bytes(&bloom.to_bytes()).unwrap().to_bytes(), bloom.to_bytes());
    assert_eq!(PrefixBloom::from_bytes(&prefix.to_bytes()).unwrap().to_bytes(), prefix.to_bytes());
    assert_eq!(FencePointers::from_bytes(&fence.to_bytes()).unwrap().to_bytes(), fence.to_bytes());
    assert!(ClassicBloom::from_bytes(&prefix.to_bytes()).is_err());
    assert!(BloomRf::from_bytes(&bloom.to_bytes()).is_err());
}

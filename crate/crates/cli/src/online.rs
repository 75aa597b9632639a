//! Concurrent insert/lookup runs on one shared filter.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Barrier;
use std::time::Instant;

use anyhow::Result;
use bloomrf::{build_config, BloomRf, FilterConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// CPU time consumed by the calling thread, in seconds.
pub fn thread_cpu_seconds() -> f64 {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    // SAFETY: `ts` is a valid, writable timespec for the duration of the call.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    assert_eq!(rc, 0, "CLOCK_THREAD_CPUTIME_ID unavailable");
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixedResult {
    pub threads: usize,
    pub insert_ratio: f64,
    pub inserts: u64,
    pub lookups: u64,
    pub wall_seconds: f64,
    pub cpu_seconds: f64,
}

impl MixedResult {
    pub fn ops(&self) -> u64 {
        self.inserts + self.lookups
    }

    pub fn ops_per_sec(&self) -> f64 {
        self.ops() as f64 / self.wall_seconds.max(1e-9)
    }

    pub fn ops_per_cpu_sec(&self) -> f64 {
        self.ops() as f64 / self.cpu_seconds.max(1e-9)
    }

    pub const CSV_HEADER: &'static str = "threads,insert_ratio,inserts,lookups,wall_seconds,cpu_seconds,ops_per_sec,ops_per_cpu_sec";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.3},{},{},{:.4},{:.4},{:.1},{:.1}",
            self.threads,
            self.insert_ratio,
            self.inserts,
            self.lookups,
            self.wall_seconds,
            self.cpu_seconds,
            self.ops_per_sec(),
            self.ops_per_cpu_sec()
        )
    }
}

/// `ops` operations split over `threads` workers; each operation is an insert
/// of a fresh random key with probability `insert_ratio`, else a point lookup.
pub fn run_mixed(filter: &BloomRf, ops: u64, insert_ratio: f64, threads: usize, seed: u64) -> MixedResult {
    let threads = threads.max(1);
    let inserts = AtomicU64::new(0);
    let cpu_nanos = AtomicU64::new(0);
    let mask = domain_mask(filter.config());
    let start = Instant::now();
    std::thread::scope(|s| {
        for t in 0..threads {
            let share = ops / threads as u64 + u64::from((t as u64) < ops % threads as u64);
            let (inserts, cpu_nanos) = (&inserts, &cpu_nanos);
            s.spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9e37_79b9));
                let cpu0 = thread_cpu_seconds();
                let mut mine = 0;
                let mut hits = 0u64;
                for _ in 0..share {
                    let key = rng.random::<u64>() & mask;
                    if rng.random_bool(insert_ratio) {
                        filter.insert(key);
                        mine += 1;
                    } else {
                        hits += u64::from(filter.point_lookup(key));
                    }
                }
                std::hint::black_box(hits);
                inserts.fetch_add(mine, Ordering::Relaxed);
                cpu_nanos.fetch_add(((thread_cpu_seconds() - cpu0) * 1e9) as u64, Ordering::Relaxed);
            });
        }
    });
    let inserts = inserts.into_inner();
    MixedResult {
        threads,
        insert_ratio,
        inserts,
        lookups: ops - inserts,
        wall_seconds: start.elapsed().as_secs_f64(),
        cpu_seconds: cpu_nanos.into_inner() as f64 * 1e-9,
    }
}

fn domain_mask(cfg: &FilterConfig) -> u64 {
    if cfg.domain_bits == 64 {
        u64::MAX
    } else {
        (1u64 << cfg.domain_bits) - 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OnlineReport {
    /// Lookups of keys inserted before probing began that answered false.
    pub false_negatives: u64,
    pub checked: u64,
    /// Mean per-thread lookups per CPU second with no writer running.
    pub lookup_only_rate: f64,
    /// The same while the insert threads run.
    pub concurrent_rate: f64,
}

impl OnlineReport {
    pub fn degradation(&self) -> f64 {
        1.0 - self.concurrent_rate / self.lookup_only_rate
    }
}

/// Lookups over the preloaded keys, alternating point probes and ranges
/// enclosing the key. Returns (false negatives, lookups, CPU seconds).
fn probe_loop(filter: &BloomRf, keys: &[u64], count: u64, seed: u64) -> (u64, u64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cpu0 = thread_cpu_seconds();
    let mut misses = 0;
    for i in 0..count {
        let key = keys[rng.random_range(0..keys.len())];
        let hit = if i % 2 == 0 {
            filter.point_lookup(key)
        } else {
            let w = rng.random_range(0..1u64 << 20);
            filter.range_lookup(key.saturating_sub(w), key.saturating_add(w)).expect("ordered interval")
        };
        misses += u64::from(!hit);
    }
    (misses, count, thread_cpu_seconds() - cpu0)
}

/// Preloads `preload` keys, then runs `lookup_threads` probing threads alone
/// and again next to `insert_threads` writers. `ops` counts all operations of
/// the concurrent phase, split evenly over every thread.
pub fn online_check(preload: u64, ops: u64, insert_threads: usize, lookup_threads: usize, seed: u64) -> Result<OnlineReport> {
    let all = (insert_threads + lookup_threads).max(1) as u64;
    let per_thread = ops / all;
    let n = preload + per_thread * insert_threads as u64;
    let filter = BloomRf::new(build_config(64, n, 16.0, None, None)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keys: Vec<u64> = (0..preload).map(|_| rng.random()).collect();
    keys.iter().for_each(|&k| filter.insert(k));

    let phase = |writers: usize| -> (u64, u64, f64) {
        let barrier = Barrier::new(writers + lookup_threads);
        let (filter, keys, barrier) = (&filter, &keys, &barrier);
        std::thread::scope(|s| {
            for w in 0..writers {
                s.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1000 ^ w as u64);
                    barrier.wait();
                    for _ in 0..per_thread {
                        filter.insert(rng.random());
                    }
                });
            }
            let probes: Vec<_> = (0..lookup_threads)
                .map(|t| {
                    s.spawn(move || {
                        barrier.wait();
                        probe_loop(filter, keys, per_thread, seed ^ 0x2000 ^ t as u64)
                    })
                })
                .collect();
            probes
                .into_iter()
                .map(|h| h.join().expect("probe thread"))
                .fold((0, 0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
        })
    };
    let (miss_a, n_a, cpu_a) = phase(0);
    let (miss_b, n_b, cpu_b) = phase(insert_threads);
    Ok(OnlineReport {
        false_negatives: miss_a + miss_b,
        checked: n_a + n_b,
        lookup_only_rate: n_a as f64 / cpu_a.max(1e-9),
        concurrent_rate: n_b as f64 / cpu_b.max(1e-9),
    })
}

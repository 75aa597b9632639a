//! Fixed, versioned CSV schema for benchmark cells.

use std::fmt;

use bloomrf::hashing::hash_bytes;

pub const SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 18] = [
    "schema",
    "config_hash",
    "seed",
    "filter",
    "n",
    "bits_per_key",
    "d",
    "distribution",
    "range_size",
    "queries",
    "negatives",
    "false_positives",
    "measured_fpr",
    "model_fpr",
    "probes_per_sec",
    "mean_word_accesses",
    "max_accesses",
    "build_seconds",
];

/// One benchmark cell. `negatives` is the FPR denominator: the number of
/// queries verified empty against the inserted keys.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub config_hash: u64,
    pub seed: u64,
    pub filter: String,
    pub n: u64,
    pub bits_per_key: f64,
    pub d: u32,
    pub distribution: String,
    pub range_size: u64,
    pub queries: u64,
    pub negatives: u64,
    pub false_positives: u64,
    pub measured_fpr: f64,
    pub model_fpr: Option<f64>,
    pub probes_per_sec: f64,
    pub mean_word_accesses: Option<f64>,
    pub max_accesses: Option<u64>,
    pub build_seconds: f64,
}

/// Stable 64-bit digest of a full configuration description.
pub fn config_hash(description: &str) -> u64 {
    hash_bytes(0x6366_675f_6861_7368, description.as_bytes())
}

pub fn csv_header() -> String {
    COLUMNS.join(",")
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

impl ExperimentRecord {
    pub fn csv_row(&self) -> String {
        [
            SCHEMA_VERSION.to_string(),
            format!("{:016x}", self.config_hash),
            self.seed.to_string(),
            self.filter.clone(),
            self.n.to_string(),
            format!("{:.3}", self.bits_per_key),
            self.d.to_string(),
            self.distribution.clone(),
            self.range_size.to_string(),
            self.queries.to_string(),
            self.negatives.to_string(),
            self.false_positives.to_string(),
            format!("{:.6}", self.measured_fpr),
            opt(self.model_fpr.map(|m| format!("{m:.6}"))),
            format!("{:.1}", self.probes_per_sec),
            opt(self.mean_word_accesses.map(|m| format!("{m:.3}"))),
            opt(self.max_accesses),
            format!("{:.4}", self.build_seconds),
        ]
        .join(",")
    }
}

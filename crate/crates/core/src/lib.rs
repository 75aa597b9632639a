//! bloomRF: a Bloom-filter-like structure answering both point and range
//! membership queries over unsigned integer keys.
//!
//! ```
//! use bloomrf::{build_config, BloomRf};
//!
//! let cfg = build_config(64, 1000, 16.0, None, None).unwrap();
//! let filter = BloomRf::new(cfg).unwrap();
//! filter.insert(1_000_000);
//! assert!(filter.point_lookup(1_000_000));
//! assert!(filter.range_lookup(999_000, 1_001_000).unwrap());
//! ```

pub mod baselines;
pub mod bitstore;
pub mod codecs;
mod error;
pub mod filter;
pub mod hashing;
pub mod model;
mod wire;
pub mod workloads;

pub use bitstore::SegmentedBitArray;
pub use error::{Error, Result};
pub use filter::{
    bit_mask, build_config, build_config_with_layers, decompose, layer_count, AccessStats, BloomRf, CheckItem,
    DyadicDecomposition, DyadicInterval, FilterConfig,
};
pub use hashing::{base_hash, pmhf_position, pmhf_word, reverse_pmhf_position, LayerHashSpec};
pub use model::{advise, basic_range_fpr, extended_profile, point_fpr, AdvisorResult, FprProfile};
pub use workloads::{KeyDistribution, Query, WorkloadSpec};

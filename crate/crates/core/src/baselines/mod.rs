//! Comparison filters: classic Bloom, prefix Bloom and fence pointers.

mod bloom;
mod fence;
mod prefix;

pub use bloom::{optimal_hashes, ClassicBloom, BLOOM_MAGIC};
pub use fence::{FencePointers, FENCE_MAGIC};
pub use prefix::{PrefixBloom, MAX_PREFIX_PROBES, PREFIX_MAGIC};

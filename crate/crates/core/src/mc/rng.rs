use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Number of injection cycles covered by one keyed random stream.
///
/// Work is always cut at multiples of this size, so the random numbers a cycle
/// sees depend only on `(seed, stream_index, cycle)` and never on how the run
/// is sharded.
pub const CYCLES_PER_BLOCK: u64 = 4096;

/// What a keyed stream is used for. Each purpose gets its own key so the
/// generators never share random numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum Purpose {
    Injection = 1,
    Emission = 2,
    Detection = 3,
    DarkCounts = 4,
    Reference = 5,
}

/// Root of a family of independent random streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RngSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    pub fn from_seed(master_seed: u64) -> Self {
        Self::new(master_seed, 0)
    }

    /// A ChaCha8 generator keyed by `(seed, stream_index, purpose)` and
    /// positioned on ChaCha stream `block`.
    pub(crate) fn block_rng(&self, purpose: Purpose, block: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream_index.to_le_bytes());
        key[16..24].copy_from_slice(&(purpose as u64).to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(block);
        rng
    }
}

/// Splits `0..n_blocks` into `shards` contiguous, nearly equal ranges.
pub(crate) fn shard_ranges(n_blocks: u64, shards: usize) -> Vec<std::ops::Range<u64>> {
    let shards = (shards.max(1) as u64).min(n_blocks.max(1));
    (0..shards)
        .map(|s| (s * n_blocks / shards)..((s + 1) * n_blocks / shards))
        .collect()
}

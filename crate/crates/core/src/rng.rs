//! Deterministic random streams.
//!
//! Every random quantity in the crate is drawn from an [`RngStream`]: a master
//! seed plus a stream index (a trial id, say). The pair fixes the whole stream,
//! and distinct indices select disjoint ChaCha streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default master seed used when a caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5EED_C4A1_0000_0001;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { seed, index, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Number of 32-bit words consumed so far.
    pub fn counter(&self) -> u128 {
        self.rng.get_word_pos()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

impl rand::RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

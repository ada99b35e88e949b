//! Deterministic, splittable randomness.
//!
//! Every random draw in the crate comes from a [`SeededRng`]. A generator is
//! identified by `(seed, stream_id)`; the underlying ChaCha8 keystream is
//! keyed by the seed and uses the stream id as its nonce, so substreams are
//! independent and the sequence is identical on every platform.

use rand::{Error as RandError, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Substream `stream_id` of this generator. Depends only on
    /// `(self.seed, self.stream_id, stream_id)`, never on how many values
    /// have already been drawn from `self`.
    pub fn derive(&self, stream_id: u64) -> SeededRng {
        let child = splitmix64(splitmix64(self.stream_id) ^ stream_id.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        SeededRng::with_stream(self.seed, child)
    }
}

/// Free-function form of [`SeededRng::derive`].
pub fn derive_rng(master: &SeededRng, stream_id: u64) -> SeededRng {
    master.derive(stream_id)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RandError> {
        self.inner.try_fill_bytes(dest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first_draws(rng: &mut SeededRng) -> [u64; 3] {
        [rng.next_u64(), rng.next_u64(), rng.next_u64()]
    }

    #[test]
    fn derive_is_deterministic() {
        let master = SeededRng::new(42);
        let mut a = master.derive(0);
        let mut b = master.derive(0);
        assert_eq!(first_draws(&mut a), first_draws(&mut b));
    }

    #[test]
    fn derive_ignores_master_position() {
        let mut master = SeededRng::new(42);
        let before = master.derive(3);
        master.next_u64();
        let after = master.derive(3);
        assert_eq!(before.stream_id(), after.stream_id());
    }

    #[test]
    fn golden_streams() {
        // Frozen from a single run; guards against silent changes in the
        // derivation scheme or the underlying generator.
        let master = SeededRng::new(42);
        assert_eq!(master.derive(0).next_u64(), GOLDEN_42_0);
        assert_eq!(master.derive(1).next_u64(), GOLDEN_42_1);
        assert_eq!(SeededRng::new(7).derive(0).next_u64(), GOLDEN_7_0);
    }

    const GOLDEN_42_0: u64 = 441958762508173590;
    const GOLDEN_42_1: u64 = 3047774476989733361;
    const GOLDEN_7_0: u64 = 4993639267605474444;

    #[test]
    fn distinct_streams_and_seeds_differ() {
        let master = SeededRng::new(42);
        let s0 = first_draws(&mut master.derive(0));
        let s1 = first_draws(&mut master.derive(1));
        let other = first_draws(&mut SeededRng::new(43).derive(0));
        assert_ne!(s0, s1);
        assert_ne!(s0, other);
    }
}

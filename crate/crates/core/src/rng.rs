//! Seeded, splittable randomness.
//!
//! A stream is a ChaCha8 generator keyed by the 64-bit seed, with the stream
//! id selecting an independent keystream. `split(label)` derives a child
//! stream id as `mix(parent_stream ^ fnv1a(label))`, where `mix` is the
//! SplitMix64 finalizer. This derivation is part of the report contract:
//! changing it changes every report.

use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Rng {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream for `label`. Does not advance `self`.
    pub fn split(&self, label: &str) -> Rng {
        Rng::with_stream(self.seed, mix(self.stream ^ fnv1a(label)))
    }

    /// Child stream for the `index`-th item of a labelled family.
    pub fn split_indexed(&self, label: &str, index: u64) -> Rng {
        self.split(label).split(&index.to_string())
    }

    /// Uniform value in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: u32) -> u32 {
        self.inner.random_range(0..n)
    }

    /// Uniform nonzero value in `1..n`.
    pub fn nonzero_below(&mut self, n: u32) -> u32 {
        self.inner.random_range(1..n)
    }
}

impl RngCore for Rng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        let xs: Vec<u32> = (0..32).map(|_| a.below(1000)).collect();
        let ys: Vec<u32> = (0..32).map(|_| b.below(1000)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn split_streams_differ_by_label() {
        let root = Rng::new(7);
        let mut a = root.split("alpha");
        let mut b = root.split("beta");
        let mut a2 = root.split("alpha");
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let zs: Vec<u64> = (0..8).map(|_| a2.next_u64()).collect();
        assert_ne!(xs, ys);
        assert_eq!(xs, zs);
    }
}

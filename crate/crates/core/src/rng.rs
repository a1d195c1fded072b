//! Seeded random streams.
//!
//! The generator is xoshiro256** (Blackman and Vigna), seeded through
//! SplitMix64. Bounded integers use rejection sampling on the raw 64-bit
//! output, so a transcript replays bit for bit on every platform.

use serde::{Deserialize, Serialize};

const SPLITMIX_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const SPLITMIX_MUL1: u64 = 0xbf58_476d_1ce4_e5b9;
const SPLITMIX_MUL2: u64 = 0x94d0_49bb_1331_11eb;

/// One step of SplitMix64 applied to `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(SPLITMIX_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(SPLITMIX_MUL1);
    z = (z ^ (z >> 27)).wrapping_mul(SPLITMIX_MUL2);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a parent seed and a path of indices.
pub fn split(seed: u64, path: &[u64]) -> u64 {
    let mut h = splitmix64(seed);
    for &i in path {
        h = splitmix64(h ^ splitmix64(i.wrapping_add(0x5851_f42d_4c95_7f2d)));
    }
    h
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rng {
    s: [u64; 4],
    draws: u64,
}

impl Rng {
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut x = seed;
        let mut s = [0u64; 4];
        for slot in s.iter_mut() {
            x = x.wrapping_add(SPLITMIX_GAMMA);
            let mut z = x;
            z = (z ^ (z >> 30)).wrapping_mul(SPLITMIX_MUL1);
            z = (z ^ (z >> 27)).wrapping_mul(SPLITMIX_MUL2);
            *slot = z ^ (z >> 31);
        }
        if s == [0; 4] {
            s[0] = 1;
        }
        Rng { s, draws: 0 }
    }

    /// Stream for `split(seed, path)`.
    pub fn from_path(seed: u64, path: &[u64]) -> Self {
        Rng::seed_from_u64(split(seed, path))
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        self.draws += 1;
        result
    }

    /// Number of 64-bit words drawn so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Uniform integer in `0..n`. Rejects raw draws below `2^64 mod n`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    /// Uniform float in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p >= 1.0 {
            // still consume a draw so the stream layout does not depend on p
            self.next_u64();
            return true;
        }
        self.unit() < p
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.index(i + 1);
            xs.swap(i, j);
        }
    }

    pub fn choose<'a, T>(&mut self, xs: &'a [T]) -> Option<&'a T> {
        if xs.is_empty() {
            None
        } else {
            Some(&xs[self.index(xs.len())])
        }
    }

    /// `k` distinct elements drawn uniformly, in draw order.
    pub fn sample<T: Clone>(&mut self, xs: &[T], k: usize) -> Vec<T> {
        let mut pool: Vec<T> = xs.to_vec();
        let k = k.min(pool.len());
        for i in 0..k {
            let j = i + self.index(pool.len() - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_output() {
        // xoshiro256** with state (1, 2, 3, 4) yields 11520, 0, 1509978240, ...
        let mut r = Rng {
            s: [1, 2, 3, 4],
            draws: 0,
        };
        assert_eq!(r.next_u64(), 11520);
        assert_eq!(r.next_u64(), 0);
        assert_eq!(r.next_u64(), 1509978240);
        assert_eq!(r.next_u64(), 1215971899390074240);
    }

    #[test]
    fn splitmix_reference() {
        // first SplitMix64 output for seed 1234567
        let mut x: u64 = 1234567;
        x = x.wrapping_add(SPLITMIX_GAMMA);
        let mut z = x;
        z = (z ^ (z >> 30)).wrapping_mul(SPLITMIX_MUL1);
        z = (z ^ (z >> 27)).wrapping_mul(SPLITMIX_MUL2);
        assert_eq!(z ^ (z >> 31), 6457827717110365317);
        assert_eq!(splitmix64(1234567), 6457827717110365317);
    }

    #[test]
    fn below_is_in_range_and_roughly_uniform() {
        let mut r = Rng::seed_from_u64(7);
        let mut counts = [0u32; 6];
        for _ in 0..60_000 {
            counts[r.below(6) as usize] += 1;
        }
        for c in counts {
            assert!((9_400..10_600).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn split_streams_differ() {
        assert_ne!(split(1, &[0, 0]), split(1, &[0, 1]));
        assert_ne!(split(1, &[0, 1]), split(1, &[1, 0]));
        assert_eq!(split(9, &[3, 4]), split(9, &[3, 4]));
    }

    #[test]
    fn sample_distinct() {
        let mut r = Rng::seed_from_u64(3);
        let xs: Vec<u32> = (0..20).collect();
        let mut s = r.sample(&xs, 10);
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 10);
    }
}

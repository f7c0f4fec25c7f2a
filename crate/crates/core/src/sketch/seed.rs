//! Deterministic seeding for all sketch randomness. Every derived hash comes
//! from splitmix64-style integer mixing of `(master_seed, stream_id, inputs)`,
//! so a fixed seed yields bit-identical measurement layouts across runs; no
//! floating point enters the hash path.

use serde::{Deserialize, Serialize};

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Identifies one independent randomness stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SketchSeed {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SketchSeed {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        SketchSeed { master_seed, stream_id }
    }

    /// Derives an independent child stream.
    pub fn child(&self, tag: u64) -> SketchSeed {
        SketchSeed {
            master_seed: self.master_seed,
            stream_id: mix64(self.stream_id ^ mix64(tag ^ 0xa076_1d64_78bd_642f)),
        }
    }

    /// Child keyed by a small tuple, for nested structures.
    pub fn child3(&self, a: u64, b: u64, c: u64) -> SketchSeed {
        self.child(mix64(a).wrapping_add(mix64(b ^ 0x9e6c_63d0_876a_46ef)).wrapping_add(c))
    }

    /// 64-bit hash of `x` under this stream.
    #[inline]
    pub fn hash(&self, x: u64) -> u64 {
        mix64(self.master_seed ^ mix64(self.stream_id ^ mix64(x)))
    }

    #[inline]
    pub fn hash2(&self, a: u64, b: u64) -> u64 {
        self.hash(mix64(a).wrapping_add(b.wrapping_mul(0xd6e8_feb8_6659_fd93)))
    }

    /// Dyadic uniform draw in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn unit_for(&self, x: u64) -> f64 {
        (self.hash(x) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform bucket in `0..m`.
    #[inline]
    pub fn bucket_for(&self, x: u64, m: usize) -> usize {
        debug_assert!(m > 0);
        (self.hash(x) % m as u64) as usize
    }

    /// Rademacher sign.
    #[inline]
    pub fn sign_for(&self, x: u64) -> f64 {
        if self.hash(x ^ 0x5851_f42d_4c95_7f2d) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Dyadic fingerprint coefficient: an odd integer in `[2^19, 2^20)`,
    /// exactly representable so products with bounded dyadic weights stay
    /// exact.
    #[inline]
    pub fn fingerprint_for(&self, x: u64) -> f64 {
        let h = self.hash(x ^ 0x2545_f491_4f6c_dd1d);
        ((1u64 << 19) | (h & ((1u64 << 19) - 1)) | 1) as f64
    }
}

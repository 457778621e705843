//! Seeded, splittable random streams.
//!
//! Every random draw in the crate goes through [`RngStream`], which wraps the
//! ChaCha8 generator. ChaCha is a fully specified algorithm, so a given
//! `(seed, stream_id)` pair produces the same sequence on every platform.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// A reproducible random stream identified by `(seed, stream_id)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derives an independent child stream.
    ///
    /// The child depends only on this stream's identity and `index`, never on
    /// how many values have already been drawn, so trials can be scheduled in
    /// any order (or concurrently) and still reproduce.
    pub fn substream(&self, index: u64) -> RngStream {
        let mixed = splitmix64(self.seed ^ splitmix64(self.stream_id ^ 0x5851_F42D_4C95_7F2D));
        RngStream::new(mixed, index)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform draw from the half-open interval `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    /// Uniform point on the unit sphere in `dim` dimensions; empty when
    /// `dim == 0`.
    pub fn unit_vector(&mut self, dim: usize) -> Vec<f64> {
        if dim == 0 {
            return Vec::new();
        }
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.standard_normal()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }
}

impl RngCore for RngStream {
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

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

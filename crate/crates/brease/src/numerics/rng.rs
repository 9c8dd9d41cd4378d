//! Deterministic random streams.
//!
//! Every sampler in the crate is a pure function of its arguments and an
//! [`RngStream`]. Streams derived from the same root seed with distinct
//! stream ids are independent, which is how parallel chains and per-stratum
//! samplers get their randomness.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// A seeded, single-owner random stream.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Stream `stream_id` of the generator rooted at `seed`. Distinct ids
    /// yield independent sequences.
    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { seed, rng }
    }

    /// Derive an independent stream from this stream's root seed.
    pub fn substream(&self, stream_id: u64) -> Self {
        Self::with_stream(self.seed, stream_id)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform on (0, 1); never returns exactly zero.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = self.rng.gen::<f64>();
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Standard normal via Marsaglia polar.
    pub fn standard_normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    pub(crate) fn inner(&mut self) -> &mut impl RngCore {
        &mut self.rng
    }
}

//! Seeded randomness.
//!
//! Reductions only ever ask for Bernoulli draws, through [`BernoulliSource`].
//! [`RngStream`] is the sampling implementation; the oracle supplies another
//! one that walks every outcome branch exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Supplier of Bernoulli draws with a runtime-chosen success probability.
///
/// Degenerate probabilities (`q <= 0` or `q >= 1`) are answered without
/// consuming randomness and are not counted.
pub trait BernoulliSource {
    fn bernoulli(&mut self, q: f64) -> bool;

    /// Number of non-degenerate draws taken so far.
    fn draws(&self) -> u64;
}

/// Reproducible stream keyed by `(seed, stream id)`. Distinct stream ids give
/// independent ChaCha streams under the same seed.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
    draws: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream {
            seed,
            stream,
            rng,
            draws: 0,
        }
    }

    /// Independent substream for replicate `index`.
    pub fn substream(&self, index: u64) -> Self {
        RngStream::new(
            self.seed,
            splitmix64(self.stream ^ splitmix64(index.wrapping_add(1))),
        )
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    /// Uniform in `[0, 1)`. Not counted as a Bernoulli draw.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

impl BernoulliSource for RngStream {
    fn bernoulli(&mut self, q: f64) -> bool {
        if q <= 0.0 {
            return false;
        }
        if q >= 1.0 {
            return true;
        }
        self.draws += 1;
        self.rng.random::<f64>() < q
    }

    fn draws(&self) -> u64 {
        self.draws
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The single random stream of a run.
///
/// Every consumer takes its draws from here, in event execution order, so
/// a `(scenario, seed)` pair replays bit for bit.
#[derive(Debug, Clone)]
pub struct SimRng(ChaCha8Rng);

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.0.gen::<f64>()
    }

    /// Always consumes exactly one draw, even for `p` of 0 or 1.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.unit() * (hi - lo)
    }
}

//! Counter-based random streams for reproducible parallel generation.
//!
//! Every window owns an independent stream keyed by (seed, window index), so
//! windows can be generated in any order, on any number of threads, with
//! bit-identical results. The generator is the splitmix64 sequence, which is
//! plenty for Monte Carlo marking decisions and exponential gaps.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct WindowRng {
    state: u64,
}

impl WindowRng {
    /// Stream for one (seed, window) pair.
    pub fn for_window(seed: u64, window_id: u64) -> Self {
        let key = mix64(seed ^ GAMMA).wrapping_add(window_id.wrapping_mul(GAMMA));
        WindowRng { state: mix64(key) }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Exponential variate with the given mean; ln argument stays in (0, 1].
    #[inline]
    pub fn exponential(&mut self, mean: f64) -> f64 {
        -(1.0 - self.uniform()).ln() * mean
    }
}

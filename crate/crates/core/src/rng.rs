//! Counter-based deterministic random streams.
//!
//! Monte Carlo trials must be reproducible independent of execution order and
//! worker count, so every trial draws from its own stream keyed by
//! `(seed, labels...)`. The generator is splitmix64: the state is a plain
//! counter and each output is a finalizer hash of it, so derived streams have
//! no sequential dependence on one another.

use crate::Cplx;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One independent pseudo-random stream.
#[derive(Debug, Clone)]
pub struct SubRng {
    state: u64,
}

impl SubRng {
    /// Stream keyed by `(seed, stream)`.
    pub fn new(seed: u64, stream: u64) -> Self {
        let id = mix(mix(seed ^ GOLDEN) ^ stream.wrapping_mul(0xd134_2543_de82_ef95));
        SubRng { state: id }
    }

    /// Stream keyed by a seed and an arbitrary list of labels
    /// (experiment tag, SNR index, trial id, ...).
    pub fn from_parts(seed: u64, labels: &[u64]) -> Self {
        let mut rng = SubRng::new(seed, 0);
        for &l in labels {
            rng = SubRng::new(rng.state, l);
        }
        rng
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform integer in `[0, n)`.
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Standard normal pair via Box-Muller; consumes exactly two uniforms.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.next_f64(); // (0, 1]
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        (r * t.cos(), r * t.sin())
    }

    /// Circularly-symmetric complex Gaussian with unit variance
    /// (variance 1/2 per real dimension).
    pub fn next_cn01(&mut self) -> Cplx {
        let (a, b) = self.next_gaussian_pair();
        Cplx::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }
}

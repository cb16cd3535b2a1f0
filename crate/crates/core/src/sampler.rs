//! Deterministic i.i.d. TWDP envelope sample generation.
//!
//! Every sample is |V1 e^{j phi1} + V2 e^{j phi2} + X + jY| with phi1 and
//! phi2 drawn independently and uniformly on [0, 2 pi) and X, Y zero-mean
//! Gaussians of variance sigma^2, all fresh per sample.
//!
//! Reproducibility contract (the [`RNG_ALGORITHM`] identifier pins it):
//!
//! * stream cipher ChaCha12, keyed by expanding the 64-bit seed through
//!   four SplitMix64 steps into the 32-byte key;
//! * uniforms u in [0, 1) are `(next_u64() >> 11) * 2^-53`;
//! * per sample, exactly four uniforms are drawn in a fixed order:
//!   phi1 = 2 pi u0, phi2 = 2 pi u1, then a Box-Muller pair from
//!   (u2, u3): z0 = sqrt(-2 ln(1 - u2)) cos(2 pi u3) for X and the sine
//!   twin for Y;
//! * parallel realizations use [`derive_stream_seed`], i.e.
//!   `seed XOR splitmix64(realization_index)`, so streams never overlap
//!   and results do not depend on scheduling.
//!
//! Regenerating with equal (params, n, seed) is bit-for-bit identical.

use crate::error::{Error, Result};
use crate::model::GammaParams;
use crate::numerics::kahan::Accumulator;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use std::f64::consts::TAU;

/// Identifier of the full sampling recipe, recorded in sample metadata.
pub const RNG_ALGORITHM: &str = "chacha12-splitmix64-boxmuller-v1";

/// An immutable batch of envelope samples plus its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
    params: GammaParams,
    seed: u64,
}

impl SampleSet {
    /// Wrap externally obtained envelope values (e.g. parsed from a CSV).
    /// All values must be finite and non-negative.
    pub fn from_values(values: Vec<f64>, params: GammaParams, seed: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("sample set must contain at least one value".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Domain(format!("envelope values must be >= 0, got {bad}")));
        }
        Ok(Self { values, params, seed })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn params(&self) -> &GammaParams {
        &self.params
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Empirical even moments of orders 2, 4 and 6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMoments {
    pub mu2: f64,
    pub mu4: f64,
    pub mu6: f64,
    pub n: usize,
}

/// SplitMix64 mixing step (Steele, Lea, Flood 2014); the standard 64-bit
/// finalizer used both for stream derivation and key expansion.
#[inline]
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for an independent realization stream: `seed ^ splitmix64(index)`.
#[inline]
pub fn derive_stream_seed(seed: u64, realization_index: u64) -> u64 {
    seed ^ splitmix64(realization_index)
}

fn chacha_from_seed(seed: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    let mut state = seed;
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

#[inline]
fn next_unit(rng: &mut ChaCha12Rng) -> f64 {
    // 53 uniform bits in [0, 1)
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draw `n` i.i.d. envelope samples at the given parameter point.
pub fn generate(p: &GammaParams, n: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::Domain("sample count must be >= 1".into()));
    }
    let phys = p.to_physical();
    let sigma = phys.sigma2.sqrt();
    let mut rng = chacha_from_seed(seed);
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let u0 = next_unit(&mut rng);
        let u1 = next_unit(&mut rng);
        let u2 = next_unit(&mut rng);
        let u3 = next_unit(&mut rng);
        let (s1, c1) = (TAU * u0).sin_cos();
        let (s2, c2) = (TAU * u1).sin_cos();
        // 1 - u2 lies in (0, 1], keeping the log finite
        let radius = (-2.0 * (1.0 - u2).ln()).sqrt();
        let (sn, cn) = (TAU * u3).sin_cos();
        let re = phys.v1 * c1 + phys.v2 * c2 + sigma * radius * cn;
        let im = phys.v1 * s1 + phys.v2 * s2 + sigma * radius * sn;
        values.push(re.hypot(im));
    }
    Ok(SampleSet { values, params: *p, seed })
}

/// Empirical moments mu_hat_n = (1/N) sum r_i^n for n in {2, 4, 6}, with
/// compensated accumulation.
pub fn sample_moments(s: &SampleSet) -> SampleMoments {
    moments_of(s.values()).expect("SampleSet is never empty")
}

/// Same as [`sample_moments`] for a bare slice.
pub fn moments_of(values: &[f64]) -> Result<SampleMoments> {
    if values.is_empty() {
        return Err(Error::Domain("cannot form moments of an empty sample".into()));
    }
    let mut m2 = Accumulator::new();
    let mut m4 = Accumulator::new();
    let mut m6 = Accumulator::new();
    for &r in values {
        let r2 = r * r;
        m2.add(r2);
        m4.add(r2 * r2);
        m6.add(r2 * r2 * r2);
    }
    let n = values.len() as f64;
    Ok(SampleMoments {
        mu2: m2.total() / n,
        mu4: m4.total() / n,
        mu6: m6.total() / n,
        n: values.len(),
    })
}

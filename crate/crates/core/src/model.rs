//! TWDP model core: parameterizations, conversions, exact even moments
//! and the envelope PDF.
//!
//! The received envelope is r = |V1 e^{j phi1} + V2 e^{j phi2} + Z| with
//! two constant-magnitude specular components (phases independent and
//! uniform) plus a circular complex Gaussian diffuse term Z of total
//! power 2 sigma^2. Two equivalent parameter tuples describe it:
//!
//! * (K, Gamma, Omega): K = (V1^2 + V2^2) / (2 sigma^2) is the
//!   specular-to-diffuse power ratio, Gamma = V2 / V1 in [0, 1] the
//!   linear specular magnitude ratio, Omega = V1^2 + V2^2 + 2 sigma^2
//!   the mean received power.
//! * (K, Delta, Omega): the conventional tuple with
//!   Delta = 2 V1 V2 / (V1^2 + V2^2) = 2 Gamma / (1 + Gamma^2).
//!
//! Even envelope moments have the closed form (for even n >= 2)
//!
//! ```text
//! mu_n = (n/2)! Omega^{n/2} / (1+K)^{n/2}
//!        * sum_{m=0}^{n/2} C(n/2, m) K^m / m! * A_m(Delta)
//! ```
//!
//! where A_m(Delta) is the angular mean of (1 + Delta cos(theta))^m over
//! a uniform phase difference; see [`angular_factor`]. All sixth-moment
//! ratios in this crate are derived from this single generating formula
//! (the moment formula is the source of truth; every ratio used by the
//! estimators is re-derived from it rather than written out separately).
//!
//! The envelope PDF is evaluated as the exact specular-phase-conditioned
//! Rician mixture
//!
//! ```text
//! f(r) = (1/pi) * Int_0^pi (r / sigma^2)
//!        * exp(-(r^2 + W(a)^2) / (2 sigma^2)) * I0(r W(a) / sigma^2) da,
//! W(a)^2 = V1^2 + V2^2 + 2 V1 V2 cos(a)
//! ```
//!
//! by adaptive quadrature, which trades a series-truncation policy for a
//! single quadrature tolerance.

use crate::error::{Error, Result};
use crate::numerics::bessel::i0e;
use crate::numerics::combin::{binomial, factorial};
use crate::numerics::quad;

/// Absolute tolerance for angular (phase) integrals.
pub const ANGULAR_TOL: f64 = 1e-10;
/// Absolute tolerance for integrals of the PDF over the envelope.
pub const PDF_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------
// parameter tuples
// ---------------------------------------------------------------------

/// The (K, Gamma, Omega) parameter tuple. Invariants are enforced at
/// construction: K >= 0, 0 <= Gamma <= 1, Omega > 0, all finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    k: f64,
    gamma: f64,
    omega: f64,
}

impl GammaParams {
    pub fn new(k: f64, gamma: f64, omega: f64) -> Result<Self> {
        if !k.is_finite() || k < 0.0 {
            return Err(Error::Domain(format!("K must be finite and >= 0, got {k}")));
        }
        if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("Gamma must lie in [0, 1], got {gamma}")));
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::Domain(format!("Omega must be finite and > 0, got {omega}")));
        }
        Ok(Self { k, gamma, omega })
    }

    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Delta value of the same physical point.
    pub fn delta(&self) -> f64 {
        gamma_to_delta(self.gamma).expect("gamma validated at construction")
    }

    pub fn to_delta_params(&self) -> DeltaParams {
        DeltaParams { k: self.k, delta: self.delta(), omega: self.omega }
    }

    /// Invert (K, Gamma, Omega) to the underlying (V1, V2, sigma^2).
    pub fn to_physical(&self) -> PhysicalComponents {
        let sigma2 = self.omega / (2.0 * (1.0 + self.k));
        let v1 = (2.0 * sigma2 * self.k / (1.0 + self.gamma * self.gamma)).sqrt();
        PhysicalComponents { v1, v2: self.gamma * v1, sigma2 }
    }

    /// Single-specular Rician factor of the first component,
    /// K_Rice = V1^2 / (2 sigma^2), so that K = K_Rice (1 + Gamma^2).
    pub fn k_rice(&self) -> KRiceDecomposition {
        KRiceDecomposition { k_rice: self.k / (1.0 + self.gamma * self.gamma) }
    }
}

/// The conventional (K, Delta, Omega) tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaParams {
    k: f64,
    delta: f64,
    omega: f64,
}

impl DeltaParams {
    pub fn new(k: f64, delta: f64, omega: f64) -> Result<Self> {
        if !k.is_finite() || k < 0.0 {
            return Err(Error::Domain(format!("K must be finite and >= 0, got {k}")));
        }
        if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
            return Err(Error::Domain(format!("Delta must lie in [0, 1], got {delta}")));
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::Domain(format!("Omega must be finite and > 0, got {omega}")));
        }
        Ok(Self { k, delta, omega })
    }

    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn to_gamma_params(&self) -> GammaParams {
        GammaParams {
            k: self.k,
            gamma: delta_to_gamma(self.delta).expect("delta validated at construction"),
            omega: self.omega,
        }
    }
}

/// Underlying physical description (V1, V2, sigma^2), with the ordering
/// convention 0 <= V2 <= V1 so that Gamma lies in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalComponents {
    pub v1: f64,
    pub v2: f64,
    pub sigma2: f64,
}

impl PhysicalComponents {
    pub fn new(v1: f64, v2: f64, sigma2: f64) -> Result<Self> {
        if !(v1.is_finite() && v2.is_finite()) || v1 < 0.0 || v2 < 0.0 || v2 > v1 {
            return Err(Error::Domain(format!(
                "specular magnitudes must satisfy 0 <= v2 <= v1, got v1={v1}, v2={v2}"
            )));
        }
        if !sigma2.is_finite() || sigma2 <= 0.0 {
            return Err(Error::Domain(format!("sigma2 must be finite and > 0, got {sigma2}")));
        }
        Ok(Self { v1, v2, sigma2 })
    }

    /// Forward map to (K, Gamma, Omega). Gamma is defined as 0 when both
    /// specular magnitudes vanish (K = 0 leaves it unidentifiable).
    pub fn to_params(&self) -> GammaParams {
        let spec = self.v1 * self.v1 + self.v2 * self.v2;
        let gamma = if self.v1 == 0.0 { 0.0 } else { self.v2 / self.v1 };
        GammaParams {
            k: spec / (2.0 * self.sigma2),
            gamma,
            omega: spec + 2.0 * self.sigma2,
        }
    }
}

/// First-component Rician factor; K = k_rice * (1 + Gamma^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KRiceDecomposition {
    pub k_rice: f64,
}

/// A set of exact even envelope moments.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet {
    orders: Vec<u32>,
    values: Vec<f64>,
}

impl MomentSet {
    /// Build from explicit orders/values; orders must be even, strictly
    /// increasing, and every value positive.
    pub fn new(orders: Vec<u32>, values: Vec<f64>) -> Result<Self> {
        if orders.is_empty() || orders.len() != values.len() {
            return Err(Error::Domain("orders and values must be non-empty and parallel".into()));
        }
        for w in orders.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Domain("orders must be strictly increasing".into()));
            }
        }
        for &n in &orders {
            if n == 0 || n % 2 != 0 {
                return Err(Error::Domain(format!("orders must be even and positive, got {n}")));
            }
        }
        for &v in &values {
            if !(v > 0.0) {
                return Err(Error::Domain(format!("moment values must be positive, got {v}")));
            }
        }
        Ok(Self { orders, values })
    }

    /// Exact moments of the given even orders at a parameter point.
    pub fn exact(p: &GammaParams, orders: &[u32]) -> Result<Self> {
        let values = orders.iter().map(|&n| even_moment(n, p)).collect::<Result<Vec<_>>>()?;
        Self::new(orders.to_vec(), values)
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, order: u32) -> Option<f64> {
        self.orders.iter().position(|&n| n == order).map(|i| self.values[i])
    }
}

// ---------------------------------------------------------------------
// conversions
// ---------------------------------------------------------------------

/// Delta = 2 Gamma / (1 + Gamma^2). Strictly increasing on [0, 1].
pub fn gamma_to_delta(gamma: f64) -> Result<f64> {
    if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    Ok(2.0 * gamma / (1.0 + gamma * gamma))
}

/// Gamma = (1 - sqrt(1 - Delta^2)) / Delta, computed in the equivalent
/// cancellation-free form Delta / (1 + sqrt(1 - Delta^2)), which also
/// absorbs the removable singularity at Delta = 0.
pub fn delta_to_gamma(delta: f64) -> Result<f64> {
    if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("delta must lie in [0, 1], got {delta}")));
    }
    Ok(delta / (1.0 + (1.0 - delta * delta).max(0.0).sqrt()))
}

/// K = K_Rice * (1 + Gamma^2).
pub fn k_from_k_rice(k_rice: f64, gamma: f64) -> Result<f64> {
    if !k_rice.is_finite() || k_rice < 0.0 {
        return Err(Error::Domain(format!("k_rice must be finite and >= 0, got {k_rice}")));
    }
    if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    Ok(k_rice * (1.0 + gamma * gamma))
}

// ---------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------

/// Angular factor A_m(Delta): the mean of (1 + Delta cos(theta))^m over
/// theta uniform on [0, 2 pi), in closed form
///
/// ```text
/// A_m(Delta) = sum_{i=0}^{floor(m/2)} C(m, 2i) C(2i, i) (Delta/2)^{2i}
/// ```
///
/// (odd powers of cos average to zero; even powers contribute central
/// binomial terms).
pub fn angular_factor(m: u32, delta: f64) -> f64 {
    let half = delta / 2.0;
    let mut acc = 0.0;
    for i in 0..=(m / 2) {
        acc += binomial(m, 2 * i) * binomial(2 * i, i) * half.powi(2 * i as i32);
    }
    acc
}

/// Exact even moment mu_n = E[r^n] for even n >= 2.
pub fn even_moment(n: u32, p: &GammaParams) -> Result<f64> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::Domain(format!(
            "moment order must be even and positive (n/2 must be a natural number), got {n}"
        )));
    }
    let half = n / 2;
    let delta = p.delta();
    let k = p.k();
    let mut sum = 0.0;
    for m in 0..=half {
        sum += binomial(half, m) * k.powi(m as i32) / factorial(m) * angular_factor(m, delta);
    }
    Ok(factorial(half) * (p.omega() / (1.0 + k)).powi(half as i32) * sum)
}

/// The ratio pair (mu4 / mu2^2, mu6 / mu2^3) at (K, Gamma). Omega cancels
/// in both ratios, so the computation fixes Omega = 1 internally.
pub fn moment_ratios(k: f64, gamma: f64) -> Result<(f64, f64)> {
    let p = GammaParams::new(k, gamma, 1.0)?;
    let mu2 = even_moment(2, &p)?;
    let mu4 = even_moment(4, &p)?;
    let mu6 = even_moment(6, &p)?;
    Ok((mu4 / (mu2 * mu2), mu6 / (mu2 * mu2 * mu2)))
}

// ---------------------------------------------------------------------
// envelope PDF
// ---------------------------------------------------------------------

/// Rician density in r for a fixed coherent specular magnitude w, written
/// with the scaled Bessel function so large arguments do not overflow:
/// (r/s2) exp(-(r-w)^2 / (2 s2)) * e^{-rw/s2} I0(r w / s2).
#[inline]
pub(crate) fn rician_pdf_phys(r: f64, w: f64, sigma2: f64) -> f64 {
    let dev = r - w;
    (r / sigma2) * (-dev * dev / (2.0 * sigma2)).exp() * i0e(r * w / sigma2)
}

/// Envelope density f(r) as the exact mixture of Rician densities over
/// the uniform specular phase difference.
pub fn envelope_pdf(r: f64, p: &GammaParams) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!("envelope value must be >= 0, got {r}")));
    }
    let phys = p.to_physical();
    envelope_pdf_phys(r, &phys)
}

pub(crate) fn envelope_pdf_phys(r: f64, phys: &PhysicalComponents) -> Result<f64> {
    let PhysicalComponents { v1, v2, sigma2 } = *phys;
    if v2 == 0.0 {
        // no second specular component: plain Rician (Rayleigh when v1 = 0)
        return Ok(rician_pdf_phys(r, v1, sigma2));
    }
    let base = v1 * v1 + v2 * v2;
    let q = quad::integrate(
        |alpha| {
            let w2 = base + 2.0 * v1 * v2 * alpha.cos();
            rician_pdf_phys(r, w2.max(0.0).sqrt(), sigma2)
        },
        0.0,
        std::f64::consts::PI,
        ANGULAR_TOL,
    )?;
    Ok(q.value / std::f64::consts::PI)
}

/// Truncation radius for integrals of the PDF over r: largest specular
/// sum plus the mean-power scale plus 12 diffuse standard deviations,
/// where the Gaussian tail factor is below 1e-14 by a wide margin.
pub fn pdf_r_max(p: &GammaParams) -> f64 {
    let phys = p.to_physical();
    p.omega().sqrt() + phys.v1 + phys.v2 + 12.0 * phys.sigma2.sqrt()
}

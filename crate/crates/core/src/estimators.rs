//! Closed-form moment-based estimators of (K, Gamma) and the
//! conventional Delta, from empirical moments of orders 2, 4 and 6.
//!
//! With mu2, mu4, mu6 the sample moments, K_hat solves the cubic
//! K^3 + a1 K^2 + a2 K + a3 = 0 whose coefficients are
//!
//! ```text
//! a1 = (6 mu6 - 30 mu4 mu2 + 24 mu2^3) / D
//! a2 = (6 mu6 - 42 mu4 mu2 + 48 mu2^3) / D
//! a3 = (2 mu6 - 18 mu4 mu2 + 24 mu2^3) / D
//! D  = 2 mu6 -  6 mu4 mu2 +  4 mu2^3
//! ```
//!
//! The root is taken through the Cardano form with
//! p = (9 a1 a2 - 27 a3 - 2 a1^3)/54 and q = (3 a2 - a1^2)/9: for
//! p^2 + q^3 >= 0 the real-branch cube-root sum, otherwise -- three real
//! roots -- the trigonometric evaluation of the same formula under
//! principal complex cube roots, which is the largest real root. On exact
//! moments that root carries the true K, and it is the only root for
//! which the companion Gamma_hat below is real and inside [0, 1].
//!
//! Given K_hat, let S = (mu4 / mu2^2)(K_hat + 1)^2 - K_hat^2 - 4 K_hat - 2.
//! Then Delta_hat = sqrt(2 S) / K_hat (the conventional estimator,
//! deliberately left unclamped so values above one stay observable) and
//!
//! ```text
//! Gamma_hat = (K_hat - sqrt(K_hat^2 - 2 S)) / sqrt(2 S)
//! ```
//!
//! with two data-driven failure modes reported as statuses rather than
//! errors: S <= 0 (no resolvable second specular component; Gamma_hat
//! clamped to 0) and 2 S > K_hat^2 (raw Delta_hat > 1; Gamma_hat clamped
//! to 1). The latter is counted so the frequency of the nonphysical
//! Delta_hat > 1 events stays measurable.

use crate::error::{Error, Result};
use crate::numerics::cubic;
use crate::sampler::{sample_moments, SampleMoments, SampleSet};
use std::fmt;

/// Relative threshold below which the shared denominator D is treated as
/// singular (scaled by mu2^3, the natural size of its terms).
pub const DENOMINATOR_GUARD: f64 = 1e-14;

/// Residual bound the returned cubic root must satisfy:
/// |K^3 + a1 K^2 + a2 K + a3| <= 1e-8 * max(1, |a3|).
pub const ROOT_RESIDUAL_BOUND: f64 = 1e-8;

/// Outcome classification for an estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateStatus {
    /// Estimates produced without clamping.
    Ok,
    /// The moment cubic has no positive real root.
    KNoPositiveRoot,
    /// |D| fell below the guard; no estimate is possible.
    DenominatorSingular,
    /// S <= 0: Gamma_hat and Delta_hat clamped to 0.
    SNonpositiveGammaClampedZero,
    /// Raw Delta_hat exceeded one: Gamma_hat clamped to 1.
    DeltaExceedsUnityGammaClampedOne,
}

impl EstimateStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimateStatus::Ok => "ok",
            EstimateStatus::KNoPositiveRoot => "k_no_positive_root",
            EstimateStatus::DenominatorSingular => "denominator_singular",
            EstimateStatus::SNonpositiveGammaClampedZero => "s_nonpositive_gamma_clamped_zero",
            EstimateStatus::DeltaExceedsUnityGammaClampedOne => {
                "delta_exceeds_unity_gamma_clamped_one"
            }
        }
    }

    /// Hard failure: no usable estimates at all.
    pub fn is_failure(&self) -> bool {
        matches!(self, EstimateStatus::KNoPositiveRoot | EstimateStatus::DenominatorSingular)
    }

    /// A clamp was applied to keep Gamma_hat inside [0, 1].
    pub fn is_clamp(&self) -> bool {
        matches!(
            self,
            EstimateStatus::SNonpositiveGammaClampedZero
                | EstimateStatus::DeltaExceedsUnityGammaClampedOne
        )
    }
}

impl fmt::Display for EstimateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Coefficients of the moment cubic together with the Cardano helpers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub p: f64,
    pub q: f64,
}

/// Joint estimation outcome. Fields are `None` when the corresponding
/// estimate could not be formed (hard failures).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub k_hat: Option<f64>,
    pub gamma_hat: Option<f64>,
    /// Conventional Delta estimate (unclamped above one, zero when S <= 0).
    pub delta_hat: Option<f64>,
    /// sqrt(2 S) / K_hat exactly as computed, before any clamping.
    pub raw_delta_hat: Option<f64>,
    pub status: EstimateStatus,
}

impl EstimateResult {
    fn failed(status: EstimateStatus) -> Self {
        Self { k_hat: None, gamma_hat: None, delta_hat: None, raw_delta_hat: None, status }
    }
}

/// Cubic coefficients from sample moments.
pub fn cubic_coefficients(m: &SampleMoments) -> Result<CubicCoefficients> {
    let (mu2, mu4, mu6) = (m.mu2, m.mu4, m.mu6);
    let mu2_3 = mu2 * mu2 * mu2;
    let d = 2.0 * mu6 - 6.0 * mu4 * mu2 + 4.0 * mu2_3;
    if d.abs() < DENOMINATOR_GUARD * mu2_3.abs() || !d.is_finite() {
        return Err(Error::Singular(format!(
            "moment denominator D = {d:e} is below the guard {:e}",
            DENOMINATOR_GUARD * mu2_3.abs()
        )));
    }
    let a1 = (6.0 * mu6 - 30.0 * mu4 * mu2 + 24.0 * mu2_3) / d;
    let a2 = (6.0 * mu6 - 42.0 * mu4 * mu2 + 48.0 * mu2_3) / d;
    let a3 = (2.0 * mu6 - 18.0 * mu4 * mu2 + 24.0 * mu2_3) / d;
    let (p, q) = cubic::depressed(a1, a2, a3);
    Ok(CubicCoefficients { a1, a2, a3, p, q })
}

/// K estimate: the principal real root of the moment cubic.
///
/// A root at exactly zero (the Rayleigh boundary) is reported as a valid
/// estimate 0.0; a largest root that is genuinely negative means the
/// moments are incompatible with any K >= 0 and yields
/// [`EstimateStatus::KNoPositiveRoot`].
pub fn estimate_k(m: &SampleMoments) -> (Option<f64>, EstimateStatus) {
    let coeff = match cubic_coefficients(m) {
        Ok(c) => c,
        Err(_) => return (None, EstimateStatus::DenominatorSingular),
    };
    let root = cubic::principal_real_root(coeff.a1, coeff.a2, coeff.a3);
    if !root.is_finite() {
        return (None, EstimateStatus::KNoPositiveRoot);
    }
    if root > 0.0 {
        (Some(root), EstimateStatus::Ok)
    } else if root > -1e-9 * (1.0 + coeff.a1.abs()) {
        // rounding-level negative root: the boundary estimate K = 0
        (Some(0.0), EstimateStatus::Ok)
    } else {
        (None, EstimateStatus::KNoPositiveRoot)
    }
}

/// Gamma estimate with its clamp statuses and the raw Delta value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEstimate {
    pub gamma_hat: f64,
    pub raw_delta_hat: f64,
    pub status: EstimateStatus,
}

pub fn estimate_gamma(m: &SampleMoments, k_hat: f64) -> Result<GammaEstimate> {
    if !(k_hat > 0.0) {
        return Err(Error::Domain(format!("estimate_gamma needs k_hat > 0, got {k_hat}")));
    }
    let s = s_statistic(m, k_hat);
    if s <= 0.0 {
        return Ok(GammaEstimate {
            gamma_hat: 0.0,
            raw_delta_hat: 0.0,
            status: EstimateStatus::SNonpositiveGammaClampedZero,
        });
    }
    let two_s = 2.0 * s;
    let raw_delta_hat = two_s.sqrt() / k_hat;
    if raw_delta_hat > 1.0 {
        return Ok(GammaEstimate {
            gamma_hat: 1.0,
            raw_delta_hat,
            status: EstimateStatus::DeltaExceedsUnityGammaClampedOne,
        });
    }
    let inner = (k_hat * k_hat - two_s).max(0.0);
    let gamma_hat = ((k_hat - inner.sqrt()) / two_s.sqrt()).min(1.0);
    Ok(GammaEstimate { gamma_hat, raw_delta_hat, status: EstimateStatus::Ok })
}

/// Conventional Delta estimate, sqrt(2 S) / K_hat, unclamped above one.
pub fn estimate_delta_conventional(
    m: &SampleMoments,
    k_hat: f64,
) -> Result<(f64, EstimateStatus)> {
    if !(k_hat > 0.0) {
        return Err(Error::Domain(format!(
            "estimate_delta_conventional needs k_hat > 0, got {k_hat}"
        )));
    }
    let s = s_statistic(m, k_hat);
    if s <= 0.0 {
        return Ok((0.0, EstimateStatus::SNonpositiveGammaClampedZero));
    }
    Ok(((2.0 * s).sqrt() / k_hat, EstimateStatus::Ok))
}

/// S = (mu4 / mu2^2) (K + 1)^2 - K^2 - 4 K - 2.
#[inline]
fn s_statistic(m: &SampleMoments, k: f64) -> f64 {
    let r4 = m.mu4 / (m.mu2 * m.mu2);
    r4 * (k + 1.0) * (k + 1.0) - k * k - 4.0 * k - 2.0
}

/// Full pipeline moments -> K_hat -> (Gamma_hat, Delta_hat).
pub fn estimate_joint_from_moments(m: &SampleMoments) -> EstimateResult {
    let (k_hat, status) = estimate_k(m);
    let k_hat = match k_hat {
        Some(k) => k,
        None => return EstimateResult::failed(status),
    };
    if k_hat == 0.0 {
        // the second specular component is unidentifiable at K = 0
        return EstimateResult {
            k_hat: Some(0.0),
            gamma_hat: Some(0.0),
            delta_hat: Some(0.0),
            raw_delta_hat: Some(0.0),
            status: EstimateStatus::SNonpositiveGammaClampedZero,
        };
    }
    let g = estimate_gamma(m, k_hat).expect("k_hat > 0 by construction");
    // the conventional estimate shares S, so it is raw Delta when S > 0
    let delta_hat = match g.status {
        EstimateStatus::SNonpositiveGammaClampedZero => 0.0,
        _ => g.raw_delta_hat,
    };
    EstimateResult {
        k_hat: Some(k_hat),
        gamma_hat: Some(g.gamma_hat),
        delta_hat: Some(delta_hat),
        raw_delta_hat: Some(g.raw_delta_hat),
        status: g.status,
    }
}

/// Estimate from raw samples (at least 3 needed to carry three moments).
pub fn estimate_joint(s: &SampleSet) -> Result<EstimateResult> {
    if s.len() < 3 {
        return Err(Error::Domain(format!(
            "joint estimation needs at least 3 samples, got {}",
            s.len()
        )));
    }
    Ok(estimate_joint_from_moments(&sample_moments(s)))
}

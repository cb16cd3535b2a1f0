//! Factorials and binomial coefficients in f64.
//!
//! Exact integer arithmetic (u128) is used as long as it cannot overflow;
//! larger arguments fall back to log-space sums. Moment computations in
//! this crate need factorials only up to order/2 of the highest moment
//! (order 12 for the covariance machinery), so the exact path is the one
//! that actually runs; the log path is headroom.

/// n! as f64. Exact for n <= 33 (fits in u128), log-space above.
pub fn factorial(n: u32) -> f64 {
    if n <= 33 {
        let mut acc: u128 = 1;
        for i in 2..=n as u128 {
            acc *= i;
        }
        acc as f64
    } else {
        ln_factorial(n).exp()
    }
}

/// ln(n!) by direct summation. Accurate to a few ulps times n.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// C(n, k) as f64. Exact via u128 multiplicative form while it fits.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 62 {
        // c stays integral after each division: c = C(n, i) at step i
        let mut c: u128 = 1;
        for i in 1..=k as u128 {
            c = c * (n as u128 - k as u128 + i) / i;
        }
        c as f64
    } else {
        (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
    }
}

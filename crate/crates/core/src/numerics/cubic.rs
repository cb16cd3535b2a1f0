//! Real roots of the monic cubic x^3 + a1 x^2 + a2 x + a3.
//!
//! The estimator pipeline consumes the root through the classic Cardano
//! reduction: with p = (9 a1 a2 - 27 a3 - 2 a1^3)/54 and
//! q = (3 a2 - a1^2)/9 the substitution x = t - a1/3 yields
//! t^3 + 3 q t - 2 p = 0. For p^2 + q^3 >= 0 the real-branch Cardano sum
//! of cube roots gives the single real root. For p^2 + q^3 < 0 (three
//! real roots) evaluating that same sum with *principal complex* cube
//! roots gives 2 sqrt(-q) cos(acos(p / sqrt(-q^3)) / 3), which is the
//! largest of the three; the trigonometric form below computes all of
//! them without complex arithmetic. Every root is finished with a few
//! Newton steps so residuals sit at rounding level.

/// Cardano helper quantities (p, q) for x^3 + a1 x^2 + a2 x + a3.
#[inline]
pub fn depressed(a1: f64, a2: f64, a3: f64) -> (f64, f64) {
    let p = (9.0 * a1 * a2 - 27.0 * a3 - 2.0 * a1 * a1 * a1) / 54.0;
    let q = (3.0 * a2 - a1 * a1) / 9.0;
    (p, q)
}

#[inline]
fn eval(a1: f64, a2: f64, a3: f64, x: f64) -> f64 {
    ((x + a1) * x + a2) * x + a3
}

fn polish(a1: f64, a2: f64, a3: f64, mut x: f64) -> f64 {
    for _ in 0..8 {
        let f = eval(a1, a2, a3, x);
        let df = (3.0 * x + 2.0 * a1) * x + a2;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// All real roots, sorted descending. Returns (count, roots); unused
/// slots are NaN.
pub fn real_roots(a1: f64, a2: f64, a3: f64) -> (usize, [f64; 3]) {
    let (p, q) = depressed(a1, a2, a3);
    let disc = p * p + q * q * q;
    let shift = a1 / 3.0;
    let mut out = [f64::NAN; 3];
    if disc >= 0.0 {
        let s = disc.sqrt();
        let t = (p + s).cbrt() + (p - s).cbrt();
        out[0] = polish(a1, a2, a3, t - shift);
        if disc == 0.0 && (p != 0.0 || q != 0.0) {
            // double root at -t/2
            out[1] = polish(a1, a2, a3, -0.5 * t - shift);
            let (r0, r1) = (out[0], out[1]);
            out[0] = r0.max(r1);
            out[1] = r0.min(r1);
            return (2, out);
        }
        (1, out)
    } else {
        // three distinct real roots; q < 0 is implied by disc < 0
        let m = (-q).sqrt();
        let psi = (p / (m * m * m)).clamp(-1.0, 1.0).acos() / 3.0;
        for (k, slot) in out.iter_mut().enumerate() {
            let angle = psi - 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            *slot = polish(a1, a2, a3, 2.0 * m * angle.cos() - shift);
        }
        out.sort_by(|x, y| y.total_cmp(x));
        (3, out)
    }
}

/// The root the principal-branch Cardano formula evaluates to: the single
/// real root when p^2 + q^3 >= 0, the largest real root otherwise.
pub fn principal_real_root(a1: f64, a2: f64, a3: f64) -> f64 {
    let (_, roots) = real_roots(a1, a2, a3);
    roots[0]
}

//! Small dense 3x3 helpers for the covariance / Fisher machinery.

use crate::error::{Error, Result};

pub type Mat3 = [[f64; 3]; 3];

pub fn quadratic_form(m: &Mat3, v: &[f64; 3]) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += v[i] * m[i][j] * v[j];
        }
    }
    acc
}

pub fn frobenius(m: &Mat3) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn det(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse by cofactor expansion.
pub fn invert(m: &Mat3) -> Result<Mat3> {
    let d = det(m);
    if d == 0.0 || !d.is_finite() {
        return Err(Error::Singular(format!("3x3 determinant {d}")));
    }
    let inv_det = 1.0 / d;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let r0 = (i + 1) % 3;
            let r1 = (i + 2) % 3;
            let c0 = (j + 1) % 3;
            let c1 = (j + 2) % 3;
            // transposed cofactor
            out[j][i] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) * inv_det;
        }
    }
    Ok(out)
}

/// Frobenius-norm condition estimate ||A|| * ||A^-1||.
pub fn condition(m: &Mat3) -> Result<f64> {
    let inv = invert(m)?;
    Ok(frobenius(m) * frobenius(&inv))
}

/// Eigenvalues of a symmetric 3x3, descending. Uses the characteristic
/// cubic, whose roots are guaranteed real for symmetric input.
pub fn sym_eigenvalues(m: &Mat3) -> [f64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let d = det(m);
    // lambda^3 - tr lambda^2 + minors lambda - det = 0
    let (n, roots) = super::cubic::real_roots(-tr, minors, -d);
    match n {
        3 => [roots[0], roots[1], roots[2]],
        2 => [roots[0], roots[1], roots[1]],
        _ => [roots[0], roots[0], roots[0]],
    }
}

//! Numerical kernels shared across the crate: scaled Bessel I0, adaptive
//! Gauss-Kronrod quadrature, real cubic roots, compensated summation and
//! 3x3 linear algebra.

pub mod bessel;
pub mod combin;
pub mod cubic;
pub mod kahan;
pub mod linalg3;
pub mod quad;

//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.
//!
//! A single rule evaluation produces the 15-point Kronrod estimate and the
//! embedded 7-point Gauss estimate; their difference is the (conservative)
//! error indicator. Adaptation keeps a worst-first heap of segments and
//! bisects until the summed indicator meets the absolute tolerance.
//!
//! Integrands may be vector-valued (`[f64; M]`): all components share one
//! subdivision, with the error indicator taken component-wise maximal.
//! That is what the Fisher-matrix assembly wants -- six coupled entries
//! integrated over the same envelope grid.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// QUADPACK QK15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_3,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

pub const DEFAULT_MAX_SEGMENTS: usize = 4096;

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
}

struct Segment<const M: usize> {
    a: f64,
    b: f64,
    value: [f64; M],
    err: f64,
}

impl<const M: usize> PartialEq for Segment<M> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<const M: usize> Eq for Segment<M> {}
impl<const M: usize> PartialOrd for Segment<M> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const M: usize> Ord for Segment<M> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15_rule<const M: usize, F: Fn(f64) -> [f64; M]>(f: &F, a: f64, b: f64) -> Segment<M> {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);

    let mut kronrod = [0.0_f64; M];
    let mut gauss = [0.0_f64; M];

    let fc = f(center);
    for m in 0..M {
        kronrod[m] = WGK[7] * fc[m];
        gauss[m] = WG[3] * fc[m];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let fl = f(center - dx);
        let fr = f(center + dx);
        for m in 0..M {
            let pair = fl[m] + fr[m];
            kronrod[m] += WGK[j] * pair;
            if j % 2 == 1 {
                gauss[m] += WG[j / 2] * pair;
            }
        }
    }

    let mut err = 0.0_f64;
    let mut value = [0.0_f64; M];
    for m in 0..M {
        value[m] = kronrod[m] * half;
        err = err.max((kronrod[m] - gauss[m]).abs() * half.abs());
    }
    Segment { a, b, value, err }
}

/// Integrate a vector-valued function over [a, b] to the given absolute
/// tolerance (component-wise). Returns the component integrals and the
/// final summed error indicator.
pub fn integrate_vec<const M: usize, F: Fn(f64) -> [f64; M]>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Result<([f64; M], f64)> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Domain(format!("bad integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(([0.0; M], 0.0));
    }

    let mut heap: BinaryHeap<Segment<M>> = BinaryHeap::new();
    heap.push(gk15_rule(&f, a, b));
    let mut total_err: f64 = heap.peek().map(|s| s.err).unwrap_or(0.0);

    while total_err > abs_tol && heap.len() < max_segments {
        let worst = heap.pop().expect("heap non-empty");
        // an interval too narrow to split means the tolerance is below
        // what f64 resolution supports here
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            total_err = worst.err + heap.iter().map(|s| s.err).sum::<f64>();
            heap.push(worst);
            break;
        }
        let left = gk15_rule(&f, worst.a, mid);
        let right = gk15_rule(&f, mid, worst.b);
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }

    if total_err > abs_tol && heap.len() >= max_segments {
        return Err(Error::Numerical(format!(
            "quadrature did not converge: error {total_err:.3e} > tol {abs_tol:.3e} \
             after {} segments on [{a}, {b}]",
            heap.len()
        )));
    }

    // final pass: compensated per-component totals, in a deterministic order
    let mut segments: Vec<Segment<M>> = heap.into_vec();
    segments.sort_by(|s, t| s.a.total_cmp(&t.a));
    let mut value = [0.0_f64; M];
    for m in 0..M {
        let mut acc = super::kahan::Accumulator::new();
        for s in &segments {
            acc.add(s.value[m]);
        }
        value[m] = acc.total();
    }
    let mut err_acc = super::kahan::Accumulator::new();
    for s in &segments {
        err_acc.add(s.err);
    }
    Ok((value, err_acc.total()))
}

/// Scalar adaptive integral over [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
    let (v, e) = integrate_vec(|x| [f(x)], a, b, abs_tol, DEFAULT_MAX_SEGMENTS)?;
    Ok(Quadrature { value: v[0], abs_error: e })
}

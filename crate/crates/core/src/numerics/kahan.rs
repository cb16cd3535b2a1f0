//! Compensated (Neumaier) summation.

/// Running sum with first-order error compensation.
///
/// Used wherever the spec of an aggregate promises error-free-transform
/// accumulation (sample moments, sweep statistics), so that results do
/// not depend on harmless reorderings of equal work.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice.
pub fn sum(values: &[f64]) -> f64 {
    let mut acc = Accumulator::new();
    for &v in values {
        acc.add(v);
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation() {
        // 1 + 1e100 - 1e100 + ... naive summation loses the ones
        let mut acc = Accumulator::new();
        for _ in 0..10 {
            acc.add(1.0);
            acc.add(1e100);
            acc.add(-1e100);
        }
        assert_eq!(acc.total(), 10.0);
    }

    #[test]
    fn matches_naive_on_benign_input() {
        let xs: Vec<f64> = (1..=1000).map(|i| (i as f64).sqrt()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((sum(&xs) - naive).abs() < 1e-9);
    }
}

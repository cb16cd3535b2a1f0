//! Distributional checks for the sample generator: Kolmogorov-Smirnov
//! tests against the closed-form limiting cases and moment agreement
//! against the exact even moments.

use twdp_core::model::{even_moment, GammaParams};
use twdp_core::numerics::bessel::i0e;
use twdp_core::numerics::kahan::Accumulator;
use twdp_core::perf::moment_covariance;
use twdp_core::sampler::{generate, sample_moments};

/// One-sample KS statistic against a CDF given at the sorted sample
/// points.
fn ks_statistic(sorted_cdf: &[f64]) -> f64 {
    let n = sorted_cdf.len() as f64;
    let mut d = 0.0_f64;
    for (i, &f) in sorted_cdf.iter().enumerate() {
        let lo = f - i as f64 / n;
        let hi = (i + 1) as f64 / n - f;
        d = d.max(lo.max(hi));
    }
    d
}

/// Critical value at significance 0.01 (asymptotic, Stephens correction).
fn ks_critical_001(n: usize) -> f64 {
    let n = n as f64;
    1.627_624 / (n.sqrt() + 0.12 + 0.11 / n.sqrt())
}

#[test]
fn rayleigh_limit_passes_ks() {
    let p = GammaParams::new(0.0, 0.0, 1.0).unwrap();
    let n = 100_000;
    let s = generate(&p, n, 20_260_810).unwrap();
    let mut values = s.values().to_vec();
    values.sort_by(f64::total_cmp);
    // Rayleigh with E r^2 = Omega: F(r) = 1 - exp(-r^2 / Omega)
    let cdf: Vec<f64> = values.iter().map(|&r| 1.0 - (-r * r).exp()).collect();
    let d = ks_statistic(&cdf);
    let crit = ks_critical_001(n);
    assert!(d < crit, "KS statistic {d:.5} exceeds critical value {crit:.5}");
}

#[test]
fn gamma_zero_matches_rician_cdf() {
    // Gamma = 0 is a pure Rician channel with matched (V1, sigma); the
    // CDF is accumulated segment-wise with a fixed 15-point rule per
    // gap between consecutive sorted samples.
    let p = GammaParams::new(3.0, 0.0, 1.0).unwrap();
    let phys = p.to_physical();
    let n = 100_000;
    let s = generate(&p, n, 77).unwrap();
    let mut values = s.values().to_vec();
    values.sort_by(f64::total_cmp);

    let pdf = |r: f64| {
        let dev = r - phys.v1;
        (r / phys.sigma2) * (-dev * dev / (2.0 * phys.sigma2)).exp()
            * i0e(r * phys.v1 / phys.sigma2)
    };
    // Gauss-Legendre 5-point on each inter-sample gap is far below the
    // KS resolution of ~1/sqrt(n)
    const GL_X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const GL_W: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let mut acc = Accumulator::new();
    let mut prev = 0.0_f64;
    let mut cdf = Vec::with_capacity(n);
    for &r in &values {
        let half = 0.5 * (r - prev);
        let mid = 0.5 * (r + prev);
        if half > 0.0 {
            let mut seg = 0.0;
            for j in 0..5 {
                seg += GL_W[j] * pdf(mid + half * GL_X[j]);
            }
            acc.add(seg * half);
        }
        prev = r;
        cdf.push(acc.total());
    }
    let d = ks_statistic(&cdf);
    let crit = ks_critical_001(n);
    assert!(d < crit, "KS statistic {d:.5} exceeds critical value {crit:.5}");
}

#[test]
fn sample_moments_match_exact_moments_within_4_se() {
    let n = 200_000;
    for (idx, &(k, g)) in [(0.0, 0.0), (3.0, 0.0), (5.0, 0.5), (10.0, 1.0)].iter().enumerate() {
        let p = GammaParams::new(k, g, 1.0).unwrap();
        let s = generate(&p, n, 9000 + idx as u64).unwrap();
        let m = sample_moments(&s);
        let cov = moment_covariance(&p).unwrap().matrix;
        let exact: Vec<f64> =
            [2u32, 4, 6].iter().map(|&o| even_moment(o, &p).unwrap()).collect();
        for (j, &hat) in [m.mu2, m.mu4, m.mu6].iter().enumerate() {
            let se = (cov[j][j] / n as f64).sqrt();
            let dev = (hat - exact[j]).abs();
            assert!(
                dev <= 4.0 * se,
                "K={k} G={g} order {}: |{hat} - {}| = {dev:.3e} > 4 se = {:.3e}",
                2 * (j + 1),
                exact[j],
                4.0 * se
            );
        }
    }
}

#[test]
fn mean_power_large_sample() {
    // at (K=5, Gamma=0.5, Omega=2) the sample mean power must sit within
    // four standard errors of Omega
    let p = GammaParams::new(5.0, 0.5, 2.0).unwrap();
    let n = 1_000_000;
    let s = generate(&p, n, 31).unwrap();
    let m = sample_moments(&s);
    let cov = moment_covariance(&p).unwrap().matrix;
    let se = (cov[0][0] / n as f64).sqrt();
    assert!((m.mu2 - 2.0).abs() <= 4.0 * se, "mu2 {} vs 2 (se {se:.3e})", m.mu2);
}

//! Goodness-of-fit tests with asymptotic p-values.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// `Q_KS(λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let t = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += sign * t;
        if t < 1e-17 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_p(d: f64, en: f64) -> f64 {
    kolmogorov_q((en + 0.12 + 0.11 / en) * d)
}

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> TestResult {
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in x.iter().enumerate() {
        let f = cdf(v);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    TestResult { statistic: d, p_value: ks_p(d, n.sqrt()) }
}

/// Two-sample Kolmogorov-Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> TestResult {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    TestResult { statistic: d, p_value: ks_p(d, (n * m / (n + m)).sqrt()) }
}

/// Pearson chi-square; `ddof` extra degrees of freedom are removed beyond the usual one.
pub fn chi_square(observed: &[u64], expected: &[f64], ddof: usize) -> TestResult {
    let stat: f64 = observed.iter().zip(expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum();
    let df = (observed.len() - 1 - ddof) as f64;
    let p = 1.0 - ChiSquared::new(df).expect("positive degrees of freedom").cdf(stat);
    TestResult { statistic: stat, p_value: p }
}

fn ad_inf(z: f64) -> f64 {
    if z < 2.0 {
        (-1.2337141 / z).exp() / z.sqrt()
            * (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z)
    } else {
        (-(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z).exp()).exp()
    }
}

fn ad_errfix(n: f64, x: f64) -> f64 {
    if x > 0.8 {
        return (-130.2137 + (745.2337 - (1705.091 - (1950.646 - (1116.360 - 255.7844 * x) * x) * x) * x) * x) / n;
    }
    let c = 0.01265 + 0.1757 / n;
    if x < c {
        let t = x / c;
        let t = t.sqrt() * (1.0 - t) * (49.0 * t - 102.0);
        return t * (0.0037 / (n * n) + 0.00078 / n + 0.00006) / n;
    }
    let t = (x - c) / (0.8 - c);
    let t = -0.00022633 + (6.54034 - (14.6538 - (14.458 - (8.259 - 1.91864 * t) * t) * t) * t) * t;
    t * (0.04213 / n + 0.01365) / n
}

/// Anderson-Darling test against a fully specified continuous CDF
/// (Marsaglia & Marsaglia's asymptotic form with the finite-`n` correction).
pub fn anderson_darling<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> TestResult {
    let mut u: Vec<f64> = samples.iter().map(|&x| cdf(x).clamp(1e-300, 1.0 - 1e-16)).collect();
    u.sort_by(f64::total_cmp);
    let n = u.len();
    let nf = n as f64;
    let s: f64 = (0..n)
        .map(|i| (2.0 * i as f64 + 1.0) * (u[i].ln() + (1.0 - u[n - 1 - i]).ln()))
        .sum();
    let a2 = -nf - s / nf;
    let x = ad_inf(a2);
    let cdf_val = (x + ad_errfix(nf, x)).clamp(0.0, 1.0);
    TestResult { statistic: a2, p_value: 1.0 - cdf_val }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Sample mean and unbiased variance.
pub fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
    (m, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::RngStream;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn ad_reference_points() {
        // asymptotic A² quantiles: 2.492 ↔ 0.95, 3.857 ↔ 0.99
        assert!((ad_inf(2.492) - 0.95).abs() < 1e-3);
        assert!((ad_inf(3.857) - 0.99).abs() < 1e-3);
    }

    #[test]
    fn tests_accept_the_truth_and_reject_a_shift() {
        let mut rng = RngStream::new(1, 0).generator();
        let x: Vec<f64> = (0..20_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        assert!(anderson_darling(&x, normal_cdf).p_value > 0.001);
        assert!(ks_one_sample(&x, normal_cdf).p_value > 0.001);
        let shifted: Vec<f64> = x.iter().map(|v| v + 0.05).collect();
        assert!(anderson_darling(&shifted, normal_cdf).p_value < 0.001);
        assert!(ks_two_sample(&x[..10_000], &shifted[10_000..]).p_value < 0.05);
        let y: Vec<f64> = (0..10_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        assert!(ks_two_sample(&x, &y).p_value > 0.001);
    }

    #[test]
    fn chi_square_uniform() {
        let mut rng = RngStream::new(2, 0).generator();
        let mut counts = vec![0u64; 20];
        for _ in 0..20_000 {
            counts[(rng.random::<f64>() * 20.0) as usize] += 1;
        }
        assert!(chi_square(&counts, &[1000.0; 20], 0).p_value > 0.001);
    }

    #[test]
    fn kolmogorov_known_value() {
        // Q(1.36) ≈ 0.0494
        assert!((kolmogorov_q(1.36) - 0.0494).abs() < 5e-4);
    }
}

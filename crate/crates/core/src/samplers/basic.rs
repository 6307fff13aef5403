use super::FrequencySample;
use crate::models::{KummerParams, MaternParams};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// Uniform direction on `S^{d-1}`: a normalized standard normal vector.
pub fn sample_sphere<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    assert!(dim >= 1, "dimension must be positive");
    loop {
        let z: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n2: f64 = z.iter().map(|v| v * v).sum();
        if n2 > 0.0 {
            let inv = 1.0 / n2.sqrt();
            return z.into_iter().map(|v| v * inv).collect();
        }
    }
}

fn scaled_normal<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> FrequencySample {
    let omega = (0..dim)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            z * scale
        })
        .collect();
    FrequencySample { omega }
}

/// `Ω = Z / (α √(2T))`, `T ~ Gamma(ν, 1)`.
pub fn sample_matern_freq<R: Rng + ?Sized>(p: &MaternParams, dim: usize, rng: &mut R) -> FrequencySample {
    let t: f64 = Gamma::new(p.nu, 1.0).expect("ν > 0").sample(rng);
    scaled_normal(dim, 1.0 / (p.alpha * (2.0 * t).sqrt()), rng)
}

/// `Ω = Z / (β √(X/Y))`, `X ~ Gamma(ν, 1)`, `Y ~ Gamma(μ, 1)`.
pub fn sample_kummer_freq<R: Rng + ?Sized>(p: &KummerParams, dim: usize, rng: &mut R) -> FrequencySample {
    let x: f64 = Gamma::new(p.nu, 1.0).expect("ν > 0").sample(rng);
    let y: f64 = Gamma::new(p.mu, 1.0).expect("μ > 0").sample(rng);
    scaled_normal(dim, (y / x).sqrt() / p.beta, rng)
}

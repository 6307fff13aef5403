//! Spectral turning-bands synthesis.
//!
//! Components are drawn one RNG stream per index, so the component table for a
//! given seed does not depend on how the work is scheduled. Synthesis is
//! parallel over locations with a fixed per-location summation order.

mod io;

pub use io::{read_binary, read_csv, write_binary, write_csv, FieldMetadata, ModelRecord};

use crate::models::CorrelationModel;
use crate::samplers::{uniform_pos, FrequencySampler, GHAlgorithm, RngStream};
use crate::Error;
use rand::Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Default number of spectral components.
pub const DEFAULT_COMPONENTS: usize = 1000;

/// `n` points in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Locations {
    dim: usize,
    coords: Vec<f64>,
}

impl Locations {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::Input(format!("{} coordinates do not split into rows of {dim}", coords.len())));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Input("non-finite coordinate".into()));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, Error> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(1);
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            coords.extend_from_slice(r);
        }
        Self::new(dim, coords)
    }

    /// `n` points uniform on the box `[lo, hi]^d`.
    pub fn uniform(n: usize, dim: usize, lo: f64, hi: f64, seed: u64) -> Result<Self, Error> {
        if !(hi > lo) {
            return Err(Error::Input(format!("empty box [{lo}, {hi}]")));
        }
        let mut rng = RngStream::new(seed, u64::MAX).generator();
        let coords = (0..n * dim).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
        Self::new(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Same points shifted by `v`.
    pub fn translated(&self, v: &[f64]) -> Result<Self, Error> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let coords = self.coords.chunks_exact(self.dim).flat_map(|r| r.iter().zip(v).map(|(a, b)| a + b)).collect();
        Self::new(self.dim, coords)
    }
}

/// One random wave `amp · cos(Ω·s + Φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralComponent {
    pub omega: Vec<f64>,
    pub phase: f64,
    pub amp: f64,
}

/// Component `index` of the table for `seed`: `Ω`, then `Φ`, then `ε`, all from stream `index`.
pub fn draw_component(
    sampler: &FrequencySampler,
    num_components: usize,
    seed: u64,
    index: usize,
) -> Result<SpectralComponent, Error> {
    let mut rng = RngStream::new(seed, index as u64).generator();
    let omega = sampler.sample(&mut rng)?.omega;
    let phase = 2.0 * PI * rng.random::<f64>();
    let eps = uniform_pos(&mut rng);
    let amp = (-2.0 * eps.ln() / num_components as f64).sqrt();
    Ok(SpectralComponent { omega, phase, amp })
}

/// `L` components drawn with a prebuilt sampler.
pub fn build_components_with(
    sampler: &FrequencySampler,
    num_components: usize,
    seed: u64,
) -> Result<Vec<SpectralComponent>, Error> {
    if num_components == 0 {
        return Err(Error::Input("the number of spectral components must be at least 1".into()));
    }
    (0..num_components).into_par_iter().map(|i| draw_component(sampler, num_components, seed, i)).collect()
}

pub fn build_components(
    model: &CorrelationModel,
    dim: usize,
    num_components: usize,
    seed: u64,
) -> Result<Vec<SpectralComponent>, Error> {
    build_components_with(&FrequencySampler::new(model, dim)?, num_components, seed)
}

#[derive(Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum + self.c
    }
}

/// `√sill · Σ_ℓ amp_ℓ cos(Ω_ℓ·s + Φ_ℓ)` at every location.
pub fn synthesize(components: &[SpectralComponent], locations: &Locations, sill: f64) -> Result<Vec<f64>, Error> {
    let d = locations.dim();
    if let Some(c) = components.iter().find(|c| c.omega.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: c.omega.len() });
    }
    if !(sill > 0.0) {
        return Err(Error::Input(format!("sill must be positive (got {sill})")));
    }
    let omega: Vec<f64> = components.iter().flat_map(|c| c.omega.iter().copied()).collect();
    let sigma = sill.sqrt();
    let value = |s: &[f64]| {
        let mut acc = Neumaier::default();
        for (c, w) in components.iter().zip(omega.chunks_exact(d)) {
            let dot: f64 = w.iter().zip(s).map(|(a, b)| a * b).sum();
            acc.add(c.amp * (dot + c.phase).cos());
        }
        sigma * acc.total()
    };
    Ok(locations.coords().par_chunks_exact(d).with_min_len(256).map(value).collect())
}

/// A simulated field together with everything needed to reproduce it.
#[derive(Debug, Clone)]
pub struct FieldRealization {
    pub locations: Locations,
    pub values: Vec<f64>,
    pub model: CorrelationModel,
    pub num_components: usize,
    pub seed: u64,
    pub sampler: String,
}

pub fn simulate(
    model: &CorrelationModel,
    dim: usize,
    locations: &Locations,
    num_components: usize,
    seed: u64,
) -> Result<FieldRealization, Error> {
    simulate_with(model, dim, locations, num_components, seed, GHAlgorithm::Auto)
}

/// [`simulate`] with an explicit choice of GH sampler.
pub fn simulate_with(
    model: &CorrelationModel,
    dim: usize,
    locations: &Locations,
    num_components: usize,
    seed: u64,
    algorithm: GHAlgorithm,
) -> Result<FieldRealization, Error> {
    if locations.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: locations.dim() });
    }
    let sampler = FrequencySampler::with_algorithm(model, dim, algorithm)?;
    let components = build_components_with(&sampler, num_components, seed)?;
    let values = synthesize(&components, locations, model.sill)?;
    Ok(FieldRealization {
        locations: locations.clone(),
        values,
        model: *model,
        num_components,
        seed,
        sampler: sampler.name().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{GHParams, MaternParams};

    fn matern() -> CorrelationModel {
        CorrelationModel::matern(MaternParams::new(0.5, 0.2).unwrap(), 2.0).unwrap()
    }

    #[test]
    fn constant_wave() {
        let c = vec![SpectralComponent { omega: vec![0.0, 0.0], phase: 0.0, amp: 1.3 }];
        let locs = Locations::uniform(10, 2, 0.0, 1.0, 1).unwrap();
        let v = synthesize(&c, &locs, 4.0).unwrap();
        assert!(v.iter().all(|&x| x == 2.0 * 1.3));
    }

    #[test]
    fn single_component_amplitude() {
        let sampler = FrequencySampler::new(&matern(), 2).unwrap();
        let c = build_components_with(&sampler, 1, 3).unwrap();
        let mut rng = RngStream::new(3, 0).generator();
        let _ = sampler.sample(&mut rng).unwrap();
        let _: f64 = rng.random();
        let eps = uniform_pos(&mut rng);
        assert_eq!(c[0].amp, (-2.0 * eps.ln()).sqrt());
    }

    #[test]
    fn rejects_mismatches() {
        let locs = Locations::uniform(3, 3, 0.0, 1.0, 1).unwrap();
        assert!(matches!(simulate(&matern(), 2, &locs, 10, 1), Err(Error::DimensionMismatch { .. })));
        assert!(build_components(&matern(), 2, 0, 1).is_err());
        assert!(Locations::from_rows(&[vec![0.0, 1.0], vec![2.0]]).is_err());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let gw = CorrelationModel::gauss_hyper(GHParams::wendland(1.0, 7.0, 0.2, 2).unwrap(), 1.0).unwrap();
        let locs = Locations::uniform(2000, 2, 0.0, 1.0, 9).unwrap();
        let a = simulate(&gw, 2, &locs, 200, 42).unwrap().values;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| simulate(&gw, 2, &locs, 200, 42).unwrap().values);
        assert_eq!(a, b);
        let c = simulate(&gw, 2, &locs, 200, 43).unwrap().values;
        assert_ne!(a, c);
    }

    #[test]
    fn dispatch_by_region() {
        let s2 = CorrelationModel::gauss_hyper(GHParams::wendland(1.0, 7.0, 0.1, 2).unwrap(), 1.0).unwrap();
        let s6 = CorrelationModel::gauss_hyper(GHParams::wendland(1.0, 3.0, 0.1, 2).unwrap(), 1.0).unwrap();
        assert_eq!(FrequencySampler::new(&s2, 2).unwrap().name(), "beta-mixture");
        assert_eq!(FrequencySampler::new(&s6, 2).unwrap().name(), "gasper-mixture");
        let forced = FrequencySampler::with_algorithm(&s2, 2, GHAlgorithm::Gasper).unwrap();
        assert_eq!(forced.name(), "gasper-mixture");
        assert!(FrequencySampler::with_algorithm(&s6, 2, GHAlgorithm::BetaMixture).is_err());
    }
}

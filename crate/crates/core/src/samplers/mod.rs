//! Exact frequency samplers for every correlation family.
//!
//! Matérn and Kummer-Tricomi frequencies are Gaussian scale mixtures and need
//! no rejection step. GH frequencies go through one of two mixture
//! representations, both ending in a body/tail rejection sampler for a
//! squared-Bessel auxiliary density:
//!
//! * the Beta mixture, `R = T/(a√(UV))` with a universal `T`;
//! * the Gasper mixture, `R = T_N/a` with a random index `N`.

mod basic;
mod beta;
pub mod envelope;
mod gasper;
mod large_order;
mod rng;
mod universal;

pub use basic::{sample_kummer_freq, sample_matern_freq, sample_sphere};
pub use beta::{beta_mixture_shapes, ln_mixture_constant, sample_gh_beta_freq, BetaMixtureSampler};
pub use envelope::{BesselPowerDensity, BesselPowerSampler, RejectionEnvelope};
pub use large_order::LargeOrderSampler;
pub use gasper::{
    build_gasper_weights, build_gasper_weights_capped, gasper_component_T_density, gasper_component_params,
    gasper_component_radial_density, gh_radial_density_gasper, ln_component_constant, ln_gh_spectral_constant,
    sample_gh_gasper_freq, GasperSampler, GasperWeightTable, ENVELOPE_TERMS, DEFAULT_TRUNCATION_TOL,
    MAX_WEIGHTS,
};
pub use rng::{uniform_pos, RngStream};
pub use universal::{
    build_universal_T_envelope, ln_base_constant, measured_acceptance, sample_universal_T, universal_T_density,
    universal_T_params, universal_T_sampler,
};

use crate::models::{gh_classify_region, CorrelationModel, GHParams, ModelKind, RegionClass};
use crate::Error;
use rand::Rng;
use std::fmt;

/// A random angular frequency `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySample {
    pub omega: Vec<f64>,
}

impl FrequencySample {
    pub fn radius(&self) -> f64 {
        self.omega.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

/// Which GH representation to sample from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GHAlgorithm {
    /// Beta mixture where the region allows it, Gasper otherwise.
    #[default]
    Auto,
    BetaMixture,
    Gasper,
}

impl GHAlgorithm {
    pub fn resolve(self, p: &GHParams) -> Result<GHAlgorithm, Error> {
        match (self, gh_classify_region(p)) {
            (_, RegionClass::Invalid) => {
                Err(Error::InvalidModel(crate::models::gh_validity_violation(p).unwrap_or_default()))
            }
            (GHAlgorithm::Auto, RegionClass::ValidBetaMixture) => Ok(GHAlgorithm::BetaMixture),
            (GHAlgorithm::Auto, RegionClass::ValidGasperOnly) => Ok(GHAlgorithm::Gasper),
            (other, _) => Ok(other),
        }
    }
}

/// Frequency sampler for a whole model, with any envelopes or tables built once.
#[derive(Debug)]
pub enum FrequencySampler {
    Matern(crate::models::MaternParams, usize),
    Kummer(crate::models::KummerParams, usize),
    BetaMixture(BetaMixtureSampler),
    Gasper(GasperSampler),
}

impl FrequencySampler {
    pub fn new(model: &CorrelationModel, dim: usize) -> Result<Self, Error> {
        Self::with_algorithm(model, dim, GHAlgorithm::Auto)
    }

    pub fn with_algorithm(model: &CorrelationModel, dim: usize, algo: GHAlgorithm) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        Ok(match model.kind {
            ModelKind::Matern(p) => FrequencySampler::Matern(p, dim),
            ModelKind::Kummer(p) => FrequencySampler::Kummer(p, dim),
            ModelKind::GaussHyper(p) => {
                if p.dim != dim {
                    return Err(Error::DimensionMismatch { expected: p.dim, got: dim });
                }
                match algo.resolve(&p)? {
                    GHAlgorithm::Gasper => FrequencySampler::Gasper(GasperSampler::new(p)?),
                    _ => FrequencySampler::BetaMixture(BetaMixtureSampler::new(p)?),
                }
            }
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            FrequencySampler::Matern(_, d) | FrequencySampler::Kummer(_, d) => *d,
            FrequencySampler::BetaMixture(s) => s.params.dim,
            FrequencySampler::Gasper(s) => s.params.dim,
        }
    }

    /// Short name used in logs: `gaussian-scale-mixture`, `beta-prime-mixture`,
    /// `beta-mixture` or `gasper-mixture`.
    pub fn name(&self) -> &'static str {
        match self {
            FrequencySampler::Matern(..) => "gaussian-scale-mixture",
            FrequencySampler::Kummer(..) => "beta-prime-mixture",
            FrequencySampler::BetaMixture(_) => "beta-mixture",
            FrequencySampler::Gasper(_) => "gasper-mixture",
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<FrequencySample, Error> {
        match self {
            FrequencySampler::Matern(p, d) => Ok(sample_matern_freq(p, *d, rng)),
            FrequencySampler::Kummer(p, d) => Ok(sample_kummer_freq(p, *d, rng)),
            FrequencySampler::BetaMixture(s) => s.sample(rng),
            FrequencySampler::Gasper(s) => s.sample(rng),
        }
    }
}

impl fmt::Display for FrequencySampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

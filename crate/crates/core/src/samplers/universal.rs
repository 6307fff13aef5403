//! The auxiliary variable `T = bR` of the base Hypergeometric kernel. Its law
//! depends on `(ν, d)` only.

#![allow(non_snake_case)]

use super::envelope::{build_envelope, BesselPowerDensity, BesselPowerSampler, RejectionEnvelope};
use super::RngStream;
use crate::specialfn::{lgam, ln_sphere_area};
use crate::Error;
use std::f64::consts::{LN_2, PI};

/// `ln C_H(ν, d)`.
pub fn ln_base_constant(nu: f64, dim: usize) -> f64 {
    let d = dim as f64;
    lgam((d + 1.0) / 2.0 + nu) + lgam(1.0 + nu) + lgam(d / 2.0 + 1.0 + 2.0 * nu)
        - d * LN_2
        - 0.5 * d * PI.ln()
        - lgam(0.5 + nu)
        - lgam(d / 2.0 + 1.0 + nu)
        - lgam(d + 1.0 + 2.0 * nu)
}

/// `f_T` as a squared-Bessel density: `t^{−1−2ν} J²_{d/2+ν}(t/2)` up to a constant.
pub fn universal_T_params(nu: f64, dim: usize) -> Result<BesselPowerDensity, Error> {
    if !(nu > -0.5) || dim == 0 {
        return Err(Error::InvalidModel(format!("universal T needs ν > -1/2 and d ≥ 1 (got ν={nu}, d={dim})")));
    }
    let delta = (dim as f64 + 1.0) / 2.0 + nu;
    let ln_k = ln_sphere_area(dim)
        + ln_base_constant(nu, dim)
        + 2.0 * lgam(delta + 0.5)
        + (2.0 * delta - 1.0) * 4f64.ln();
    Ok(BesselPowerDensity { ln_k, p: -1.0 - 2.0 * nu, m: delta - 0.5, dim })
}

pub fn universal_T_density(t: f64, nu: f64, dim: usize) -> f64 {
    match universal_T_params(nu, dim) {
        Ok(f) => f.pdf(t),
        Err(_) => f64::NAN,
    }
}

pub fn build_universal_T_envelope(nu: f64, dim: usize) -> Result<RejectionEnvelope, Error> {
    build_envelope(&universal_T_params(nu, dim)?)
}

/// Envelope-backed sampler for `T`.
pub fn universal_T_sampler(nu: f64, dim: usize) -> Result<BesselPowerSampler, Error> {
    BesselPowerSampler::new(universal_T_params(nu, dim)?)
}

/// Draw from `f_T` with a prebuilt envelope; also returns the number of proposals used.
pub fn sample_universal_T(
    envelope: &RejectionEnvelope,
    nu: f64,
    dim: usize,
    rng: &mut impl rand::Rng,
) -> Result<(f64, u64), Error> {
    let density = universal_T_params(nu, dim)?;
    if envelope.dim != dim || (envelope.tail_exponent - density.tail_exponent()).abs() > 1e-12 {
        return Err(Error::Envelope(format!("envelope was built for another (ν, d); expected d={dim}")));
    }
    BesselPowerSampler { density, envelope: *envelope }.sample(rng)
}

/// Convenience for diagnostics: measured acceptance over `n` draws.
pub fn measured_acceptance(sampler: &BesselPowerSampler, n: usize, stream: RngStream) -> Result<f64, Error> {
    let mut rng = stream.generator();
    let mut proposals = 0u64;
    for _ in 0..n {
        proposals += sampler.sample(&mut rng)?.1;
    }
    Ok(n as f64 / proposals as f64)
}

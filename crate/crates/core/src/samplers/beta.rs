//! GH frequencies through the two-stage Beta mixture of base kernels with
//! random support `b = a√(UV)`.

use super::envelope::BesselPowerSampler;
use super::universal::universal_T_sampler;
use super::{sample_sphere, FrequencySample};
use crate::models::{gh_classify_region, GHParams, RegionClass};
use crate::specialfn::lgam;
use crate::Error;
use rand::Rng;
use rand_distr::{Beta, Distribution};

/// Shape parameters `(1+ν, μ/2−1/2)` and `(d/2+2ν+1, μ/2−d/2−1/2−ν+l)`.
pub fn beta_mixture_shapes(p: &GHParams) -> ((f64, f64), (f64, f64)) {
    let d = p.dim as f64;
    (
        (1.0 + p.nu, p.mu / 2.0 - 0.5),
        (d / 2.0 + 2.0 * p.nu + 1.0, p.mu / 2.0 - d / 2.0 - 0.5 - p.nu + p.l),
    )
}

/// `ln M(ν, μ, l, d)` in its Gamma-ratio form.
pub fn ln_mixture_constant(p: &GHParams) -> f64 {
    let d = p.dim as f64;
    let (nu, mu, l) = (p.nu, p.mu, p.l);
    lgam(nu + mu / 2.0 + 0.5) + lgam(nu + mu / 2.0 + 0.5 + l)
        - lgam(nu + 1.0)
        - lgam(d / 2.0 + 2.0 * nu + 1.0)
        - lgam(mu / 2.0 - 0.5)
        - lgam(mu / 2.0 - d / 2.0 - 0.5 - nu + l)
}

#[derive(Debug, Clone)]
pub struct BetaMixtureSampler {
    pub params: GHParams,
    pub t_sampler: BesselPowerSampler,
    u: Beta<f64>,
    v: Beta<f64>,
}

impl BetaMixtureSampler {
    pub fn new(params: GHParams) -> Result<Self, Error> {
        let region = gh_classify_region(&params);
        if region != RegionClass::ValidBetaMixture {
            return Err(Error::Region(format!(
                "Beta-mixture sampler needs μ > 1 and μ/2 − d/2 − 1/2 − ν + l > 0; parameters are {region}"
            )));
        }
        let ((a1, b1), (a2, b2)) = beta_mixture_shapes(&params);
        let u = Beta::new(a1, b1).map_err(|e| Error::Region(e.to_string()))?;
        let v = Beta::new(a2, b2).map_err(|e| Error::Region(e.to_string()))?;
        Ok(Self { t_sampler: universal_T_sampler(params.nu, params.dim)?, params, u, v })
    }

    /// Spectral radius `T/(a√(UV))` and the proposals spent on `T`.
    pub fn sample_radius<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(f64, u64), Error> {
        let (t, k) = self.t_sampler.sample(rng)?;
        let u = self.u.sample(rng);
        let v = self.v.sample(rng);
        Ok((t / (self.params.a * (u * v).sqrt()), k))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<FrequencySample, Error> {
        let (r, _) = self.sample_radius(rng)?;
        let mut omega = sample_sphere(self.params.dim, rng);
        omega.iter_mut().for_each(|w| *w *= r);
        Ok(FrequencySample { omega })
    }
}

/// One-shot draw; builds the envelope on every call, so prefer [`BetaMixtureSampler`] in loops.
pub fn sample_gh_beta_freq<R: Rng + ?Sized>(params: &GHParams, rng: &mut R) -> Result<FrequencySample, Error> {
    BetaMixtureSampler::new(*params)?.sample(rng)
}

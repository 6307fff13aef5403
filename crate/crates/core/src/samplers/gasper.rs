//! GH frequencies through the Gasper expansion: a discrete index `N` with
//! weights `w_n`, then `T` from the squared-Bessel component `f_T^{(N)}`, and
//! `R = T/a`.

use super::envelope::{BesselPowerDensity, BesselPowerSampler};
use super::{sample_sphere, FrequencySample};
use crate::models::{gh_is_valid, GHParams};
use crate::specialfn::{gasper_coefficients, lgam, ln_sphere_area};
use crate::Error;
use rand::Rng;
use std::f64::consts::{LN_2, PI};
use super::large_order::LargeOrderSampler;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Default residual mass at which the weight series is cut.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-10;
/// Hard cap on the number of weights of a strict table.
pub const MAX_WEIGHTS: usize = 100_000;
/// Components below this index use the body/tail envelope; higher ones use
/// the large-order envelope.
pub const ENVELOPE_TERMS: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct GasperWeightTable {
    pub weights: Vec<f64>,
    pub eta: f64,
    /// `1 − Σ w_n` of the retained weights.
    pub truncation_mass: f64,
    /// Indices whose weight came out slightly negative and was set to 0.
    pub clamped: Vec<usize>,
}

impl GasperWeightTable {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Cumulative weights normalized to end at exactly 1.
    pub fn normalized_cumulative(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        let mut acc = 0.0;
        let mut out: Vec<f64> = self
            .weights
            .iter()
            .map(|w| {
                acc += w;
                acc / total
            })
            .collect();
        if let Some(last) = out.last_mut() {
            *last = 1.0;
        }
        out
    }
}

/// `ln C_H(η+n−d/2, d, n)`, the normalizer of the `n`-th component.
pub fn ln_component_constant(n: usize, eta: f64, dim: usize) -> f64 {
    let d = dim as f64;
    let n = n as f64;
    lgam(d / 2.0) + lgam(0.5 + eta + n) + lgam(1.0 + eta - d / 2.0) + lgam(1.0 + 2.0 * eta + n - d / 2.0)
        - (d + 2.0 * n) * LN_2
        - 0.5 * d * PI.ln()
        - lgam(d / 2.0 + n)
        - lgam(0.5 + eta - d / 2.0)
        - lgam(1.0 + eta + n)
        - lgam(1.0 + 2.0 * eta + 2.0 * n)
}

/// `ln L(δ, β, γ)`, the normalizer of the GH radial spectral density.
pub fn ln_gh_spectral_constant(p: &GHParams) -> f64 {
    let h = p.dim as f64 / 2.0;
    let (delta, beta, gamma) = (p.delta(), p.beta_c(), p.gamma_c());
    lgam(delta) + lgam(beta - h) + lgam(gamma - h)
        - 2.0 * h * LN_2
        - h * PI.ln()
        - lgam(delta - h)
        - lgam(beta)
        - lgam(gamma)
}

fn check_component_domain(eta: f64, dim: usize) -> Result<(), Error> {
    let alpha = 2.0 * eta + 1.0 - dim as f64;
    if !(alpha > 0.0) {
        return Err(Error::InvalidModel(format!(
            "Gasper components need a positive tail exponent 2η + 1 − d (got {alpha} with η={eta}, d={dim})"
        )));
    }
    Ok(())
}

fn weights_upto(p: &GHParams, n_max: usize) -> Result<(Vec<f64>, Vec<usize>), Error> {
    if !gh_is_valid(p) {
        return Err(Error::InvalidModel(format!("parameters outside the GH validity region: {p:?}")));
    }
    let eta = p.eta();
    check_component_domain(eta, p.dim)?;
    let coef = gasper_coefficients(n_max, p.delta(), p.beta_c(), p.gamma_c());
    let ln_l = ln_gh_spectral_constant(p);
    let mut w = Vec::with_capacity(n_max + 1);
    let mut clamped = Vec::new();
    for (n, &c) in coef.iter().enumerate() {
        let nf = n as f64;
        let ln_rest = ln_l + 2.0 * lgam(eta + 1.0) - 4.0 * nf * LN_2 - 2.0 * lgam(eta + nf + 1.0)
            - ln_component_constant(n, eta, p.dim)
            + ((2.0 * nf + 2.0 * eta) / (nf + 2.0 * eta)).ln()
            + lgam(2.0 * eta + 1.0 + nf)
            - lgam(2.0 * eta + 1.0)
            - lgam(nf + 1.0);
        let v = c * ln_rest.exp();
        if v < 0.0 {
            clamped.push(n);
            w.push(0.0);
        } else {
            w.push(v);
        }
    }
    Ok((w, clamped))
}

/// Weights up to the smallest `N` whose residual mass is below `truncation_tol`.
///
/// Fails with [`Error::Truncation`] when [`MAX_WEIGHTS`] terms do not suffice;
/// for `ν` near 0 the residual decays only like `1/N`.
pub fn build_gasper_weights(params: &GHParams, truncation_tol: f64) -> Result<GasperWeightTable, Error> {
    let (w, clamped) = weights_upto(params, MAX_WEIGHTS - 1)?;
    let mut acc = 0.0;
    for (n, &v) in w.iter().enumerate() {
        acc += v;
        if 1.0 - acc < truncation_tol {
            return Ok(GasperWeightTable {
                weights: w[..=n].to_vec(),
                eta: params.eta(),
                truncation_mass: (1.0 - acc).max(0.0),
                clamped: clamped.into_iter().filter(|&k| k <= n).collect(),
            });
        }
    }
    Err(Error::Truncation { terms: w.len(), residual: 1.0 - acc })
}

/// Weights `w_0..w_{terms-1}`, stopping earlier if the residual mass drops below `truncation_tol`.
pub fn build_gasper_weights_capped(
    params: &GHParams,
    truncation_tol: f64,
    terms: usize,
) -> Result<GasperWeightTable, Error> {
    let terms = terms.max(1);
    let (w, clamped) = weights_upto(params, terms - 1)?;
    let mut acc = 0.0;
    let mut end = w.len();
    for (n, &v) in w.iter().enumerate() {
        acc += v;
        if 1.0 - acc < truncation_tol {
            end = n + 1;
            break;
        }
    }
    Ok(GasperWeightTable {
        weights: w[..end].to_vec(),
        eta: params.eta(),
        truncation_mass: (1.0 - acc).max(0.0),
        clamped: clamped.into_iter().filter(|&k| k < end).collect(),
    })
}

/// `f_T^{(n)}` as a squared-Bessel density.
pub fn gasper_component_params(n: usize, eta: f64, dim: usize) -> Result<BesselPowerDensity, Error> {
    check_component_domain(eta, dim)?;
    let m = eta + n as f64;
    let ln_k = ln_sphere_area(dim) + ln_component_constant(n, eta, dim) + (2.0 * m) * 4f64.ln() + 2.0 * lgam(1.0 + m);
    Ok(BesselPowerDensity { ln_k, p: dim as f64 - 1.0 - 2.0 * eta, m, dim })
}

#[allow(non_snake_case)]
pub fn gasper_component_T_density(t: f64, n: usize, eta: f64, dim: usize) -> f64 {
    match gasper_component_params(n, eta, dim) {
        Ok(f) => f.pdf(t),
        Err(_) => f64::NAN,
    }
}

/// `g^{(n)}(r) = a^d C_H,n 4^{2η+2n} Γ²(1+η+n) (ar)^{−2η} J²_{η+n}(ar/2)`.
pub fn gasper_component_radial_density(n: usize, eta: f64, a: f64, dim: usize, r: f64) -> f64 {
    let m = eta + n as f64;
    let x = 0.5 * a * r;
    let ln_pref = dim as f64 * a.ln() + ln_component_constant(n, eta, dim) + 2.0 * m * 4f64.ln() + 2.0 * lgam(1.0 + m);
    if x == 0.0 {
        // (ar)^{−2η} J_m² → 4^{−2η} δ_{n0} / Γ(1+η)²
        return if n == 0 { (ln_pref - 2.0 * eta * 4f64.ln() - 2.0 * lgam(1.0 + eta)).exp() } else { 0.0 };
    }
    (ln_pref - 2.0 * eta * (a * r).ln() + 2.0 * super::envelope::ln_abs_bessel_j(m, x)).exp()
}

/// `Σ w_n g^{(n)}(r)`, skipping components that have become negligible at this radius.
pub fn gh_radial_density_gasper(table: &GasperWeightTable, params: &GHParams, r: f64) -> f64 {
    let x = 0.5 * params.a * r;
    let mut sum = 0.0;
    for (n, &w) in table.weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let term = w * gasper_component_radial_density(n, table.eta, params.a, params.dim, r);
        sum += term;
        if (n as f64) > x + 40.0 && term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Index sampling plus cached per-index rejection samplers.
#[derive(Debug)]
pub struct GasperSampler {
    pub params: GHParams,
    pub table: GasperWeightTable,
    cumulative: Vec<f64>,
    components: Vec<OnceLock<Result<BesselPowerSampler, String>>>,
    large: RwLock<HashMap<usize, Arc<LargeOrderSampler>>>,
}

impl GasperSampler {
    /// Table cut at [`DEFAULT_TRUNCATION_TOL`] or [`MAX_WEIGHTS`] terms, renormalized.
    pub fn new(params: GHParams) -> Result<Self, Error> {
        Self::with_table(params, build_gasper_weights_capped(&params, DEFAULT_TRUNCATION_TOL, MAX_WEIGHTS)?)
    }

    pub fn with_table(params: GHParams, table: GasperWeightTable) -> Result<Self, Error> {
        if table.is_empty() || !(table.weights.iter().sum::<f64>() > 0.0) {
            return Err(Error::InvalidModel("empty Gasper weight table".into()));
        }
        check_component_domain(table.eta, params.dim)?;
        let cumulative = table.normalized_cumulative();
        let components = (0..table.len().min(ENVELOPE_TERMS)).map(|_| OnceLock::new()).collect();
        Ok(Self { params, table, cumulative, components, large: RwLock::new(HashMap::new()) })
    }

    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1)
    }

    /// Body/tail sampler of component `n < ENVELOPE_TERMS`.
    pub fn component(&self, n: usize) -> Result<&BesselPowerSampler, Error> {
        let slot = self.components.get(n).ok_or_else(|| Error::Input(format!("no body/tail sampler for component {n}")))?;
        slot.get_or_init(|| {
            gasper_component_params(n, self.table.eta, self.params.dim)
                .and_then(BesselPowerSampler::new)
                .map_err(|e| e.to_string())
        })
        .as_ref()
        .map_err(|e| Error::Envelope(format!("component {n}: {e}")))
    }

    fn large_component(&self, n: usize) -> Result<Arc<LargeOrderSampler>, Error> {
        if let Some(s) = self.large.read().map_err(|_| Error::Envelope("poisoned cache".into()))?.get(&n) {
            return Ok(Arc::clone(s));
        }
        let f = gasper_component_params(n, self.table.eta, self.params.dim)?;
        let s = Arc::new(LargeOrderSampler::new(f.p, f.m)?);
        let mut cache = self.large.write().map_err(|_| Error::Envelope("poisoned cache".into()))?;
        Ok(Arc::clone(cache.entry(n).or_insert(s)))
    }

    /// One draw `T` from component `n` and the proposals spent.
    pub fn sample_component<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<(f64, u64), Error> {
        if n >= self.table.len() {
            return Err(Error::Input(format!("component {n} beyond the table")));
        }
        if n < ENVELOPE_TERMS {
            self.component(n)?.sample(rng)
        } else {
            self.large_component(n)?.sample(rng)
        }
    }

    /// Spectral radius, the component index, and the proposals spent.
    pub fn sample_radius<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(f64, usize, u64), Error> {
        let n = self.sample_index(rng);
        let (t, k) = self.sample_component(n, rng)?;
        Ok((t / self.params.a, n, k))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<FrequencySample, Error> {
        let (r, _, _) = self.sample_radius(rng)?;
        let mut omega = sample_sphere(self.params.dim, rng);
        omega.iter_mut().for_each(|w| *w *= r);
        Ok(FrequencySample { omega })
    }
}

/// One-shot draw against a given table; prefer [`GasperSampler`] in loops.
pub fn sample_gh_gasper_freq<R: Rng + ?Sized>(
    params: &GHParams,
    table: &GasperWeightTable,
    rng: &mut R,
) -> Result<FrequencySample, Error> {
    GasperSampler::with_table(*params, table.clone())?.sample(rng)
}

//! Independent radius laws for checking the frequency samplers.
//!
//! The Gauss-Hypergeometric law is recovered from the correlation function by
//! a Hankel transform, so it shares nothing with the sampler code beyond the
//! correlation itself.

use crate::models::spectral::{kummer_radial_density, matern_radius_cdf, radius_pdf};
use crate::models::{gh_corr, CorrelationModel, GHParams, KummerParams, MaternParams, ModelKind};
use crate::specialfn::quad::kronrod15;
use crate::specialfn::{bessel_j, lgam, ln_sphere_area};
use crate::Error;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

/// A radius CDF tabulated on a log grid, interpolated by cubic Hermite in
/// `ln r`, with power laws below and above the grid.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    ln_r: Vec<f64>,
    cdf: Vec<f64>,
    /// `dF/d ln r` at the nodes.
    slope: Vec<f64>,
    /// `F(r) ∝ r^k` below the grid.
    pub low_exponent: f64,
    /// `1 − F(r) ∝ r^{−k}` above the grid.
    pub tail_exponent: f64,
}

impl TabulatedCdf {
    /// `values` holds `(r, F(r), pdf(r))` in increasing `r`.
    pub fn new(values: &[(f64, f64, f64)], low_exponent: f64, tail_exponent: f64) -> Result<Self, Error> {
        if values.len() < 2 || values.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Input("a tabulated CDF needs at least two increasing nodes".into()));
        }
        Ok(Self {
            ln_r: values.iter().map(|v| v.0.ln()).collect(),
            cdf: values.iter().map(|v| v.1.clamp(0.0, 1.0)).collect(),
            slope: values.iter().map(|v| v.0 * v.2).collect(),
            low_exponent,
            tail_exponent,
        })
    }

    pub fn r_min(&self) -> f64 {
        self.ln_r[0].exp()
    }

    pub fn r_max(&self) -> f64 {
        self.ln_r[self.ln_r.len() - 1].exp()
    }

    pub fn cdf(&self, r: f64) -> f64 {
        if !(r > 0.0) {
            return 0.0;
        }
        let x = r.ln();
        let last = self.ln_r.len() - 1;
        if x <= self.ln_r[0] {
            return self.cdf[0] * (self.low_exponent * (x - self.ln_r[0])).exp();
        }
        if x >= self.ln_r[last] {
            return 1.0 - (1.0 - self.cdf[last]) * (-self.tail_exponent * (x - self.ln_r[last])).exp();
        }
        let i = self.ln_r.partition_point(|&v| v <= x) - 1;
        let h = self.ln_r[i + 1] - self.ln_r[i];
        let t = (x - self.ln_r[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * self.cdf[i]
            + (t3 - 2.0 * t2 + t) * h * self.slope[i]
            + (-2.0 * t3 + 3.0 * t2) * self.cdf[i + 1]
            + (t3 - t2) * h * self.slope[i + 1];
        v.clamp(0.0, 1.0)
    }
}

fn log_grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let step = (hi / lo).ln() / (points - 1) as f64;
    (0..points).map(move |i| lo * (step * i as f64).exp())
}

/// Radial spectral density and radius CDF of a GH model by Hankel transform
/// of its correlation:
///
/// ```text
/// g(r) = (2π)^{−d/2} r^{1−d/2} ∫₀^a φ(x) x^{d/2} J_{d/2−1}(rx) dx
/// F(r) = (2π)^{−d} |S^{d−1}| (2πr)^{d/2} ∫₀^a φ(x) x^{d/2−1} J_{d/2}(rx) dx
/// ```
///
/// Integrals use composite 15-point Kronrod rules with a panel count that
/// grows with `ra`; correlation values are cached per panel count.
pub struct GHSpectralOracle {
    params: GHParams,
    nodes: Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>,
}

impl GHSpectralOracle {
    pub fn new(params: GHParams) -> Self {
        Self { params, nodes: Mutex::new(HashMap::new()) }
    }

    pub fn params(&self) -> &GHParams {
        &self.params
    }

    /// `(x, w·φ(x))` for `panels` equal panels on `[0, a]`.
    fn weighted_nodes(&self, panels: usize) -> Result<Arc<Vec<(f64, f64)>>, Error> {
        if let Some(v) = self.nodes.lock().expect("oracle cache poisoned").get(&panels) {
            return Ok(v.clone());
        }
        let a = self.params.a;
        let h = a / panels as f64;
        let rule = kronrod15();
        let mut v = Vec::with_capacity(panels * rule.len());
        for k in 0..panels {
            let c = (k as f64 + 0.5) * h;
            for &(t, w) in &rule {
                let x = c + 0.5 * h * t;
                v.push((x, 0.5 * h * w * gh_corr(&self.params, x)?));
            }
        }
        let v = Arc::new(v);
        self.nodes.lock().expect("oracle cache poisoned").insert(panels, v.clone());
        Ok(v)
    }

    fn panels_for(&self, r: f64) -> usize {
        ((r * self.params.a / 3.0).ceil() as usize).max(32).next_power_of_two()
    }

    pub fn radial_density(&self, r: f64) -> Result<f64, Error> {
        let d = self.params.dim as f64;
        let h = d / 2.0;
        let nodes = self.weighted_nodes(self.panels_for(r))?;
        if r == 0.0 {
            let s: f64 = nodes.iter().map(|&(x, w)| w * x.powf(d - 1.0)).sum();
            return Ok((ln_sphere_area(self.params.dim) - d * (2.0 * PI).ln()).exp() * s);
        }
        let s: f64 = if self.params.dim == 1 {
            // x^{1/2} J_{-1/2}(rx) = √(2/(πr)) cos(rx)
            (2.0 / (PI * r)).sqrt() * nodes.iter().map(|&(x, w)| w * (r * x).cos()).sum::<f64>()
        } else {
            let mut s = 0.0;
            for &(x, w) in nodes.iter() {
                s += w * x.powf(h) * bessel_j(h - 1.0, r * x)?;
            }
            s
        };
        Ok((2.0 * PI).powf(-h) * r.powf(1.0 - h) * s)
    }

    pub fn radius_cdf(&self, r: f64) -> Result<f64, Error> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        let d = self.params.dim as f64;
        let h = d / 2.0;
        let nodes = self.weighted_nodes(self.panels_for(r))?;
        let mut s = 0.0;
        for &(x, w) in nodes.iter() {
            s += w * x.powf(h - 1.0) * bessel_j(h, r * x)?;
        }
        let ln_c = ln_sphere_area(self.params.dim) - d * (2.0 * PI).ln() + h * (2.0 * PI * r).ln();
        Ok(ln_c.exp() * s)
    }

    /// `|S^{d−1}| r^{d−1} g(r)`.
    pub fn radius_pdf(&self, r: f64) -> Result<f64, Error> {
        Ok(radius_pdf(self.radial_density(r)?, r, self.params.dim))
    }

    /// Tabulated CDF on `[10⁻³/a, 10³/a]`, tail `1 − F ∝ r^{−(1+2ν)}`.
    pub fn tabulate(&self, points: usize) -> Result<TabulatedCdf, Error> {
        let a = self.params.a;
        let rows = log_grid(1e-3 / a, 1e3 / a, points)
            .map(|r| Ok((r, self.radius_cdf(r)?, self.radius_pdf(r)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        TabulatedCdf::new(&rows, self.params.dim as f64, 1.0 + 2.0 * self.params.nu)
    }
}

/// Kummer-Tricomi radius CDF by cumulative adaptive quadrature of the radius
/// density, tail `1 − F ∝ r^{−2ν}`.
///
/// Only meaningful for `μ > d/2`, where the spectral measure has a density.
pub fn kummer_radius_table(p: &KummerParams, dim: usize, points: usize) -> Result<TabulatedCdf, Error> {
    if p.mu <= dim as f64 / 2.0 {
        return Err(Error::Region(format!("the Kummer spectral law has no density for μ={} ≤ d/2", p.mu)));
    }
    let pdf = |r: f64| kummer_radial_density(p, dim, r).map(|g| radius_pdf(g, r, dim));
    let grid: Vec<f64> = log_grid(1e-4 / p.beta, 1e4 / p.beta, points).collect();
    // mass below the grid from the small-r limit g(r) ≈ g(0)
    let g0 = kummer_radial_density(p, dim, 0.0)?;
    let r0 = grid[0];
    let mut acc = g0 * (ln_sphere_area(dim)).exp() * r0.powi(dim as i32) / dim as f64;
    if dim == 1 {
        acc = 2.0 * g0 * r0;
    }
    let mut rows = Vec::with_capacity(points);
    rows.push((r0, acc, pdf(r0)?));
    let rule = kronrod15();
    for w in grid.windows(2) {
        let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for &(t, wt) in &rule {
            acc += h * wt * pdf(c + h * t)?;
        }
        rows.push((w[1], acc, pdf(w[1])?));
    }
    TabulatedCdf::new(&rows, dim as f64, 2.0 * p.nu)
}

/// Reference law of `‖Ω‖` for a model in dimension `dim`.
#[derive(Debug, Clone)]
pub enum RadiusLaw {
    /// `α²R²` is Beta-prime`(d/2, ν)`.
    Matern(MaternParams, usize),
    Tabulated(TabulatedCdf),
}

impl RadiusLaw {
    pub fn cdf(&self, r: f64) -> f64 {
        match self {
            RadiusLaw::Matern(p, d) => matern_radius_cdf(p, *d, r),
            RadiusLaw::Tabulated(t) => t.cdf(r),
        }
    }
}

/// Number of tabulation nodes used by [`reference_radius_law`].
pub const REFERENCE_NODES: usize = 400;

pub fn reference_radius_law(model: &CorrelationModel, dim: usize) -> Result<RadiusLaw, Error> {
    match model.kind {
        ModelKind::Matern(p) => Ok(RadiusLaw::Matern(p, dim)),
        ModelKind::Kummer(p) => Ok(RadiusLaw::Tabulated(kummer_radius_table(&p, dim, REFERENCE_NODES)?)),
        ModelKind::GaussHyper(p) => {
            if p.dim != dim {
                return Err(Error::DimensionMismatch { expected: p.dim, got: dim });
            }
            Ok(RadiusLaw::Tabulated(GHSpectralOracle::new(p).tabulate(REFERENCE_NODES)?))
        }
    }
}

/// `E[atan ‖Ω‖]` under a Matérn law, by quadrature of the radius density.
pub fn matern_mean_arctan_radius(p: &MaternParams, dim: usize) -> Result<f64, Error> {
    let h = dim as f64 / 2.0;
    // density of s = α²R²/(1+α²R²) is Beta(d/2, ν); R = √(s/(1−s))/α
    let ln_b = lgam(h) + lgam(p.nu) - lgam(h + p.nu);
    let f = |s: f64| {
        if s <= 0.0 || s >= 1.0 {
            return 0.0;
        }
        let r = (s / (1.0 - s)).sqrt() / p.alpha;
        r.atan() * ((h - 1.0) * s.ln() + (p.nu - 1.0) * (1.0 - s).ln() - ln_b).exp()
    };
    Ok(crate::specialfn::quad::tanh_sinh(|s, _, _| f(s), 0.0, 1.0, 1e-10)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{build_gasper_weights, gasper_component_radial_density};

    #[test]
    fn hermite_table_reproduces_a_smooth_cdf() {
        // F(r) = r²/(1+r²)
        let rows: Vec<_> = log_grid(1e-2, 1e2, 60).map(|r| (r, r * r / (1.0 + r * r), 2.0 * r / (1.0 + r * r).powi(2))).collect();
        let t = TabulatedCdf::new(&rows, 2.0, 2.0).unwrap();
        for r in [1e-3, 0.05, 0.7, 1.3, 9.0, 1e3] {
            assert!((t.cdf(r) - r * r / (1.0 + r * r)).abs() < 1e-5, "{r}");
        }
    }

    #[test]
    fn gh_density_matches_an_independent_series() {
        // ν = 1: the Gasper mixture converges fast and is built from other formulas
        let p = GHParams::wendland(1.0, 3.0, 0.5, 2).unwrap();
        let table = build_gasper_weights(&p, 1e-12).unwrap();
        let oracle = GHSpectralOracle::new(p);
        for r in [0.5, 3.0, 11.0, 40.0] {
            let mix: f64 = table
                .weights
                .iter()
                .enumerate()
                .map(|(n, w)| w * gasper_component_radial_density(n, table.eta, p.a, 2, r))
                .sum();
            let h = oracle.radial_density(r).unwrap();
            assert!((mix - h).abs() < 1e-7 * h.abs(), "r={r}: {mix} vs {h}");
        }
    }

    #[test]
    fn gh_cdf_is_a_distribution() {
        let p = GHParams::wendland(0.0, 6.0, 0.1, 2).unwrap();
        let o = GHSpectralOracle::new(p);
        assert!(o.radius_cdf(1e-3).unwrap() < 1e-6);
        // ν = 0: 1 − F(r) ∝ 1/r far out
        let t1 = 1e4 * (1.0 - o.radius_cdf(1e4).unwrap());
        let t2 = 2e4 * (1.0 - o.radius_cdf(2e4).unwrap());
        assert!((t1 / t2 - 1.0).abs() < 0.01, "{t1} {t2}");
        // F' = radius density
        let (r, e) = (40.0, 1e-3);
        let fd = (o.radius_cdf(r + e).unwrap() - o.radius_cdf(r - e).unwrap()) / (2.0 * e);
        assert!((fd - o.radius_pdf(r).unwrap()).abs() < 1e-6, "{fd}");
    }

    #[test]
    fn kummer_table_reaches_one() {
        let p = KummerParams::new(1.5, 3.5, 0.059).unwrap();
        let t = kummer_radius_table(&p, 2, 200).unwrap();
        assert!((t.cdf(1e4 / 0.059) - 1.0).abs() < 1e-6);
        assert!(t.cdf(10.0) > 0.0 && t.cdf(10.0) < 1.0);
        assert!(kummer_radius_table(&KummerParams::new(0.5, 0.25, 0.013).unwrap(), 2, 10).is_err());
    }

    #[test]
    fn matern_arctan_moment_limits() {
        // large α pushes R to 0
        let v = matern_mean_arctan_radius(&MaternParams::new(1.5, 1e6).unwrap(), 2).unwrap();
        assert!(v < 1e-5);
        let v = matern_mean_arctan_radius(&MaternParams::new(1.5, 1.0).unwrap(), 2).unwrap();
        assert!(v > 0.0 && v < PI / 2.0);
    }
}

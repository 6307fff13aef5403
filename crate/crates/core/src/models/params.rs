use crate::specialfn::lgam;
use crate::Error;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaternParams {
    pub nu: f64,
    pub alpha: f64,
}

impl MaternParams {
    pub fn new(nu: f64, alpha: f64) -> Result<Self, Error> {
        if !(nu > 0.0 && nu.is_finite()) || !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidModel(format!("Matérn needs ν > 0 and α > 0 (got ν={nu}, α={alpha})")));
        }
        Ok(Self { nu, alpha })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerParams {
    pub nu: f64,
    pub mu: f64,
    pub beta: f64,
}

impl KummerParams {
    pub fn new(nu: f64, mu: f64, beta: f64) -> Result<Self, Error> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !(ok(nu) && ok(mu) && ok(beta)) {
            return Err(Error::InvalidModel(format!(
                "Kummer-Tricomi needs ν, μ, β > 0 (got ν={nu}, μ={mu}, β={beta})"
            )));
        }
        Ok(Self { nu, mu, beta })
    }
}

/// Gauss-Hypergeometric parameters in the `(ν, μ, l, a)` form.
///
/// Construction checks only the type invariants; validity is a separate
/// question answered by [`gh_is_valid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GHParams {
    pub nu: f64,
    pub mu: f64,
    pub l: f64,
    pub a: f64,
    pub dim: usize,
}

impl GHParams {
    pub fn new(nu: f64, mu: f64, l: f64, a: f64, dim: usize) -> Result<Self, Error> {
        if !(nu > -0.5 && nu.is_finite())
            || !(mu > 0.0 && mu.is_finite())
            || !(l >= 0.0 && l.is_finite())
            || !(a > 0.0 && a.is_finite())
            || dim == 0
        {
            return Err(Error::InvalidModel(format!(
                "GH needs ν > -1/2, μ > 0, l ≥ 0, a > 0, d ≥ 1 (got ν={nu}, μ={mu}, l={l}, a={a}, d={dim})"
            )));
        }
        Ok(Self { nu, mu, l, a, dim })
    }

    /// Generalized Wendland member, `l = 1/2`.
    pub fn wendland(nu: f64, mu: f64, a: f64, dim: usize) -> Result<Self, Error> {
        Self::new(nu, mu, 0.5, a, dim)
    }

    /// Hypergeometric member, `l = d/2 + ν`.
    pub fn hypergeometric(nu: f64, mu: f64, a: f64, dim: usize) -> Result<Self, Error> {
        Self::new(nu, mu, dim as f64 / 2.0 + nu, a, dim)
    }

    pub fn delta(&self) -> f64 {
        (self.dim as f64 + 1.0) / 2.0 + self.nu
    }

    pub fn beta_c(&self) -> f64 {
        self.delta() + self.mu / 2.0
    }

    pub fn gamma_c(&self) -> f64 {
        self.delta() + self.mu / 2.0 + self.l
    }

    pub fn eta(&self) -> f64 {
        (self.beta_c() + self.gamma_c() - self.delta() - 1.5) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    Matern(MaternParams),
    Kummer(KummerParams),
    GaussHyper(GHParams),
}

/// A correlation family member together with its sill `σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationModel {
    pub kind: ModelKind,
    pub sill: f64,
}

impl CorrelationModel {
    pub fn new(kind: ModelKind, sill: f64) -> Result<Self, Error> {
        if !(sill > 0.0 && sill.is_finite()) {
            return Err(Error::InvalidModel(format!("sill must be positive (got {sill})")));
        }
        if let ModelKind::GaussHyper(p) = kind {
            if let Some(why) = gh_validity_violation(&p) {
                return Err(Error::InvalidModel(why));
            }
        }
        Ok(Self { kind, sill })
    }

    pub fn matern(p: MaternParams, sill: f64) -> Result<Self, Error> {
        Self::new(ModelKind::Matern(p), sill)
    }

    pub fn kummer(p: KummerParams, sill: f64) -> Result<Self, Error> {
        Self::new(ModelKind::Kummer(p), sill)
    }

    pub fn gauss_hyper(p: GHParams, sill: f64) -> Result<Self, Error> {
        Self::new(ModelKind::GaussHyper(p), sill)
    }

    /// Correlation `φ(x)`.
    pub fn corr(&self, x: f64) -> Result<f64, Error> {
        Ok(match &self.kind {
            ModelKind::Matern(p) => super::matern_corr(p, x),
            ModelKind::Kummer(p) => super::kummer_corr(p, x)?,
            ModelKind::GaussHyper(p) => super::gh_corr(p, x)?,
        })
    }

    /// Covariance `σ² φ(x)`.
    pub fn cov(&self, x: f64) -> Result<f64, Error> {
        Ok(self.sill * self.corr(x)?)
    }

    /// Support radius for compactly supported kinds.
    pub fn support(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::GaussHyper(p) => Some(p.a),
            _ => None,
        }
    }
}

impl fmt::Display for CorrelationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::Matern(p) => write!(f, "matern(nu={}, alpha={})", p.nu, p.alpha)?,
            ModelKind::Kummer(p) => write!(f, "kummer(nu={}, mu={}, beta={})", p.nu, p.mu, p.beta)?,
            ModelKind::GaussHyper(p) => {
                write!(f, "gh(nu={}, mu={}, l={}, a={}, dim={})", p.nu, p.mu, p.l, p.a, p.dim)?
            }
        }
        write!(f, " sill={}", self.sill)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionClass {
    Invalid,
    ValidGasperOnly,
    ValidBetaMixture,
}

impl RegionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionClass::Invalid => "invalid",
            RegionClass::ValidGasperOnly => "valid-gasper-only",
            RegionClass::ValidBetaMixture => "valid-beta-mixture",
        }
    }
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The violated validity inequality, if any. `l = 0` falls under the first branch.
pub fn gh_validity_violation(p: &GHParams) -> Option<String> {
    let d = p.dim as f64;
    if p.l <= d / 2.0 + p.nu {
        let bound = (d + 2.0) / 2.0 + p.nu - p.l;
        (p.mu < bound).then(|| {
            format!(
                "μ ≥ (d+2)/2 + ν − l is required when l ≤ d/2 + ν: μ = {} < {} (ν={}, l={}, d={})",
                p.mu, bound, p.nu, p.l, p.dim
            )
        })
    } else {
        let bound = (2.0 * p.nu + p.l * p.l + d + 1.0).sqrt() - p.l;
        (p.mu < bound).then(|| {
            format!(
                "μ ≥ √(2ν + l² + d + 1) − l is required when l > d/2 + ν: μ = {} < {} (ν={}, l={}, d={})",
                p.mu, bound, p.nu, p.l, p.dim
            )
        })
    }
}

pub fn gh_is_valid(p: &GHParams) -> bool {
    gh_validity_violation(p).is_none()
}

pub fn gh_classify_region(p: &GHParams) -> RegionClass {
    if !gh_is_valid(p) {
        return RegionClass::Invalid;
    }
    let d = p.dim as f64;
    if p.mu > 1.0 && p.mu / 2.0 - d / 2.0 - 0.5 - p.nu + p.l > 0.0 {
        RegionClass::ValidBetaMixture
    } else {
        RegionClass::ValidGasperOnly
    }
}

/// Scale `β√(2(μ+1))` of the Kummer-Tricomi model that tends to Matérn as `μ → ∞`.
pub fn kummer_matern_scale(mu: f64, beta: f64) -> f64 {
    beta * (2.0 * (mu + 1.0)).sqrt()
}

pub fn kummer_matern_reparam(nu: f64, mu: f64, beta: f64) -> Result<KummerParams, Error> {
    KummerParams::new(nu, mu, kummer_matern_scale(mu, beta))
}

/// Generalized Wendland model whose support grows so that it tends to
/// Matérn with smoothness `ν + 1/2` and scale `β` as `μ → ∞`.
pub fn wendland_matern_reparam(nu: f64, mu: f64, beta: f64, dim: usize) -> Result<GHParams, Error> {
    if !(mu > 0.0 && beta > 0.0 && nu > -0.5) {
        return Err(Error::InvalidModel(format!("need μ > 0, β > 0, ν > -1/2 (got ν={nu}, μ={mu}, β={beta})")));
    }
    let a = beta * ((lgam(mu + 2.0 * nu + 1.0) - lgam(mu)) / (1.0 + 2.0 * nu)).exp();
    let p = GHParams::wendland(nu, mu, a, dim)?;
    if let Some(why) = gh_validity_violation(&p) {
        return Err(Error::InvalidModel(why));
    }
    Ok(p)
}

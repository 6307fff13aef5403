use super::{CorrelationModel, GHParams, KummerParams, MaternParams};
use crate::specialfn::{bessel_k_scaled, gauss_2f1, lgam, ln_gauss_2f1_euler_c, ln_tricomi_u, SpecialFnError};
use crate::Error;
use std::f64::consts::LN_2;

/// `2^{1−ν}/Γ(ν) (x/α)^ν K_ν(x/α)`.
pub fn matern_corr(p: &MaternParams, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let z = x / p.alpha;
    let ks = bessel_k_scaled(p.nu, z);
    if !ks.is_finite() {
        // K_ν(z) overflows only for z ≪ 1 with ν > 1, where 1 − φ ≈ z²/(4(ν−1))
        return 1.0 - z * z / (4.0 * (p.nu - 1.0));
    }
    let v = ((1.0 - p.nu) * LN_2 - lgam(p.nu) + p.nu * z.ln() + ks.ln() - z).exp();
    v.min(1.0)
}

/// `Γ(ν+μ)/Γ(ν) U(μ, 1−ν, x²/(2β²))`.
pub fn kummer_corr(p: &KummerParams, x: f64) -> Result<f64, SpecialFnError> {
    if x <= 0.0 {
        return Ok(1.0);
    }
    let z = x * x / (2.0 * p.beta * p.beta);
    let ln_u = ln_tricomi_u(p.mu, 1.0 - p.nu, z)?;
    Ok((lgam(p.nu + p.mu) - lgam(p.nu) + ln_u).exp().min(1.0))
}

/// Gauss-Hypergeometric correlation; identically zero for `x ≥ a`.
pub fn gh_corr(p: &GHParams, x: f64) -> Result<f64, SpecialFnError> {
    if x <= 0.0 {
        return Ok(1.0);
    }
    if x >= p.a {
        return Ok(0.0);
    }
    let half_d = p.dim as f64 / 2.0;
    let (delta, beta, gamma) = (p.delta(), p.beta_c(), p.gamma_c());
    let c = beta - delta + gamma - half_d;
    let ln_pref = lgam(beta - half_d) + lgam(gamma - half_d) - lgam(c) - lgam(delta - half_d);
    let zc = (x / p.a) * (x / p.a);
    let z = ((p.a - x) * (p.a + x) / (p.a * p.a)).clamp(0.0, 1.0);
    if z == 0.0 {
        return Ok(0.0);
    }
    let (fa, fb) = (p.mu / 2.0, p.mu / 2.0 + p.l);
    let ln_f = if z <= 0.5 && fa + fb < 40.0 {
        gauss_2f1(fa, fb, c, z)?.ln()
    } else {
        ln_gauss_2f1_euler_c(fb, fa, c, z, zc)?
    };
    let v = (ln_pref + (c - 1.0) * z.ln() + ln_f).exp();
    Ok(v.clamp(0.0, 1.0))
}

/// `σ² (1 − φ(x))`.
pub fn theoretical_semivariogram(model: &CorrelationModel, x: f64) -> Result<f64, Error> {
    Ok(model.sill * (1.0 - model.corr(x)?))
}

//! Radial spectral densities `g_R(r)`, normalized so that
//! `∫ g_R(‖ω‖) dω = 1` over `R^d`.
//!
//! The density of the spectral radius itself is `|S^{d-1}| r^{d-1} g_R(r)`,
//! see [`radius_pdf`].

use super::{KummerParams, MaternParams};
use crate::specialfn::{lgam, ln_sphere_area, ln_tricomi_u, SpecialFnError};
use std::f64::consts::PI;

/// Matérn: `Γ(ν+d/2)/(Γ(ν) π^{d/2}) α^d (1 + α²r²)^{−ν−d/2}`.
pub fn matern_radial_density(p: &MaternParams, dim: usize, r: f64) -> f64 {
    let h = dim as f64 / 2.0;
    let ln_c = lgam(p.nu + h) - lgam(p.nu) - h * PI.ln() + dim as f64 * p.alpha.ln();
    (ln_c - (p.nu + h) * (p.alpha * p.alpha * r * r).ln_1p()).exp()
}

/// Kummer-Tricomi:
/// `Γ(ν+d/2)/((2π)^{d/2} B(μ,ν)) β^d U(ν+d/2, 1−μ+d/2, β²r²/2)`.
pub fn kummer_radial_density(p: &KummerParams, dim: usize, r: f64) -> Result<f64, SpecialFnError> {
    let h = dim as f64 / 2.0;
    let ln_c = lgam(p.nu + h) - h * (2.0 * PI).ln() - (lgam(p.mu) + lgam(p.nu) - lgam(p.mu + p.nu))
        + dim as f64 * p.beta.ln();
    let z = 0.5 * p.beta * p.beta * r * r;
    if z == 0.0 {
        // U(a, b, 0) = Γ(1−b)/Γ(a−b+1) when b < 1
        let (a, b) = (p.nu + h, 1.0 - p.mu + h);
        if b >= 1.0 {
            return Ok(f64::INFINITY);
        }
        return Ok((ln_c + lgam(1.0 - b) - lgam(a - b + 1.0)).exp());
    }
    Ok((ln_c + ln_tricomi_u(p.nu + h, 1.0 - p.mu + h, z)?).exp())
}

/// Radius density `|S^{d-1}| r^{d-1} g_R(r)` from a radial density value.
pub fn radius_pdf(g: f64, r: f64, dim: usize) -> f64 {
    if dim == 1 {
        return 2.0 * g;
    }
    (ln_sphere_area(dim) + (dim as f64 - 1.0) * r.ln()).exp() * g
}

/// `P(‖Ω‖ ≤ r)` for the Matérn law: `α²R²` is Beta-prime`(d/2, ν)`.
pub fn matern_radius_cdf(p: &MaternParams, dim: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let s = p.alpha * p.alpha * r * r;
    statrs::function::beta::beta_reg(dim as f64 / 2.0, p.nu, s / (1.0 + s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::quad::{exp_sinh, gauss_kronrod};

    #[test]
    fn matern_normalizes() {
        for d in 1..4 {
            let p = MaternParams::new(1.3, 0.7).unwrap();
            let total = exp_sinh(|r| radius_pdf(matern_radial_density(&p, d, r), r, d), 0.0, 1e-10).unwrap();
            assert!((total - 1.0).abs() < 1e-8, "d={d}: {total}");
            let c = gauss_kronrod(|r| radius_pdf(matern_radial_density(&p, d, r), r, d), 0.0, 2.0, 1e-13, 1e-12)
                .unwrap();
            assert!((c - matern_radius_cdf(&p, d, 2.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn kummer_normalizes() {
        for d in 1..4 {
            let p = KummerParams::new(0.8, 2.5, 0.6).unwrap();
            let total = gauss_kronrod(
                |r| radius_pdf(kummer_radial_density(&p, d, r).unwrap(), r, d),
                0.0,
                200.0,
                1e-12,
                1e-10,
            )
            .unwrap()
                + exp_sinh(|r| radius_pdf(kummer_radial_density(&p, d, r).unwrap(), r, d), 200.0, 1e-8).unwrap();
            assert!((total - 1.0).abs() < 1e-6, "d={d}: {total}");
        }
    }

    #[test]
    fn kummer_origin_value_is_the_limit() {
        let p = KummerParams::new(0.8, 2.5, 0.6).unwrap();
        let g0 = kummer_radial_density(&p, 2, 0.0).unwrap();
        let g1 = kummer_radial_density(&p, 2, 1e-6).unwrap();
        assert!((g0 - g1).abs() / g0 < 1e-6);
    }
}

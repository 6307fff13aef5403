use super::gamma::lgam;
use super::quad::{exp_sinh, tanh_sinh};
use super::{EvalAccuracy, SpecialFnError};

/// Gauss hypergeometric `₂F₁(a, b; c; z)` for `0 ≤ z < 1` by its power series.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecialFnError> {
    gauss_2f1_with(a, b, c, z, EvalAccuracy::default())
}

pub fn gauss_2f1_with(a: f64, b: f64, c: f64, z: f64, acc: EvalAccuracy) -> Result<f64, SpecialFnError> {
    if !(0.0..1.0).contains(&z) {
        return Err(SpecialFnError::Domain { function: "gauss_2f1", detail: format!("z={z}") });
    }
    if c <= 0.0 && c == c.round() {
        return Err(SpecialFnError::Domain { function: "gauss_2f1", detail: format!("c={c}") });
    }
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..acc.max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.abs() <= acc.rel_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecialFnError::NoConvergence { function: "gauss_2f1", terms: acc.max_terms })
}

/// `ln ₂F₁(a, b; c; z)` through Euler's integral, for `c > b > 0` and `0 ≤ z < 1`.
///
/// Used close to `z = 1`, where the series needs too many terms, and for
/// large parameters, where the value leaves the f64 range.
pub fn ln_gauss_2f1_euler(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecialFnError> {
    ln_gauss_2f1_euler_c(a, b, c, z, 1.0 - z)
}

/// As [`ln_gauss_2f1_euler`] with the complement `zc = 1 − z` supplied exactly.
pub(crate) fn ln_gauss_2f1_euler_c(a: f64, b: f64, c: f64, z: f64, zc: f64) -> Result<f64, SpecialFnError> {
    if !(c > b && b > 0.0) || !(0.0..1.0).contains(&z) || !(zc > 0.0) {
        return Err(SpecialFnError::Domain {
            function: "gauss_2f1_euler",
            detail: format!("a={a}, b={b}, c={c}, z={z}"),
        });
    }
    // 1 − z t is written as zc + z s, s = 1 − t, to avoid cancellation near t = 1
    let h = |t: f64, s: f64| (b - 1.0) * t.ln() + (c - b - 1.0) * s.ln() - a * (zc + z * s).ln();
    // the peak may sit within 1 − z of t = 1, so scan both ends on a log scale
    let shift = (1..1200)
        .flat_map(|j| {
            let e = 10f64.powf(-(j as f64) / 4.0);
            [h(e, 1.0 - e), h(1.0 - e, e)]
        })
        .chain((1..64).map(|i| {
            let t = i as f64 / 64.0;
            h(t, 1.0 - t)
        }))
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let integral = tanh_sinh(|_, t, s| (h(t, s) - shift).exp(), 0.0, 1.0, 1e-13)?;
    Ok(lgam(c) - lgam(b) - lgam(c - b) + shift + integral.ln())
}

#[cfg(test)]
fn gauss_2f1_euler(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecialFnError> {
    ln_gauss_2f1_euler(a, b, c, z).map(f64::exp)
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)` from
/// `Γ(a) U = ∫₀^∞ e^{−zt} t^{a−1} (1+t)^{b−a−1} dt`.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64, SpecialFnError> {
    ln_tricomi_u(a, b, z).map(f64::exp)
}

/// `ln U(a, b, z)`; stays finite where `U` itself under- or overflows.
pub fn ln_tricomi_u(a: f64, b: f64, z: f64) -> Result<f64, SpecialFnError> {
    if !(a > 0.0) || !(z > 0.0) || !b.is_finite() || !z.is_finite() {
        return Err(SpecialFnError::Domain { function: "tricomi_u", detail: format!("a={a}, b={b}, z={z}") });
    }
    let p = b - a - 1.0;
    // integrate in s = z t when z > 1 so the exponential cutoff sits at s ~ 1
    let (scale, lz) = if z > 1.0 { (1.0 / z, z.ln()) } else { (1.0, 0.0) };
    let zz = z * scale;
    let h = |t: f64| -zz * t + (a - 1.0) * t.ln() + p * (t * scale).ln_1p();
    let shift = (-1200..1200)
        .map(|j| h(10f64.powf(j as f64 / 4.0)))
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let integral = exp_sinh(|t| (h(t) - shift).exp(), 0.0, 1e-11)?;
    Ok(integral.ln() + shift - a * lz - lgam(a))
}

/// Terminating `₄F₃(−n, n+2η, η+1, δ; η+½, β, γ; 1)` with its cancellation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasperCoefficient {
    pub value: f64,
    /// Largest partial-sum magnitude met along the way.
    pub max_partial: f64,
    /// Set when the sum was lost to cancellation and reported as 0.
    pub clamped: bool,
}

/// `C(n, δ, β, γ)` by the term-ratio recursion.
///
/// The alternating sum loses about `log10(max_partial/|value|)` digits; for
/// `n` beyond a few dozen use [`gasper_coefficients`].
pub fn gasper_coefficient(n: usize, delta: f64, beta: f64, gamma: f64, eta: f64) -> GasperCoefficient {
    let nf = n as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut max_partial: f64 = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (-nf + kf) * (nf + 2.0 * eta + kf) * (eta + 1.0 + kf) * (delta + kf)
            / ((eta + 0.5 + kf) * (beta + kf) * (gamma + kf) * (kf + 1.0));
        sum += term;
        max_partial = max_partial.max(sum.abs()).max(term.abs());
    }
    if sum.abs() < 1e-12 * max_partial {
        return GasperCoefficient { value: 0.0, max_partial, clamped: true };
    }
    GasperCoefficient { value: sum, max_partial, clamped: false }
}

/// `C(0..=n_max, δ, β, γ)` with `η = (β+γ−δ−3/2)/2`, via the three-term
/// recurrence of Wilson polynomials.
///
/// Stable where the direct alternating sum is not.
pub fn gasper_coefficients(n_max: usize, delta: f64, beta: f64, gamma: f64) -> Vec<f64> {
    let eta = 0.5 * (beta + gamma - delta - 1.5);
    let a = 0.5 * (eta + 1.0 + delta);
    let b = eta + 0.5 - a;
    let c = beta - a;
    let d = gamma - a;
    let s = 2.0 * eta + 1.0;
    let lambda = delta * (eta + 1.0);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    let (mut prev, mut cur) = (0.0, 1.0);
    for n in 0..n_max {
        let nf = n as f64;
        let lead = if n == 0 { 1.0 / s } else { (nf + s - 1.0) / ((2.0 * nf + s - 1.0) * (2.0 * nf + s)) };
        let an = lead * (nf + a + b) * (nf + a + c) * (nf + a + d);
        let cn = if n == 0 {
            0.0
        } else {
            nf * (nf + b + c - 1.0) * (nf + b + d - 1.0) * (nf + c + d - 1.0)
                / ((2.0 * nf + s - 2.0) * (2.0 * nf + s - 1.0))
        };
        let next = ((an + cn - lambda) * cur - cn * prev) / an;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

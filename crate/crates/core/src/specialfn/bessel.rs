//! Bessel `J_ν`, `Y_ν` and `K_ν` for real order and positive argument.
//!
//! Temme's series below `x = 2`, Steed's continued fractions above, the
//! Hankel expansion once `x` is large against the order.

use super::SpecialFnError;
use std::f64::consts::PI;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 500_000;
const XMIN: f64 = 2.0;
const RESCALE: f64 = 1e250;

const C1: [f64; 7] = [
    -1.142022680371168e0,
    6.5165112670737e-3,
    3.087090173086e-4,
    -3.4706269649e-6,
    6.9437664e-9,
    3.67795e-11,
    -1.356e-13,
];
const C2: [f64; 8] = [
    1.843740587300905e0,
    -7.68528408447867e-2,
    1.2719271366546e-3,
    -4.9717367042e-6,
    -3.31261198e-8,
    2.423096e-10,
    -1.702e-13,
    -1.49e-15,
];

fn chebev(c: &[f64], x: f64) -> f64 {
    let y2 = 2.0 * x;
    let (mut d, mut dd) = (0.0, 0.0);
    for &cj in c[1..].iter().rev() {
        let sv = d;
        d = y2 * d - dd + cj;
        dd = sv;
    }
    x * d - dd + 0.5 * c[0]
}

/// Γ₁, Γ₂, 1/Γ(1+μ), 1/Γ(1−μ) for |μ| ≤ 1/2.
fn beschb(mu: f64) -> (f64, f64, f64, f64) {
    let xx = 8.0 * mu * mu - 1.0;
    let gam1 = chebev(&C1, xx);
    let gam2 = chebev(&C2, xx);
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

fn hankel_applies(nu: f64, x: f64) -> bool {
    x >= 30.0_f64.max(nu * nu / 12.0 + 30.0)
}

/// Large-argument expansion: `(J, Y)`.
fn jy_hankel(nu: f64, x: f64) -> (f64, f64) {
    let m4 = 4.0 * nu * nu;
    let z8 = 8.0 * x;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut last = 1.0;
    let mut past_peak = false;
    for k in 1..400 {
        let kf = k as f64;
        term *= (m4 - (2.0 * kf - 1.0).powi(2)) / (kf * z8);
        if term.abs() > last && past_peak {
            break;
        }
        past_peak |= term.abs() < last;
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < EPS * p.abs().max(q.abs()) {
            break;
        }
    }
    // sin/cos of x − φ by angle addition keeps the phase exact for large x
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = ((0.5 * nu + 0.25) * PI).sin_cos();
    let s = sx * cp - cx * sp;
    let c = cx * cp + sx * sp;
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// `(J_ν(x), Y_ν(x))` for `x > 0`, `ν ≥ 0`. `Y` may be `-inf` for tiny `x`.
pub(crate) fn bessel_jy(nu: f64, x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0 && nu >= 0.0);
    if hankel_applies(nu, x) {
        return jy_hankel(nu, x);
    }
    jy_steed(nu, x)
}

fn jy_steed(nu: f64, x: f64) -> (f64, f64) {
    let nl = if x < XMIN { (nu + 0.5) as usize } else { (nu - x + 1.5).max(0.0) as usize };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1 for J'_ν/J_ν
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    debug_assert!(converged, "bessel_jy CF1 ν={nu} x={x}");

    // downward recurrence to order μ, rescaling against overflow
    let mut rjl = isign * 1e-30;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE {
            rjl /= RESCALE;
            rjpl /= RESCALE;
            rjl1 /= RESCALE;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, mut ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = beschb(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
        }
        let ymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * ymu - ry1;
        rjmu = w / (rymup - f * ymu);
        rymu = ymu;
    } else {
        // CF2, complex continued fraction for p + iq
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                break;
            }
        }
        let gam = (p - f) / q;
        let j = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
        rjmu = j;
        rymu = j * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }
    let scale = rjmu / rjl;
    let jnu = rjl1 * scale;
    let mut ymu = rymu;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - ymu;
        ymu = ry1;
        ry1 = rytemp;
    }
    (jnu, ymu)
}

/// Bessel function of the first kind `J_ν(x)`, `ν ≥ 0`, `x ≥ 0`.
pub fn bessel_j(order: f64, x: f64) -> Result<f64, SpecialFnError> {
    if !(order >= 0.0) || !(x >= 0.0) || !order.is_finite() || !x.is_finite() {
        return Err(SpecialFnError::Domain { function: "bessel_j", detail: format!("order={order}, x={x}") });
    }
    if x == 0.0 {
        return Ok(if order == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(bessel_jy(order, x).0)
}

/// `e^x K_ν(x)`; finite unless the true value overflows.
pub(crate) fn bessel_k_scaled(nu: f64, x: f64) -> f64 {
    let nl = (nu + 0.5) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let (mut rkmu, mut rk1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = beschb(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let e = e.exp();
        let mut p = 0.5 * e / gampl;
        let mut q = 0.5 / (e * gammi);
        let mut c = 1.0;
        let d = x2 * x2;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        let ex = x.exp();
        rkmu = sum * ex;
        rk1 = sum1 * xi2 * ex;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                break;
            }
        }
        h *= a1;
        rkmu = (PI / (2.0 * x)).sqrt() / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }
    for i in 1..=nl {
        let rktemp = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    rkmu
}

/// Modified Bessel function of the second kind `K_ν(x)`, `ν > 0`, `x > 0`.
pub fn bessel_k(order: f64, x: f64) -> Result<f64, SpecialFnError> {
    if !(order > 0.0) || !(x > 0.0) || !order.is_finite() || !x.is_finite() {
        return Err(SpecialFnError::Domain { function: "bessel_k", detail: format!("order={order}, x={x}") });
    }
    let v = bessel_k_scaled(order, x) * (-x).exp();
    if !v.is_finite() {
        return Err(SpecialFnError::Overflow { function: "bessel_k" });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn k_closed_forms() {
        let k05 = bessel_k(0.5, 1.0).unwrap();
        assert!(rel(k05, (PI / 2.0).sqrt() * (-1f64).exp()) < 1e-13);
        let k15 = bessel_k(1.5, 2.0).unwrap();
        assert!((k15 - 0.1799066579).abs() < 1e-10);
    }

    #[test]
    fn k_oracle() {
        // arbitrary-precision reference
        let v = bessel_k(2.7, 3.1).unwrap();
        assert!(rel(v, 0.0839861554665448251736368933918) < 1e-12, "{v}");
    }

    #[test]
    fn k_half_integer_grid() {
        for i in 0..100 {
            let x = 10f64.powf(-3.0 + 5.5 * i as f64 / 99.0);
            let e = (-x).exp() * (PI / (2.0 * x)).sqrt();
            let k12 = e;
            let k32 = e * (1.0 + 1.0 / x);
            let k52 = e * (1.0 + 3.0 / x + 3.0 / (x * x));
            assert!(rel(bessel_k(0.5, x).unwrap(), k12) < 1e-12, "x={x}");
            assert!(rel(bessel_k(1.5, x).unwrap(), k32) < 1e-12, "x={x}");
            assert!(rel(bessel_k(2.5, x).unwrap(), k52) < 1e-12, "x={x}");
        }
    }

    #[test]
    fn k_overflow_is_reported() {
        assert!(matches!(bessel_k(50.0, 1e-8), Err(SpecialFnError::Overflow { .. })));
    }

    #[test]
    fn j_trivial() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.3, 0.0).unwrap(), 0.0);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn j_oracle() {
        let v = bessel_j(2.5, 7.3).unwrap();
        assert!((v - -0.300849431587499808377826719864).abs() < 1e-13, "{v}");
    }

    #[test]
    fn j_half_integer_grid() {
        for i in 0..100 {
            let x = 10f64.powf(-3.0 + 7.0 * i as f64 / 99.0);
            let a = (2.0 / (PI * x)).sqrt();
            let (s, c) = x.sin_cos();
            let j12 = a * s;
            let j32 = a * (s / x - c);
            let jm = bessel_j(0.5, x).unwrap();
            assert!((jm - j12).abs() <= 1e-12 * j12.abs().max(1e-3 * a), "x={x}: {jm} vs {j12}");
            let jm = bessel_j(1.5, x).unwrap();
            assert!((jm - j32).abs() <= 1e-12 * j32.abs().max(1e-3 * a), "x={x}: {jm} vs {j32}");
        }
    }

    #[test]
    fn j_large_argument_continuity() {
        // the Steed and Hankel branches agree where they meet
        for &nu in &[0.0, 1.5, 7.25, 20.0, 60.0] {
            let x0 = 30f64.max(nu * nu / 12.0 + 30.0);
            let (js, ys) = jy_steed(nu, x0);
            let (jh, yh) = jy_hankel(nu, x0);
            assert!((js - jh).abs() < 1e-13, "ν={nu}: {js} vs {jh}");
            assert!((ys - yh).abs() < 1e-13, "ν={nu}: {ys} vs {yh}");
        }
    }

    #[test]
    fn j_wronskian() {
        // J_{ν+1} Y_ν − J_ν Y_{ν+1} = 2/(πx)
        for &nu in &[0.0, 0.3, 2.5, 11.7, 40.0] {
            for &x in &[0.05, 1.0, 3.7, 25.0, 400.0, 9000.0] {
                let (j0, y0) = bessel_jy(nu, x);
                let (j1, y1) = bessel_jy(nu + 1.0, x);
                let w = j1 * y0 - j0 * y1;
                if !w.is_finite() {
                    continue;
                }
                assert!(rel(w, 2.0 / (PI * x)) < 1e-9, "ν={nu} x={x}: {w}");
            }
        }
    }
}

//! Body/tail rejection sampling for densities of the form
//! `f(t) = K t^p J_m(t/2)²`, which covers both the universal auxiliary
//! variable of the Beta-mixture sampler and every Gasper component.
//!
//! Near the origin `f ~ t^{d-1+2n}`, far out `f ~ t^{p-1}`, so the proposal is
//! a power law `d t^{d-1}/t0^d` on `(0, t0]` and a Pareto tail with exponent
//! `α = -p` beyond.

use super::rng::uniform_pos;
use crate::specialfn::{bessel_jy, lgam};
use crate::Error;
use rand::Rng;
use std::f64::consts::{FRAC_2_PI, PI};

const INFLATION: f64 = 1.05;
const MAX_PROPOSALS: u64 = 1_000_000;

/// `ln |J_m(x)|`, using the leading series terms where `J_m` would underflow.
pub(crate) fn ln_abs_bessel_j(m: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    if q < 1e-4 * (m + 1.0) {
        let s = 1.0 - q / (m + 1.0) + q * q / (2.0 * (m + 1.0) * (m + 2.0));
        return m * (0.5 * x).ln() - lgam(m + 1.0) + s.ln();
    }
    bessel_jy(m, x).0.abs().ln()
}

/// `f(t) = exp(ln_k) · t^p · J_m(t/2)²` on `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPowerDensity {
    pub ln_k: f64,
    pub p: f64,
    pub m: f64,
    pub dim: usize,
}

impl BesselPowerDensity {
    pub fn ln_pdf(&self, t: f64) -> f64 {
        if !(t > 0.0) || !t.is_finite() {
            return f64::NEG_INFINITY;
        }
        self.ln_k + self.p * t.ln() + 2.0 * ln_abs_bessel_j(self.m, 0.5 * t)
    }

    pub fn pdf(&self, t: f64) -> f64 {
        self.ln_pdf(t).exp()
    }

    /// Pareto exponent of the tail proposal.
    pub fn tail_exponent(&self) -> f64 {
        -self.p
    }

    /// Power of `t` in `f` near zero, minus `d - 1`.
    fn body_excess(&self) -> f64 {
        self.p + 2.0 * self.m - (self.dim as f64 - 1.0)
    }

    /// `ln (f(t)/t^{d-1})` in the limit `t → 0` when that limit is finite and positive.
    fn ln_body_ratio_at_zero(&self) -> Option<f64> {
        (self.body_excess().abs() < 1e-12).then(|| self.ln_k - 4.0 * self.m * 2f64.ln() - 2.0 * lgam(self.m + 1.0))
    }

    /// Upper bound for `f(t) t^{α+1} = K t J_m(t/2)²` over `[t, ∞)`.
    ///
    /// `x (J_m² + Y_m²)` decreases to `2/π` for `m > 1/2` and increases to it otherwise.
    fn ln_tail_ratio_bound(&self, t: f64) -> f64 {
        let x = 0.5 * t;
        let level = if self.m > 0.5 {
            let (j, y) = bessel_jy(self.m, x);
            let v = x * (j * j + y * y);
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        } else {
            FRAC_2_PI
        };
        self.ln_k + (2.0 * level).ln()
    }
}

/// Two-piece proposal dominating a [`BesselPowerDensity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionEnvelope {
    pub t0: f64,
    pub m1: f64,
    pub m2: f64,
    pub tail_exponent: f64,
    pub dim: usize,
}

impl RejectionEnvelope {
    /// Probability of proposing from the body.
    pub fn w1(&self) -> f64 {
        self.m1 / (self.m1 + self.m2)
    }

    /// Acceptance rate implied by the constants, `1/(M1+M2)`.
    pub fn predicted_acceptance(&self) -> f64 {
        1.0 / (self.m1 + self.m2)
    }

    /// `|M1 − M2| / (M1 + M2)`.
    pub fn imbalance(&self) -> f64 {
        (self.m1 - self.m2).abs() / (self.m1 + self.m2)
    }

    /// `ln (M_i g_i(t))` for the region containing `t`.
    pub fn ln_bound(&self, t: f64) -> f64 {
        let d = self.dim as f64;
        let a = self.tail_exponent;
        if t <= self.t0 {
            self.m1.ln() + d.ln() + (d - 1.0) * t.ln() - d * self.t0.ln()
        } else {
            self.m2.ln() + a.ln() + a * self.t0.ln() - (a + 1.0) * t.ln()
        }
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

/// Builds the envelope: sup of `f/g1` and `f/g2` over a grid, `t0` minimizing
/// `M1 + M2`, 5% inflation, then an audit on an independent grid.
pub fn build_envelope(f: &BesselPowerDensity) -> Result<RejectionEnvelope, Error> {
    let d = f.dim as f64;
    let alpha = f.tail_exponent();
    if !(alpha > 0.0) {
        return Err(Error::Envelope(format!("tail exponent α = {alpha} must be positive")));
    }
    let t_lo = 1e-3;
    let t_hi = 1e5f64.max(40.0 * (f.m + 1.0));
    // past x = 1.5m + 10 the Nicholson bound is tight, so samples are only needed below it
    let t_switch = 2.0 * (1.5 * f.m + 10.0);
    let step = PI / 8.0;
    let mut grid: Vec<f64> = log_grid(t_lo, t_hi, 2048)
        .chain((1..).map(|i| i as f64 * step).take_while(|&t| t < t_switch + 4.0 * PI))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let n = grid.len();

    let ln_f: Vec<f64> = grid.iter().map(|&t| f.ln_pdf(t)).collect();
    let mut ln_b: Vec<f64> = grid.iter().zip(&ln_f).map(|(&t, &v)| v - (d - 1.0) * t.ln()).collect();
    let mut ln_h: Vec<f64> = grid
        .iter()
        .zip(&ln_f)
        .map(|(&t, &v)| if t < t_switch { v + (alpha + 1.0) * t.ln() } else { f.ln_tail_ratio_bound(t) })
        .collect();

    // refine lobes that can set a running maximum
    let mut running = f.ln_body_ratio_at_zero().unwrap_or(f64::NEG_INFINITY);
    for i in 1..n - 1 {
        running = running.max(ln_b[i - 1]);
        if ln_b[i] >= ln_b[i - 1] && ln_b[i] >= ln_b[i + 1] && ln_b[i] > running - 0.2 {
            let (_, v) = golden_max(|t| f.ln_pdf(t) - (d - 1.0) * t.ln(), grid[i - 1], grid[i + 1], 40);
            ln_b[i] = ln_b[i].max(v);
        }
        if grid[i + 1] < t_switch && ln_h[i] >= ln_h[i - 1] && ln_h[i] >= ln_h[i + 1] && ln_h[i].is_finite() {
            let (_, v) = golden_max(|t| f.ln_pdf(t) + (alpha + 1.0) * t.ln(), grid[i - 1], grid[i + 1], 40);
            ln_h[i] = ln_h[i].max(v);
        }
    }

    let mut prefix = vec![f64::NEG_INFINITY; n];
    let mut acc = f.ln_body_ratio_at_zero().unwrap_or(f64::NEG_INFINITY);
    for i in 0..n {
        acc = acc.max(ln_b[i]);
        prefix[i] = acc;
    }
    let mut suffix = vec![f64::NEG_INFINITY; n];
    let mut acc = f.ln_tail_ratio_bound(t_hi);
    for i in (0..n).rev() {
        acc = acc.max(ln_h[i]);
        suffix[i] = acc;
    }

    let objective = |t0: f64, sup_b: f64, sup_h: f64| -> (f64, f64) {
        let m1 = (d * t0.ln() - d.ln() + sup_b).exp();
        let m2 = (-alpha * t0.ln() - alpha.ln() + sup_h).exp();
        (m1, m2)
    };
    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..n - 1 {
        let (m1, m2) = objective(grid[i], prefix[i], suffix[i + 1].max(ln_h[i]));
        if m1 + m2 < best {
            best = m1 + m2;
            best_i = i;
        }
    }
    // continuous refinement of t0 between the neighbouring grid points
    let lo = grid[best_i.saturating_sub(1)];
    let hi = grid[(best_i + 1).min(n - 1)];
    let eval = |t0: f64| -> (f64, f64) {
        let j = grid.partition_point(|&g| g <= t0).saturating_sub(1);
        let sup_b = prefix[j].max(f.ln_pdf(t0) - (d - 1.0) * t0.ln());
        let sup_h = suffix[(j + 1).min(n - 1)].max(f.ln_pdf(t0) + (alpha + 1.0) * t0.ln());
        objective(t0, sup_b, sup_h)
    };
    let (t0, _) = golden_max(
        |t| {
            let (m1, m2) = eval(t);
            -(m1 + m2)
        },
        lo,
        hi,
        60,
    );
    let (m1, m2) = {
        let (a1, a2) = eval(t0);
        let (b1, b2) = objective(grid[best_i], prefix[best_i], suffix[(best_i + 1).min(n - 1)].max(ln_h[best_i]));
        if a1 + a2 <= b1 + b2 {
            (a1, a2)
        } else {
            (b1, b2)
        }
    };
    let t0 = if eval(t0).0 + eval(t0).1 <= best { t0 } else { grid[best_i] };
    let env = RejectionEnvelope { t0, m1: m1 * INFLATION, m2: m2 * INFLATION, tail_exponent: alpha, dim: f.dim };
    audit(f, &env, t_lo, t_hi)?;
    Ok(env)
}

/// Checks `f ≤ M_i g_i` on 10⁴ log-spaced points offset from the construction grid.
pub fn audit(f: &BesselPowerDensity, env: &RejectionEnvelope, t_lo: f64, t_hi: f64) -> Result<(), Error> {
    let n = 10_000;
    let (a, b) = (t_lo.ln(), t_hi.ln());
    for i in 0..n {
        let t = (a + (b - a) * (i as f64 + 0.37) / n as f64).exp();
        let lf = f.ln_pdf(t);
        if lf > env.ln_bound(t) + 1e-12 {
            return Err(Error::Envelope(format!(
                "density exceeds envelope at t = {t:.6e} (ln f = {lf:.6}, ln bound = {:.6})",
                env.ln_bound(t)
            )));
        }
    }
    Ok(())
}

/// A target density with its envelope.
#[derive(Debug, Clone, Copy)]
pub struct BesselPowerSampler {
    pub density: BesselPowerDensity,
    pub envelope: RejectionEnvelope,
}

impl BesselPowerSampler {
    pub fn new(density: BesselPowerDensity) -> Result<Self, Error> {
        Ok(Self { envelope: build_envelope(&density)?, density })
    }

    /// One exact draw and the number of proposals it took.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(f64, u64), Error> {
        let env = &self.envelope;
        let w1 = env.w1();
        let inv_d = 1.0 / env.dim as f64;
        let inv_a = 1.0 / env.tail_exponent;
        for k in 1..=MAX_PROPOSALS {
            let body = rng.random::<f64>() < w1;
            let u = uniform_pos(rng);
            let t = if body { env.t0 * u.powf(inv_d) } else { env.t0 * u.powf(-inv_a) };
            let v = uniform_pos(rng);
            if v.ln() + env.ln_bound(t) <= self.density.ln_pdf(t) {
                return Ok((t, k));
            }
        }
        Err(Error::Envelope(format!("no acceptance in {MAX_PROPOSALS} proposals")))
    }
}

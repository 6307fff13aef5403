//! Rejection sampling of `f(t) ∝ t^p J_m(t/2)²` for large `m`, where a grid
//! search over the density would cost too many Bessel evaluations.
//!
//! With `x = t/2` the proposal is a sum of power-law pieces `c x^k`:
//!
//! * `(0, m/2]`: `J_m(x) ≤ (x/2)^m / Γ(m+1)`;
//! * cells in `[m/2, m]`: `J_m` increases up to its first maximum, which lies
//!   beyond `m`, so `J_m(x) ≤ J_m(x_right)`;
//! * cells in `[m, ∞)`: `x (J_m² + Y_m²)` decreases for `m > 1/2`, so
//!   `J_m(x)² ≤ x_left M²(x_left) / x` with `M² = J_m² + Y_m²`.

use super::rng::uniform_pos;
use crate::specialfn::{bessel_jy, lgam};
use crate::Error;
use rand::Rng;

const LN_INFLATION: f64 = 1e-3;
const MAX_PROPOSALS: u64 = 1_000_000;
const TURNING_CELLS: usize = 64;
const TURNING_WIDTH: f64 = 8.0;
const FIRST_STEP: f64 = 0.05;
const STEP_RATIO: f64 = 1.1;
const OUTER_FACTOR: f64 = 4.0;

/// Smallest order accepted by [`LargeOrderSampler`].
pub const MIN_ORDER: f64 = 8.0;

#[derive(Debug, Clone, Copy)]
struct Piece {
    /// Reference point and log of the bound there; the bound is `exp(ln_v) (x/x_ref)^k`.
    x_ref: f64,
    ln_v: f64,
    k: f64,
    /// Range in units of `x_ref`; `hi` may be infinite, `lo` may be zero.
    lo: f64,
    hi: f64,
}

impl Piece {
    /// `∫ (x/x_ref)^k dx / x_ref` over the piece.
    fn unit_mass(&self) -> f64 {
        let k1 = self.k + 1.0;
        if k1.abs() < 1e-12 {
            (self.hi / self.lo).ln()
        } else if self.hi.is_infinite() {
            -self.lo.powf(k1) / k1
        } else {
            (self.hi.powf(k1) - self.lo.powf(k1)) / k1
        }
    }

    fn ln_mass(&self) -> f64 {
        self.ln_v + self.x_ref.ln() + self.unit_mass().ln()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let v = uniform_pos(rng);
        let k1 = self.k + 1.0;
        let u = if k1.abs() < 1e-12 {
            self.lo * (self.hi / self.lo).powf(v)
        } else if self.hi.is_infinite() {
            self.lo * v.powf(1.0 / k1)
        } else {
            let (a, b) = (self.lo.powf(k1), self.hi.powf(k1));
            (a + v * (b - a)).powf(1.0 / k1).clamp(self.lo, self.hi)
        };
        u * self.x_ref
    }

    fn ln_bound(&self, x: f64) -> f64 {
        self.ln_v + self.k * (x / self.x_ref).ln()
    }
}

/// Exact sampler for `f(t) ∝ t^p J_m(t/2)²` with `m ≥ MIN_ORDER` and `p < 0`.
#[derive(Debug, Clone)]
pub struct LargeOrderSampler {
    pub p: f64,
    pub m: f64,
    pieces: Vec<Piece>,
    cumulative: Vec<f64>,
}

fn ln_j(m: f64, x: f64) -> f64 {
    bessel_jy(m, x).0.ln()
}

fn ln_m2(m: f64, x: f64) -> f64 {
    let (j, y) = bessel_jy(m, x);
    (j * j + y * y).ln()
}

impl LargeOrderSampler {
    pub fn new(p: f64, m: f64) -> Result<Self, Error> {
        if !(m >= MIN_ORDER) || !(p < 0.0) || !m.is_finite() || !p.is_finite() {
            return Err(Error::Envelope(format!("large-order sampler needs m >= {MIN_ORDER} and p < 0 (m={m}, p={p})")));
        }
        let w = m.cbrt();
        let x_half = 0.5 * m;
        let x_lo = (m - TURNING_WIDTH * w).max(x_half);
        let mut pieces = Vec::new();
        let ln_series = 2.0 * (m * (0.5 * x_half).ln() - lgam(m + 1.0)) + p * x_half.ln();
        pieces.push(Piece { x_ref: x_half, ln_v: ln_series, k: p + 2.0 * m, lo: 0.0, hi: 1.0 });
        if x_lo > x_half {
            pieces.push(Piece { x_ref: x_half, ln_v: 2.0 * ln_j(m, x_lo) + p * x_half.ln(), k: p, lo: 1.0, hi: x_lo / x_half });
        }
        let h = (m - x_lo) / TURNING_CELLS as f64;
        for i in 0..TURNING_CELLS {
            let a = x_lo + i as f64 * h;
            let b = if i + 1 == TURNING_CELLS { m } else { a + h };
            pieces.push(Piece { x_ref: a, ln_v: 2.0 * ln_j(m, b) + p * a.ln(), k: p, lo: 1.0, hi: b / a });
        }
        let x_max = OUTER_FACTOR * m;
        let mut a = m;
        let mut s = FIRST_STEP;
        loop {
            let b = (m + s * w).min(x_max);
            let ln_v = ln_m2(m, a) + p * a.ln();
            let hi = if a >= x_max { f64::INFINITY } else { b / a };
            pieces.push(Piece { x_ref: a, ln_v, k: p - 1.0, lo: 1.0, hi });
            if a >= x_max {
                break;
            }
            a = b;
            s *= STEP_RATIO;
        }
        for pc in &mut pieces {
            pc.ln_v += LN_INFLATION;
        }
        let ln_masses: Vec<f64> = pieces.iter().map(Piece::ln_mass).collect();
        if ln_masses.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::Envelope(format!("large-order envelope failed (m={m}, p={p})")));
        }
        let top = ln_masses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = ln_masses
            .iter()
            .map(|v| {
                acc += (v - top).exp();
                acc
            })
            .collect();
        cumulative.iter_mut().for_each(|c| *c /= acc);
        Ok(Self { p, m, pieces, cumulative })
    }

    /// Unnormalized `ln f` in the variable `x = t/2`.
    fn ln_target(&self, x: f64) -> f64 {
        self.p * x.ln() + 2.0 * bessel_jy(self.m, x).0.abs().ln()
    }

    /// One draw of `t` and the number of proposals it took.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(f64, u64), Error> {
        for k in 1..=MAX_PROPOSALS {
            let u: f64 = rng.random();
            let i = self.cumulative.partition_point(|&c| c <= u).min(self.pieces.len() - 1);
            let piece = &self.pieces[i];
            let x = piece.sample(rng);
            let v = uniform_pos(rng);
            if v.ln() + piece.ln_bound(x) <= self.ln_target(x) {
                return Ok((2.0 * x, k));
            }
        }
        Err(Error::Envelope(format!("no acceptance in {MAX_PROPOSALS} proposals")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::envelope::BesselPowerDensity;
    use crate::samplers::RngStream;

    fn ln_f(p: f64, m: f64, x: f64) -> f64 {
        p * x.ln() + 2.0 * bessel_jy(m, x).0.abs().ln()
    }

    #[test]
    fn bound_dominates_on_a_dense_grid() {
        for &(p, m) in &[(-1.0, 400.0), (-5.5, 1000.0), (-3.0, 20.0), (-1.5, 5000.5)] {
            let s = LargeOrderSampler::new(p, m).unwrap();
            for pc in &s.pieces {
                let hi = if pc.hi.is_infinite() { 10.0 } else { pc.hi };
                let lo = if pc.lo == 0.0 { 0.2 } else { pc.lo };
                for j in 0..=200 {
                    let x = pc.x_ref * (lo + (hi - lo) * j as f64 / 200.0);
                    let f = ln_f(p, m, x);
                    assert!(f <= pc.ln_bound(x) + 1e-9, "p={p} m={m} x={x}: {f} > {}", pc.ln_bound(x));
                }
            }
        }
    }

    #[test]
    fn matches_the_two_piece_sampler() {
        let d = BesselPowerDensity { ln_k: 0.0, p: -2.0, m: 30.0, dim: 2 };
        let a = crate::samplers::BesselPowerSampler::new(d).unwrap();
        let b = LargeOrderSampler::new(d.p, d.m).unwrap();
        let mut r1 = RngStream::new(5, 0).generator();
        let mut r2 = RngStream::new(6, 0).generator();
        let n = 20_000;
        let mut xa: Vec<f64> = (0..n).map(|_| a.sample(&mut r1).unwrap().0).collect();
        let mut xb: Vec<f64> = (0..n).map(|_| b.sample(&mut r2).unwrap().0).collect();
        xa.sort_by(f64::total_cmp);
        xb.sort_by(f64::total_cmp);
        let (mut i, mut j, mut dmax) = (0, 0, 0.0f64);
        while i < n && j < n {
            if xa[i] <= xb[j] {
                i += 1;
            } else {
                j += 1;
            }
            dmax = dmax.max((i as f64 - j as f64).abs() / n as f64);
        }
        assert!(dmax < 0.02, "two-sample D = {dmax}");
    }

    #[test]
    fn acceptance_is_reasonable() {
        let s = LargeOrderSampler::new(-5.5, 2000.0).unwrap();
        let mut rng = RngStream::new(1, 0).generator();
        let k: u64 = (0..2000).map(|_| s.sample(&mut rng).unwrap().1).sum();
        assert!(2000.0 / (k as f64) > 0.3, "acceptance {}", 2000.0 / k as f64);
    }
}

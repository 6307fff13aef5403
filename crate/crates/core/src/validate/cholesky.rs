use crate::engine::Locations;
use crate::models::CorrelationModel;
use crate::samplers::RngStream;
use crate::Error;
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

/// Largest point set accepted by the dense reference simulator.
pub const MAX_CHOLESKY_POINTS: usize = 10_000;

/// Lower Cholesky factor of `C_ij = σ² φ(‖s_i − s_j‖)`, with the diagonal
/// jitter that was needed to factor it.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    pub lower: DMatrix<f64>,
    /// Jitter added to the diagonal, as a multiple of the sill; 0 if none was needed.
    pub jitter: f64,
}

impl CholeskyFactor {
    /// Tries no jitter first, then `10⁻¹²σ²` growing ×10 up to `10⁻⁶σ²`.
    pub fn new(model: &CorrelationModel, locations: &Locations) -> Result<Self, Error> {
        let n = locations.len();
        if n > MAX_CHOLESKY_POINTS {
            return Err(Error::Input(format!("{n} points exceed the dense Cholesky limit of {MAX_CHOLESKY_POINTS}")));
        }
        let mut cov = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            cov[(i, i)] = model.sill;
            for j in 0..i {
                let h = locations
                    .row(i)
                    .iter()
                    .zip(locations.row(j))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let c = model.cov(h)?;
                cov[(i, j)] = c;
                cov[(j, i)] = c;
            }
        }
        let mut jitter = 0.0;
        loop {
            let mut m = cov.clone();
            for i in 0..n {
                m[(i, i)] += jitter * model.sill;
            }
            if let Some(ch) = m.cholesky() {
                return Ok(Self { lower: ch.l(), jitter });
            }
            jitter = if jitter == 0.0 { 1e-12 } else { jitter * 10.0 };
            if jitter > 1e-6 * (1.0 + 1e-9) {
                return Err(Error::Cholesky { jitter: jitter / 10.0 });
            }
        }
    }

    /// `L z` with `z` standard normal from stream `(seed, 0)`.
    pub fn sample(&self, seed: u64) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0).generator();
        let n = self.lower.nrows();
        let z = DVector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(&mut rng)));
        (&self.lower * z).iter().copied().collect()
    }
}

pub fn cholesky_simulate(
    model: &CorrelationModel,
    dim: usize,
    locations: &Locations,
    seed: u64,
) -> Result<Vec<f64>, Error> {
    if locations.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: locations.dim() });
    }
    Ok(CholeskyFactor::new(model, locations)?.sample(seed))
}

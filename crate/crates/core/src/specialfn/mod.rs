//! Special functions required by the correlation models and their spectral
//! densities: log-gamma, Bessel `J` and `K`, Gauss `2F1`, Tricomi `U`, and the
//! terminating `4F3` coefficients of the Gasper expansion.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod gamma;
mod hyper;
pub mod quad;

pub use bessel::{bessel_j, bessel_k};
pub(crate) use bessel::{bessel_jy, bessel_k_scaled};
pub use gamma::{ln_beta, log_gamma};
pub use hyper::{
    gasper_coefficient, gasper_coefficients, gauss_2f1, gauss_2f1_with, tricomi_u,
    GasperCoefficient,
};
pub use hyper::{ln_gauss_2f1_euler, ln_tricomi_u};
pub(crate) use hyper::ln_gauss_2f1_euler_c;
pub(crate) use gamma::lgam;

use thiserror::Error;

/// Series truncation controls for `2F1` and friends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalAccuracy {
    /// Stop once a term is below `rel_tol` times the partial sum.
    pub rel_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
}

impl Default for EvalAccuracy {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 10_000 }
    }
}

impl EvalAccuracy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self, SpecialFnError> {
        if !(rel_tol > 0.0) || max_terms == 0 {
            return Err(SpecialFnError::Domain {
                function: "EvalAccuracy",
                detail: format!("rel_tol={rel_tol}, max_terms={max_terms}"),
            });
        }
        Ok(Self { rel_tol, max_terms })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFnError {
    #[error("{function}: argument outside the domain ({detail})")]
    Domain { function: &'static str, detail: String },
    #[error("{function}: result overflows f64")]
    Overflow { function: &'static str },
    #[error("{function}: no convergence after {terms} terms")]
    NoConvergence { function: &'static str, terms: usize },
}

/// Surface area of the unit sphere `S^{d-1}` in log form.
pub fn ln_sphere_area(dim: usize) -> f64 {
    let h = dim as f64 / 2.0;
    std::f64::consts::LN_2 + h * std::f64::consts::PI.ln() - statrs::function::gamma::ln_gamma(h)
}

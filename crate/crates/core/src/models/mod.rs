//! Correlation families, their validity regions and reparameterizations.

mod corr;
mod params;
pub mod spectral;

pub use corr::{gh_corr, kummer_corr, matern_corr, theoretical_semivariogram};
pub use params::{
    gh_classify_region, gh_is_valid, gh_validity_violation, kummer_matern_reparam, kummer_matern_scale,
    wendland_matern_reparam, CorrelationModel, GHParams, KummerParams, MaternParams, ModelKind,
    RegionClass,
};

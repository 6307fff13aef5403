//! Statistical checks of simulated fields and frequency samplers.

mod cholesky;
mod semivariogram;
pub mod stats;

pub use cholesky::{cholesky_simulate, CholeskyFactor, MAX_CHOLESKY_POINTS};
pub use semivariogram::{empirical_semivariogram, PairBinning, Semivariogram};
mod reference;

pub use reference::{
    kummer_radius_table, matern_mean_arctan_radius, reference_radius_law, GHSpectralOracle, RadiusLaw, TabulatedCdf,
    REFERENCE_NODES,
};
mod scenario;

pub use scenario::{
    parse_scenario, preset, run_scenario, CholeskyComparison, CholeskyConfig, Scenario, ScenarioConfig,
    ScenarioReport, PRESETS,
};
mod diagnostics;

pub use diagnostics::{sampler_diagnostics, RejectionStats, SamplerDiagnostics, REPORTED_COMPONENTS};

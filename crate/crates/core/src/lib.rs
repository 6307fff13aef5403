//! Spectral turning-bands simulation of isotropic Gaussian random fields.
//!
//! A field with correlation `φ` and sill `σ²` is approximated at arbitrary
//! locations by a sum of `L` random cosine waves,
//!
//! ```text
//! Z(s) = σ Σ_ℓ √(−2 ln ε_ℓ / L) cos(Ω_ℓ·s + Φ_ℓ)
//! ```
//!
//! with `Ω_ℓ` drawn from the normalized spectral density of `φ`. The crate
//! ships exact frequency samplers for three families: Matérn,
//! Kummer-Tricomi, and the compactly supported Gauss-Hypergeometric family
//! (which contains the Generalized Wendland kernels).
//!
//! ```
//! use stbsim::models::{CorrelationModel, GHParams};
//! use stbsim::engine::{simulate, Locations};
//!
//! let gw = GHParams::wendland(1.0, 7.0, 0.2, 2).unwrap();
//! let model = CorrelationModel::gauss_hyper(gw, 1.0).unwrap();
//! let locs = Locations::from_rows(&[[0.0, 0.0], [0.05, 0.0], [0.5, 0.5]]).unwrap();
//! let field = simulate(&model, 2, &locs, 1000, 7).unwrap();
//! assert_eq!(field.values.len(), 3);
//! ```

pub mod engine;
pub mod models;
pub mod samplers;
pub mod specialfn;
pub mod validate;

mod error;

/// The user guide, one module per chapter; its examples run as doc-tests.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/models.md")]
    pub mod models {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    pub mod spectral {}
    #[doc = include_str!("../../../book/src/samplers.md")]
    pub mod samplers {}
    #[doc = include_str!("../../../book/src/validation.md")]
    pub mod validation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}

pub use error::Error;

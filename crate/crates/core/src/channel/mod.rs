//! Correlation matrices, eigen-spectra, partial fractions, fading laws and
//! scenario configuration.

mod config;
mod correlation;
mod fading;
mod spectrum;

pub use config::{db_to_linear, link_budget, linear_to_db, ChannelConfig, LinkBudget};
pub use correlation::CorrelationMatrix;
pub use fading::{FadingModel, GainDistribution, PowerGain};
pub use spectrum::{
    gamma_int_cdf, two_antenna_eigenvalues, Eigenspectrum, GammaSum, GenChi2, PartialFraction,
    DISTINCT_REL_GAP, ZERO_EIG_TOL,
};

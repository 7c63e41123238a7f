pub mod capacity;
pub mod channel;
pub mod dmt;
pub mod error;
pub mod mcsim;
pub mod multirelay;
pub mod outage;
mod quadrature;
pub mod scalar;
pub mod scenario;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Spectrum = channel::Eigenspectrum<f64>;
pub type Spectrum32 = channel::Eigenspectrum<f32>;
pub type PartialFractions = channel::PartialFraction<f64>;
pub type PartialFractions32 = channel::PartialFraction<f32>;
pub type Expansion = outage::LowOutageExpansion<f64>;
pub type Expansion32 = outage::LowOutageExpansion<f32>;
pub type Table = outage::SeriesTable<f64>;
pub type Table32 = outage::SeriesTable<f32>;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Target rate (nats/s/Hz) and average SNR (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageQuery<T> {
    pub rate_nats: T,
    pub snr_linear: T,
}

impl<T: Real> OutageQuery<T> {
    pub fn new(rate_nats: T, snr_linear: T) -> Result<Self> {
        if !(rate_nats.is_finite() && rate_nats >= T::zero()) {
            return Err(Error::Domain(format!("rate must be finite and non-negative, got {rate_nats}")));
        }
        if !(snr_linear.is_finite() && snr_linear > T::zero()) {
            return Err(Error::Domain(format!("SNR must be finite and positive, got {snr_linear}")));
        }
        Ok(Self {
            rate_nats,
            snr_linear,
        })
    }

    /// Normalized threshold x = (e^R − 1)/γ.
    pub fn x(&self) -> T {
        self.rate_nats.exp_m1() / self.snr_linear
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold() {
        let q = OutageQuery::new(2f64.ln(), 100.0).unwrap();
        assert!((q.x() - 0.01).abs() < 1e-17);
        assert_eq!(OutageQuery::new(0.0, 5.0).unwrap().x(), 0.0);
        assert!(OutageQuery::new(-1.0, 5.0).is_err());
        assert!(OutageQuery::new(1.0, 0.0).is_err());
    }
}

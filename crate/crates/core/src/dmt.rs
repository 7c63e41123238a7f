//! Diversity-multiplexing tradeoff, at finite SNR and asymptotically.

use crate::channel::ChannelConfig;
use crate::error::{Error, Result};
use crate::outage::{outage_probability, Protocol};

/// Outage probabilities below this are reported as saturated.
pub const P_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmtPoint {
    pub r: f64,
    pub d: f64,
    /// Linear SNR; None for the asymptotic tradeoff.
    pub gamma: Option<f64>,
    /// The outage probability underflowed and d was computed from `P_FLOOR`.
    pub saturated: bool,
}

fn check_r(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::Domain(format!("multiplexing gain must lie in [0, 1], got {r}")))
    }
}

/// d = −ln P_out / ln γ at the rate with e^R − 1 = γ^r.
pub fn finite_snr_dmt(gamma: f64, r: f64, cfg: &ChannelConfig, protocol: Protocol) -> Result<DmtPoint> {
    finite_snr_dmt_with(gamma, r, |x| outage_probability(cfg, x, protocol))
}

/// Finite-SNR diversity for any outage function of the normalized threshold.
pub fn finite_snr_dmt_with<F>(gamma: f64, r: f64, p_of_x: F) -> Result<DmtPoint>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(gamma.is_finite() && gamma > 1.0) {
        return Err(Error::Domain(format!("SNR must exceed 1, got {gamma}")));
    }
    check_r(r)?;
    let ln_g = gamma.ln();
    // e^R − 1 = γ^r, so that R = r ln γ + o(1) and r = 0 keeps a nonzero rate
    let x = ((r - 1.0) * ln_g).exp();
    let p = p_of_x(x)?;
    let saturated = p < P_FLOOR;
    Ok(DmtPoint {
        r,
        d: -p.max(P_FLOOR).ln() / ln_g,
        gamma: Some(gamma),
        saturated,
    })
}

/// Σ_i min(d_s,i, d_d,i)·(1 − r) over the relays (one entry for a single relay).
pub fn asymptotic_dmt(orders: &[(f64, f64)], r: f64) -> Result<f64> {
    check_r(r)?;
    if orders.is_empty() {
        return Err(Error::Validation("no relay diversity orders given".into()));
    }
    let mut total = 0.0;
    for &(ds, dd) in orders {
        if !(ds > 0.0 && dd > 0.0 && ds.is_finite() && dd.is_finite()) {
            return Err(Error::Domain(format!(
                "diversity orders must be positive and finite, got ({ds}, {dd})"
            )));
        }
        total += ds.min(dd);
    }
    Ok(total * (1.0 - r))
}

/// Asymptotic tradeoff of a single relay channel; the same for AF and DF.
pub fn asymptotic_dmt_config(cfg: &ChannelConfig, r: f64) -> Result<DmtPoint> {
    let d = asymptotic_dmt(&[cfg.diversity_orders()?], r)?;
    Ok(DmtPoint {
        r,
        d,
        gamma: None,
        saturated: false,
    })
}

//! Outage capacity: inversion of the outage curve and the SNR loss x_ε.

use crate::channel::ChannelConfig;
use crate::error::{Error, Result};
use crate::outage::{lowout_config, outage_probability, LowOutageExpansion, Protocol};

/// Target accuracy |P(x) − ε| / ε of the inversion.
pub const INVERT_REL_TOL: f64 = 1e-12;
/// Accuracy below which the inversion reports a failure instead of a value.
pub const INVERT_ACCEPT_TOL: f64 = 1e-9;

const LN_X_MIN: f64 = -690.0;
const LN_X_MAX: f64 = 40.0;

/// Solves P(x) = ε for a strictly increasing evaluator.
///
/// Works on u = ln x with a bracketing secant on ln P (Illinois variant),
/// which converges in a handful of steps because ln P is close to linear in
/// ln x at small x. Returns a range error if ε is not attained on
/// x ∈ [e^-690, e^40].
pub fn invert_outage<F>(eps: f64, p_of_x: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("outage level must lie in (0, 1), got {eps}")));
    }
    let target = eps.ln();
    let g = |u: f64| -> Result<(f64, f64)> {
        let p = p_of_x(u.exp())?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::NumericalFailure {
                routine: "invert_outage",
                detail: format!("evaluator returned {p} at x = {}", u.exp()),
            });
        }
        Ok((p, if p > 0.0 { p.ln() - target } else { f64::NEG_INFINITY }))
    };

    // bracket, starting from x = eps
    let mut lo = eps.ln().max(LN_X_MIN);
    let mut hi = lo;
    let (mut p_lo, mut f_lo) = g(lo)?;
    let (mut p_hi, mut f_hi) = (p_lo, f_lo);
    let mut step = 2.0;
    while f_lo > 0.0 {
        hi = lo;
        (p_hi, f_hi) = (p_lo, f_lo);
        if lo <= LN_X_MIN {
            return Err(Error::Range(format!(
                "outage level {eps:e} lies below P(x) = {p_lo:e} at the smallest threshold"
            )));
        }
        lo = (lo - step).max(LN_X_MIN);
        step *= 2.0;
        (p_lo, f_lo) = g(lo)?;
    }
    while f_hi < 0.0 {
        lo = hi;
        (p_lo, f_lo) = (p_hi, f_hi);
        if hi >= LN_X_MAX {
            return Err(Error::Range(format!(
                "outage level {eps:e} lies above P(x) = {p_hi:e} at the largest threshold"
            )));
        }
        hi = (hi + step).min(LN_X_MAX);
        step *= 2.0;
        (p_hi, f_hi) = g(hi)?;
    }
    for (p, u) in [(p_lo, lo), (p_hi, hi)] {
        if (p - eps).abs() <= INVERT_REL_TOL * eps {
            return Ok(u.exp());
        }
    }

    let mut best = if (p_lo - eps).abs() < (p_hi - eps).abs() {
        (lo, p_lo)
    } else {
        (hi, p_hi)
    };
    let mut side = 0i8;
    for _ in 0..300 {
        let u = if f_lo.is_finite() && f_hi.is_finite() {
            let s = hi - (hi - lo) * f_hi / (f_hi - f_lo);
            if s > lo && s < hi {
                s
            } else {
                0.5 * (lo + hi)
            }
        } else {
            0.5 * (lo + hi)
        };
        let (p, f) = g(u)?;
        if (p - eps).abs() < (best.1 - eps).abs() {
            best = (u, p);
        }
        if (p - eps).abs() <= INVERT_REL_TOL * eps {
            return Ok(u.exp());
        }
        if f < 0.0 {
            lo = u;
            f_lo = f;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = u;
            f_hi = f;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    if (best.1 - eps).abs() <= INVERT_ACCEPT_TOL * eps {
        Ok(best.0.exp())
    } else {
        Err(Error::NumericalFailure {
            routine: "invert_outage",
            detail: format!(
                "no threshold with P within {INVERT_ACCEPT_TOL:e} of {eps:e} (closest P = {:e})",
                best.1
            ),
        })
    }
}

/// x_ε for a configuration: the SNR loss relative to AWGN at outage level ε.
pub fn snr_loss(eps: f64, cfg: &ChannelConfig, protocol: Protocol) -> Result<f64> {
    invert_outage(eps, |x| outage_probability(cfg, x, protocol))
}

/// C_ε = ln(1 + γ x_ε) with its high- and low-SNR forms, in nats/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageCapacity {
    pub eps: f64,
    pub gamma: f64,
    pub x_eps: f64,
    pub exact: f64,
    /// ln γ − ln(1/x_ε), for γ x_ε ≫ 1.
    pub high_snr: f64,
    /// γ x_ε, for γ x_ε ≪ 1.
    pub low_snr: f64,
}

impl OutageCapacity {
    pub fn from_x(eps: f64, gamma: f64, x_eps: f64) -> Self {
        let gx = gamma * x_eps;
        Self {
            eps,
            gamma,
            x_eps,
            exact: gx.ln_1p(),
            high_snr: gx.ln(),
            low_snr: gx,
        }
    }

    /// AWGN capacity ln(1 + γ).
    pub fn awgn(&self) -> f64 {
        self.gamma.ln_1p()
    }
}

pub fn outage_capacity(
    eps: f64,
    gamma: f64,
    cfg: &ChannelConfig,
    protocol: Protocol,
) -> Result<OutageCapacity> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Domain(format!("SNR must be positive and finite, got {gamma}")));
    }
    Ok(OutageCapacity::from_x(eps, gamma, snr_loss(eps, cfg, protocol)?))
}

/// Low-outage approximation of x_ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrLossApprox {
    /// None where the approximation does not apply.
    pub x_eps: Option<f64>,
    pub expansion: LowOutageExpansion<f64>,
}

/// Inverts the leading term a·x^p (+ b·x^p·ln(1/x) when m = n) of the AF
/// low-outage expansion. Only Rayleigh links have such an expansion.
pub fn snr_loss_approx(eps: f64, cfg: &ChannelConfig) -> Result<SnrLossApprox> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("outage level must lie in (0, 1), got {eps}")));
    }
    let e = lowout_config(cfg)?;
    let p = e.leading_power as f64;
    let (a, b) = (e.coeff_poly, e.coeff_log);
    let x = if b == 0.0 {
        (a > 0.0).then(|| (eps / a).powf(1.0 / p))
    } else if b > 0.0 && eps < b {
        let denom = a + b * (b / eps).ln();
        (denom > 0.0).then(|| (eps * p / denom).powf(1.0 / p))
    } else {
        None
    };
    Ok(SnrLossApprox {
        x_eps: x.filter(|v| v.is_finite() && *v > 0.0),
        expansion: e,
    })
}

/// Capacity loss relative to AWGN implied by x_ε: the additive high-SNR loss
/// ln x_ε (nats) and the multiplicative low-SNR factor x_ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityLoss {
    pub x_eps: f64,
    pub additive: f64,
    pub multiplicative: f64,
    /// True when x_ε came from the low-outage approximation.
    pub approximate: bool,
}

/// Uses the approximate x_ε where it applies and the exact inversion otherwise.
pub fn capacity_loss(eps: f64, cfg: &ChannelConfig) -> Result<CapacityLoss> {
    let approx = snr_loss_approx(eps, cfg)?;
    let (x, approximate) = match approx.x_eps {
        Some(x) => (x, true),
        None => (snr_loss(eps, cfg, Protocol::Af)?, false),
    };
    Ok(CapacityLoss {
        x_eps: x,
        additive: x.ln(),
        multiplicative: x,
        approximate,
    })
}

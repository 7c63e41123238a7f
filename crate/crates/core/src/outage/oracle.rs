//! Outage probability by direct quadrature of the defining integral, and the
//! decode-and-forward outage.

use crate::channel::GainDistribution;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// P_out = ∫ f_d(t)·F_s(x(1 + αt)/t) dt over t > 0, for any pair of link laws.
///
/// The integral is taken in u = ln t so that the relative accuracy does not
/// depend on the size of x; the mass below and above the integration window
/// is added in closed form.
pub fn outage_af_quadrature(
    x: f64,
    alpha: f64,
    dist_s: &dyn GainDistribution,
    dist_d: &dyn GainDistribution,
) -> Result<f64> {
    check_threshold(x)?;
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Domain(format!("alpha must be finite and non-negative, got {alpha}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let f_s = |t: f64| dist_s.cdf(x / t + alpha * x);
    let t_lo = x.min(1.0) * 1e-14;
    let t_hi = dist_d.tail_point(1e-30).max(10.0 * x);
    let head = dist_d.cdf(t_lo);
    let tail = dist_d.sf(t_hi) * f_s(t_hi);

    let integrand = |u: f64| {
        let t = u.exp();
        let w = dist_d.pdf(t) * t;
        if w == 0.0 {
            0.0
        } else {
            w * f_s(t)
        }
    };
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-12,
        max_intervals: 8000,
    };
    let mut breaks = vec![t_lo.ln(), x.ln(), 0.0, dist_d.mean().ln(), t_hi.ln()];
    breaks.retain(|b| b.is_finite());
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    breaks.dedup();
    let lo = t_lo.ln();
    let hi = t_hi.ln();
    let pts: Vec<f64> = breaks.into_iter().filter(|&b| b >= lo && b <= hi).collect();
    let mut body = 0.0;
    let mut err = 0.0;
    for w in pts.windows(2) {
        let r = integrate(integrand, w[0], w[1], opts).map_err(|e| match e {
            Error::NumericalFailure { detail, .. } => Error::NumericalFailure {
                routine: "outage quadrature",
                detail: format!("x = {x:e}, alpha = {alpha}: {detail}"),
            },
            other => other,
        })?;
        body += r.value;
        err += r.abs_error;
    }
    let p = head + body + tail;
    if !p.is_finite() {
        return Err(Error::NumericalFailure {
            routine: "outage quadrature",
            detail: format!("non-finite result at x = {x:e}, alpha = {alpha} (error estimate {err:e})"),
        });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Decode-and-forward: outage when either link falls below x,
/// P = F_s + F_d − F_s·F_d.
pub fn outage_df(x: f64, dist_s: &dyn GainDistribution, dist_d: &dyn GainDistribution) -> Result<f64> {
    check_threshold(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let fs = dist_s.cdf(x);
    let fd = dist_d.cdf(x);
    Ok((fs + fd - fs * fd).clamp(0.0, 1.0))
}

fn check_threshold(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("threshold x must be finite and non-negative, got {x}")))
    }
}

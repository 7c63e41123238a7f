//! Outage probability of the single-relay channel: closed forms, series,
//! low-outage expansions and the quadrature oracle.

mod closed_form;
mod lowout;
mod oracle;
mod powerlog;
mod query;
mod series;

use std::fmt;
use std::str::FromStr;

pub use closed_form::{
    outage_af_correlated, outage_af_distinct, outage_af_iid, perturb_clusters, SpectrumRoute,
    CLUSTER_CHECK_TOL, CLUSTER_SPLIT,
};
pub use lowout::{
    b_m, d_kl, lowout_correlated, lowout_distinct, lowout_iid, two_by_one_coefficient,
    LowOutageExpansion,
};
pub use oracle::{outage_af_quadrature, outage_df};
pub use query::OutageQuery;
pub use series::{
    outage_series_iid, explicit_table, series_table_correlated, series_table_iid,
    series_table_noiseless, SeriesTable, SplitCoefficients, SERIES_MAX_ORDER, SERIES_REL_TOL,
    SERIES_X_MAX,
};

use crate::channel::{ChannelConfig, Eigenspectrum, GainDistribution};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use closed_form::{check_inputs, verify_against_oracle};
use series::correlated_series_scale;

/// Below this x the series representation replaces the closed forms, which
/// lose relative accuracy to cancellation against 1.
const SERIES_SWITCH_X: f64 = 0.1;

/// Relay protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Protocol {
    #[default]
    Af,
    Df,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Af => "af",
            Protocol::Df => "df",
        })
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "af" => Ok(Protocol::Af),
            "df" => Ok(Protocol::Df),
            other => Err(Error::Validation(format!("unknown protocol '{other}' (expected af or df)"))),
        }
    }
}

/// i.i.d. Rayleigh AF outage with full relative accuracy down to tiny x.
pub fn outage_af_iid_accurate<T: Real>(x: T, alpha: T, m: usize, n: usize) -> Result<T> {
    check_inputs(x, alpha)?;
    if x > T::zero() && x <= lit(SERIES_SWITCH_X) && alpha * x <= T::one() {
        let (p, table) = outage_series_iid(x, alpha, m, n, SERIES_MAX_ORDER)?;
        if table.eval(x).2 {
            return Ok(p);
        }
    }
    outage_af_iid(x, alpha, m, n)
}

/// Correlated Rayleigh AF outage with full relative accuracy down to tiny x.
pub fn outage_af_correlated_accurate<T: Real>(
    x: T,
    alpha: T,
    sr: &Eigenspectrum<T>,
    rd: &Eigenspectrum<T>,
) -> Result<T> {
    check_inputs(x, alpha)?;
    match SpectrumRoute::new(sr, rd)? {
        SpectrumRoute::Flat {
            m,
            n,
            x_scale,
            alpha_scale,
        } => outage_af_iid_accurate(x * x_scale, alpha * alpha_scale, m, n),
        SpectrumRoute::Distinct {
            sr: a,
            rd: b,
            perturbed,
        } => {
            if x == T::zero() {
                return Ok(T::zero());
            }
            let mut value = None;
            if correlated_series_scale(x, alpha, &a, &b) <= lit(SERIES_SWITCH_X) {
                let table = series_table_correlated(alpha, &a, &b, SERIES_MAX_ORDER)?;
                let (v, _, converged) = table.eval(x);
                if converged {
                    value = Some(v.max(T::zero()).min(T::one()));
                }
            }
            let p = match value {
                Some(v) => v,
                None => outage_af_distinct(x, alpha, &a, &b)?,
            };
            if perturbed {
                verify_against_oracle(p, x, alpha, sr, rd)
            } else {
                Ok(p)
            }
        }
    }
}

/// Outage probability of a configuration at normalized threshold x.
///
/// Rayleigh links use the analytic forms; other fading families go through
/// quadrature (AF) or their link CDFs (DF). Without source CSI the source
/// transmits isotropically, which costs a factor m on the source-relay SNR.
pub fn outage_probability(cfg: &ChannelConfig, x: f64, protocol: Protocol) -> Result<f64> {
    cfg.validate()?;
    check_inputs(x, 0.0)?;
    let xs = cfg.effective_threshold(x);
    match protocol {
        Protocol::Af => {
            if cfg.is_iid_rayleigh() {
                outage_af_iid_accurate(xs, cfg.alpha, cfg.m, cfg.n)
            } else if cfg.is_rayleigh() {
                let (sr, rd) = cfg.spectra()?;
                outage_af_correlated_accurate(xs, cfg.alpha, &sr, &rd)
            } else {
                let (s, d) = cfg.link_distributions()?;
                outage_af_quadrature(xs, cfg.alpha, &s, &d)
            }
        }
        Protocol::Df => {
            let (s, d) = cfg.link_distributions()?;
            let fs = s.cdf(xs);
            let fd = d.cdf(x);
            Ok((fs + fd - fs * fd).clamp(0.0, 1.0))
        }
    }
}

/// Low-outage expansion of the AF outage of a Rayleigh configuration,
/// including the threshold shift without source CSI.
pub fn lowout_config(cfg: &ChannelConfig) -> Result<LowOutageExpansion<f64>> {
    cfg.validate()?;
    if !cfg.is_rayleigh() {
        return Err(Error::Validation(
            "the low-outage expansion is available for Rayleigh links only".into(),
        ));
    }
    let e = if cfg.is_iid_rayleigh() {
        lowout_iid(cfg.alpha, cfg.m, cfg.n)?
    } else {
        let (sr, rd) = cfg.spectra()?;
        lowout_correlated(cfg.alpha, &sr, &rd)?
    };
    let c = cfg.effective_threshold(1.0);
    Ok(if c != 1.0 { e.rescaled(c) } else { e })
}

/// Quadrature value for any configuration (the reference the analytic
/// paths are checked against).
pub fn outage_probability_quadrature(cfg: &ChannelConfig, x: f64) -> Result<f64> {
    cfg.validate()?;
    let (s, d) = cfg.link_distributions()?;
    outage_af_quadrature(cfg.effective_threshold(x), cfg.alpha, &s, &d)
}

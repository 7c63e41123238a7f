//! Selection relaying over independent relays.

use crate::channel::ChannelConfig;
use crate::dmt::asymptotic_dmt;
use crate::error::{Error, Result};
use crate::outage::{lowout_iid, outage_probability, LowOutageExpansion, Protocol};

/// N independent relay links plus an optional direct-link outage factor.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaySet {
    links: Vec<ChannelConfig>,
    direct_p: Option<f64>,
}

impl RelaySet {
    pub fn new(links: Vec<ChannelConfig>, direct_p: Option<f64>) -> Result<Self> {
        if links.is_empty() {
            return Err(Error::Validation("a relay set needs at least one relay".into()));
        }
        if let Some(p) = direct_p {
            check_probability(p, "direct-link outage")?;
        }
        for l in &links {
            l.validate()?;
        }
        Ok(Self { links, direct_p })
    }

    /// `count` copies of the same link.
    pub fn identical(link: ChannelConfig, count: usize, direct_p: Option<f64>) -> Result<Self> {
        Self::new(vec![link; count], direct_p)
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn links(&self) -> &[ChannelConfig] {
        &self.links
    }

    pub fn direct_link_outage(&self) -> Option<f64> {
        self.direct_p
    }

    /// Outage of each relay link at threshold x.
    pub fn link_outages(&self, x: f64, protocol: Protocol) -> Result<Vec<f64>> {
        self.links.iter().map(|l| outage_probability(l, x, protocol)).collect()
    }

    /// Selection-relaying outage: every relay link (and the direct link) in outage.
    pub fn outage(&self, x: f64, protocol: Protocol) -> Result<f64> {
        selection_outage(&self.link_outages(x, protocol)?, self.direct_p)
    }

    /// (d_s, d_d) of each relay.
    pub fn diversity_orders(&self) -> Result<Vec<(f64, f64)>> {
        self.links.iter().map(ChannelConfig::diversity_orders).collect()
    }

    pub fn asymptotic_dmt(&self, r: f64) -> Result<f64> {
        asymptotic_dmt(&self.diversity_orders()?, r)
    }
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Validation(format!("{what} must lie in [0, 1], got {p}")))
    }
}

/// Π_i P_i, times the direct-link outage when present.
pub fn selection_outage(per_link_p: &[f64], direct_p: Option<f64>) -> Result<f64> {
    if per_link_p.is_empty() {
        return Err(Error::Validation("no relay outage probabilities given".into()));
    }
    for &p in per_link_p {
        check_probability(p, "relay outage probability")?;
    }
    if let Some(d) = direct_p {
        check_probability(d, "direct-link outage")?;
    }
    Ok(per_link_p.iter().product::<f64>() * direct_p.unwrap_or(1.0))
}

/// Low-outage form of N identical i.i.d. relays: the single-link leading term
/// raised to the N-th power.
pub fn selection_lowout(alpha: f64, m: usize, n: usize, relays: usize) -> Result<LowOutageExpansion<f64>> {
    if relays == 0 {
        return Err(Error::Validation("a relay set needs at least one relay".into()));
    }
    Ok(lowout_iid(alpha, m, n)?.powered(relays))
}

//! TOML scenario files.
//!
//! ```toml
//! m = 2
//! n = 2
//! alpha = 0.1
//! csi_at_source = true        # default true
//! rho_sr = 0.5                # exponential correlation shorthand, real ...
//! rho_rd = [0.3, 0.4]         # ... or [re, im]
//! fading_sr = "rayleigh"      # rayleigh | rician:K | nakagami:m | weibull:shape
//! fading_rd = "rayleigh"
//! relays = 3                  # identical relays for selection relaying
//! direct_p = 0.5              # optional direct-link outage probability
//!
//! [corr_rd]                   # explicit matrix instead of rho_rd
//! re = [[1.0, 0.5], [0.5, 1.0]]
//! im = [[0.0, 0.1], [-0.1, 0.0]]   # optional
//!
//! [[relay]]                   # heterogeneous relays; keys default to the top level
//! n = 3
//! alpha = 1.0
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use crate::channel::{ChannelConfig, CorrelationMatrix, FadingModel};
use crate::error::{Error, Result};
use crate::multirelay::RelaySet;

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum RhoSpec {
    Real(f64),
    Complex([f64; 2]),
}

impl RhoSpec {
    pub fn value(&self) -> Complex64 {
        match *self {
            RhoSpec::Real(r) => Complex64::new(r, 0.0),
            RhoSpec::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixSpec {
    pub fn to_correlation(&self) -> Result<CorrelationMatrix> {
        let dim = self.re.len();
        if self.re.iter().any(|row| row.len() != dim) {
            return Err(Error::Validation("correlation matrix rows must all have length dim".into()));
        }
        if let Some(im) = &self.im {
            if im.len() != dim || im.iter().any(|row| row.len() != dim) {
                return Err(Error::Validation(
                    "imaginary part must have the same shape as the real part".into(),
                ));
            }
        }
        let entries = DMatrix::from_fn(dim, dim, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            Complex64::new(self.re[i][j], im)
        });
        CorrelationMatrix::new(entries)
    }
}

/// Link description; every field is optional so relay entries can inherit.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub csi_at_source: Option<bool>,
    pub rho_sr: Option<RhoSpec>,
    pub rho_rd: Option<RhoSpec>,
    pub corr_sr: Option<MatrixSpec>,
    pub corr_rd: Option<MatrixSpec>,
    pub fading_sr: Option<String>,
    pub fading_rd: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub csi_at_source: Option<bool>,
    pub rho_sr: Option<RhoSpec>,
    pub rho_rd: Option<RhoSpec>,
    pub corr_sr: Option<MatrixSpec>,
    pub corr_rd: Option<MatrixSpec>,
    pub fading_sr: Option<String>,
    pub fading_rd: Option<String>,
    pub relays: Option<usize>,
    pub direct_p: Option<f64>,
    #[serde(default)]
    pub relay: Vec<LinkSpec>,
}

impl LinkSpec {
    /// Fields of `self` take precedence over `base`.
    pub fn overlay(&self, base: &LinkSpec) -> LinkSpec {
        LinkSpec {
            m: self.m.or(base.m),
            n: self.n.or(base.n),
            alpha: self.alpha.or(base.alpha),
            csi_at_source: self.csi_at_source.or(base.csi_at_source),
            rho_sr: self.rho_sr.or(base.rho_sr),
            rho_rd: self.rho_rd.or(base.rho_rd),
            corr_sr: self.corr_sr.clone().or_else(|| base.corr_sr.clone()),
            corr_rd: self.corr_rd.clone().or_else(|| base.corr_rd.clone()),
            fading_sr: self.fading_sr.clone().or_else(|| base.fading_sr.clone()),
            fading_rd: self.fading_rd.clone().or_else(|| base.fading_rd.clone()),
        }
    }

    pub fn resolve(&self) -> Result<ChannelConfig> {
        let m = self.m.ok_or_else(|| Error::Validation("missing antenna count m".into()))?;
        let n = self.n.ok_or_else(|| Error::Validation("missing antenna count n".into()))?;
        let alpha = self.alpha.unwrap_or(0.0);
        let corr = |rho: &Option<RhoSpec>, mat: &Option<MatrixSpec>, dim: usize, link: &str| {
            match (rho, mat) {
                (Some(_), Some(_)) => Err(Error::Validation(format!(
                    "{link}: give either rho_{link} or corr_{link}, not both"
                ))),
                (Some(r), None) => {
                    if dim < 2 {
                        return Err(Error::Validation(format!(
                            "rho_{link} needs at least two antennas on that link (dimension is {dim})"
                        )));
                    }
                    CorrelationMatrix::exponential(dim, r.value())
                }
                (None, Some(mtx)) => mtx.to_correlation(),
                (None, None) => CorrelationMatrix::identity(dim.max(1)),
            }
        };
        let fading = |s: &Option<String>| -> Result<FadingModel> {
            s.as_deref().map_or(Ok(FadingModel::Rayleigh), str::parse)
        };
        ChannelConfig::iid(m, n, alpha)?
            .with_fading(fading(&self.fading_sr)?, fading(&self.fading_rd)?)?
            .with_correlation(
                corr(&self.rho_sr, &self.corr_sr, m, "sr")?,
                corr(&self.rho_rd, &self.corr_rd, n, "rd")?,
            )
            .map(|c| c.with_csi(self.csi_at_source.unwrap_or(true)))
    }
}

impl ScenarioFile {
    /// The top-level link description.
    pub fn link(&self) -> LinkSpec {
        LinkSpec {
            m: self.m,
            n: self.n,
            alpha: self.alpha,
            csi_at_source: self.csi_at_source,
            rho_sr: self.rho_sr,
            rho_rd: self.rho_rd,
            corr_sr: self.corr_sr.clone(),
            corr_rd: self.corr_rd.clone(),
            fading_sr: self.fading_sr.clone(),
            fading_rd: self.fading_rd.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Validation(format!("scenario file: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The relay set described by the file: explicit `[[relay]]` entries, or
    /// `relays` copies of the top-level link (one if absent).
    pub fn relay_set(&self) -> Result<RelaySet> {
        let links = if self.relay.is_empty() {
            let cfg = self.link().resolve()?;
            vec![cfg; self.relays.unwrap_or(1)]
        } else {
            if self.relays.is_some_and(|r| r != self.relay.len()) {
                return Err(Error::Validation(format!(
                    "relays = {} disagrees with {} [[relay]] entries",
                    self.relays.unwrap_or(0),
                    self.relay.len()
                )));
            }
            let base = self.link();
            self.relay
                .iter()
                .map(|r| r.overlay(&base).resolve())
                .collect::<Result<_>>()?
        };
        RelaySet::new(links, self.direct_p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario() {
        let s = ScenarioFile::parse("m = 2\nn = 1\nalpha = 0.5\n").unwrap();
        let cfg = s.link().resolve().unwrap();
        assert_eq!((cfg.m, cfg.n, cfg.alpha), (2, 1, 0.5));
        assert!(cfg.is_iid_rayleigh());
        assert!(cfg.csi_at_source);
    }

    #[test]
    fn correlation_shorthand_and_matrix() {
        let s = ScenarioFile::parse(
            "m = 2\nn = 2\nrho_sr = 0.5\nrho_rd = [0.0, 0.5]\n\
             fading_sr = \"rayleigh\"\n",
        )
        .unwrap();
        let cfg = s.link().resolve().unwrap();
        let (es, ed) = cfg.spectra().unwrap();
        assert!((es.values()[0] - 1.5).abs() < 1e-12);
        assert!((ed.values()[1] - 0.5).abs() < 1e-12);

        let s = ScenarioFile::parse(
            "m = 1\nn = 2\n[corr_rd]\nre = [[1.0, 0.3], [0.3, 1.0]]\nim = [[0.0, 0.4], [-0.4, 0.0]]\n",
        )
        .unwrap();
        let (_, ed) = s.link().resolve().unwrap().spectra().unwrap();
        assert!((ed.values()[0] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn relay_entries_inherit() {
        let s = ScenarioFile::parse(
            "m = 1\nn = 1\nalpha = 1.0\ndirect_p = 0.5\n[[relay]]\nn = 2\n[[relay]]\nalpha = 0.0\n",
        )
        .unwrap();
        let set = s.relay_set().unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.links()[0].n, 2);
        assert_eq!(set.links()[0].alpha, 1.0);
        assert_eq!(set.links()[1].alpha, 0.0);
        assert_eq!(set.direct_link_outage(), Some(0.5));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(ScenarioFile::parse("m = 2\nn = 2\nbogus = 1\n").is_err());
        let s = ScenarioFile::parse("m = 2\nn = 1\nrho_rd = 0.5\n").unwrap();
        assert!(s.link().resolve().is_err());
        let s = ScenarioFile::parse("m = 2\nn = 2\nrho_sr = 1.0\n").unwrap();
        assert!(s.link().resolve().is_err());
        let s = ScenarioFile::parse("n = 2\n").unwrap();
        assert!(s.link().resolve().is_err());
        let s = ScenarioFile::parse("m = 1\nn = 1\nfading_sr = \"nakagami:2\"\n").unwrap();
        assert!(s.link().resolve().is_ok());
    }
}

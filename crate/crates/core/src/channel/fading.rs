//! Fading families and the distribution of the link power gain |h|².

use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::{gamma, gamma_lr, gamma_ur, ln_gamma};

use super::spectrum::{Eigenspectrum, GammaSum, GenChi2};
use crate::error::{Error, Result};

/// Per-antenna fading law, normalized to unit mean power.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum FadingModel {
    #[default]
    Rayleigh,
    /// Line-of-sight to scatter power ratio K ≥ 0.
    Rician { k_factor: f64 },
    /// Shape m ≥ 0.5.
    Nakagami { m: f64 },
    /// Amplitude shape κ > 0.
    Weibull { shape: f64 },
}

impl FadingModel {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            FadingModel::Rayleigh => true,
            FadingModel::Rician { k_factor } => k_factor.is_finite() && k_factor >= 0.0,
            FadingModel::Nakagami { m } => m.is_finite() && m >= 0.5,
            FadingModel::Weibull { shape } => shape.is_finite() && shape > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!("invalid fading parameters: {self}")))
        }
    }

    /// Exponent d with f(g) ~ g^{d-1} near zero for the power gain of `antennas`
    /// i.i.d. branches; this is the link's diversity order.
    pub fn near_zero_exponent(&self, antennas: usize) -> f64 {
        let k = antennas as f64;
        match *self {
            FadingModel::Rayleigh | FadingModel::Rician { .. } => k,
            FadingModel::Nakagami { m } => k * m,
            FadingModel::Weibull { shape } => k * shape / 2.0,
        }
    }

    pub fn is_rayleigh(&self) -> bool {
        matches!(self, FadingModel::Rayleigh)
    }

    /// Distribution of Σ|h_i|² over `antennas` i.i.d. branches.
    pub fn power_distribution(&self, antennas: usize) -> Result<PowerGain> {
        self.validate()?;
        if antennas == 0 {
            return Err(Error::Validation("antenna count must be positive".into()));
        }
        let k = antennas as f64;
        Ok(match *self {
            FadingModel::Rayleigh => PowerGain::Gamma {
                shape: k,
                scale: 1.0,
            },
            FadingModel::Nakagami { m } => PowerGain::Gamma {
                shape: k * m,
                scale: 1.0 / m,
            },
            FadingModel::Rician { k_factor } => PowerGain::Rician {
                antennas,
                k_factor,
            },
            FadingModel::Weibull { shape } => {
                if antennas != 1 {
                    return Err(Error::Validation(
                        "the Weibull power law has no closed form for more than one antenna".into(),
                    ));
                }
                PowerGain::Weibull {
                    shape: shape / 2.0,
                    scale: 1.0 / gamma(1.0 + 2.0 / shape),
                }
            }
        })
    }
}

impl fmt::Display for FadingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadingModel::Rayleigh => write!(f, "rayleigh"),
            FadingModel::Rician { k_factor } => write!(f, "rician:{k_factor}"),
            FadingModel::Nakagami { m } => write!(f, "nakagami:{m}"),
            FadingModel::Weibull { shape } => write!(f, "weibull:{shape}"),
        }
    }
}

impl FromStr for FadingModel {
    type Err = Error;

    /// `rayleigh`, `rician:K`, `nakagami:m` or `weibull:shape`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n.trim().to_string(), Some(p.trim().to_string())),
            None => (s.clone(), None),
        };
        let value = |what: &str| -> Result<f64> {
            param
                .as_deref()
                .ok_or_else(|| Error::Validation(format!("{name} fading needs a {what} parameter")))?
                .parse::<f64>()
                .map_err(|e| Error::Validation(format!("bad {what} in '{s}': {e}")))
        };
        let model = match name.as_str() {
            "rayleigh" => FadingModel::Rayleigh,
            "rician" | "rice" => FadingModel::Rician {
                k_factor: value("K-factor")?,
            },
            "nakagami" => FadingModel::Nakagami { m: value("shape")? },
            "weibull" => FadingModel::Weibull {
                shape: value("shape")?,
            },
            other => return Err(Error::Validation(format!("unknown fading family '{other}'"))),
        };
        model.validate()?;
        Ok(model)
    }
}

/// Law of the link power gain g = |h|², as consumed by the quadrature oracle.
pub trait GainDistribution: Send + Sync + fmt::Debug {
    fn pdf(&self, g: f64) -> f64;
    fn cdf(&self, g: f64) -> f64;
    /// Survival function 1 − F(g).
    fn sf(&self, g: f64) -> f64 {
        1.0 - self.cdf(g)
    }
    fn mean(&self) -> f64;

    /// A point beyond which the remaining probability mass is below `tail`.
    fn tail_point(&self, tail: f64) -> f64 {
        let mut t = self.mean().max(1e-3);
        for _ in 0..200 {
            if self.sf(t) < tail {
                return t;
            }
            t *= 1.5;
        }
        t
    }
}

/// Power-gain laws for the supported families.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerGain {
    /// Gamma(shape, scale): i.i.d. Rayleigh (shape = antennas) and Nakagami.
    Gamma { shape: f64, scale: f64 },
    /// Sum over `antennas` Rician branches of K-factor `k_factor`.
    Rician { antennas: usize, k_factor: f64 },
    /// Weibull law of the power of a single Weibull-amplitude branch.
    Weibull { shape: f64, scale: f64 },
    /// Correlated Rayleigh link.
    Correlated(GenChi2<f64>),
    /// Correlated Rayleigh link whose spectrum has repeated eigenvalues.
    Clustered(GammaSum<f64>),
}

impl PowerGain {
    pub fn correlated(eigs: &Eigenspectrum<f64>) -> Result<Self> {
        match GenChi2::new(eigs) {
            Ok(d) => Ok(PowerGain::Correlated(d)),
            Err(Error::Degenerate(_)) => Ok(PowerGain::Clustered(GammaSum::new(eigs))),
            Err(e) => Err(e),
        }
    }

    /// Poisson weights and the scatter scale of the Rician mixture.
    fn rician_terms(antennas: usize, k_factor: f64) -> (f64, f64, usize) {
        let lambda = antennas as f64 * k_factor;
        let scale = 1.0 / (1.0 + k_factor);
        let terms = (lambda + 12.0 * lambda.sqrt() + 40.0).ceil() as usize;
        (lambda, scale, terms)
    }

    fn rician_mix<F: Fn(f64, f64) -> f64>(antennas: usize, k_factor: f64, f: F) -> f64 {
        let (lambda, scale, terms) = Self::rician_terms(antennas, k_factor);
        if lambda == 0.0 {
            return f(antennas as f64, scale);
        }
        (0..terms)
            .map(|j| {
                let jf = j as f64;
                let w = (-lambda + jf * lambda.ln() - ln_gamma(jf + 1.0)).exp();
                w * f(antennas as f64 + jf, scale)
            })
            .sum()
    }
}

fn gamma_pdf(g: f64, shape: f64, scale: f64) -> f64 {
    if g < 0.0 {
        return 0.0;
    }
    if g == 0.0 {
        return match shape.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => 1.0 / scale,
            _ => 0.0,
        };
    }
    ((shape - 1.0) * g.ln() - g / scale - ln_gamma(shape) - shape * scale.ln()).exp()
}

impl GainDistribution for PowerGain {
    fn pdf(&self, g: f64) -> f64 {
        match self {
            PowerGain::Gamma { shape, scale } => gamma_pdf(g, *shape, *scale),
            PowerGain::Rician { antennas, k_factor } => {
                Self::rician_mix(*antennas, *k_factor, |a, s| gamma_pdf(g, a, s))
            }
            PowerGain::Weibull { shape, scale } => {
                if g <= 0.0 {
                    return if *shape < 1.0 { f64::INFINITY } else if *shape == 1.0 { 1.0 / scale } else { 0.0 };
                }
                let y = g / scale;
                shape / scale * y.powf(shape - 1.0) * (-y.powf(*shape)).exp()
            }
            PowerGain::Correlated(d) => d.pdf(g),
            PowerGain::Clustered(d) => d.pdf(g),
        }
    }

    fn cdf(&self, g: f64) -> f64 {
        if g <= 0.0 {
            return 0.0;
        }
        match self {
            PowerGain::Gamma { shape, scale } => gamma_lr(*shape, g / scale),
            PowerGain::Rician { antennas, k_factor } => {
                Self::rician_mix(*antennas, *k_factor, |a, s| gamma_lr(a, g / s)).min(1.0)
            }
            PowerGain::Weibull { shape, scale } => -(-(g / scale).powf(*shape)).exp_m1(),
            PowerGain::Correlated(d) => d.cdf(g),
            PowerGain::Clustered(d) => d.cdf(g),
        }
    }

    fn sf(&self, g: f64) -> f64 {
        if g <= 0.0 {
            return 1.0;
        }
        match self {
            PowerGain::Gamma { shape, scale } => gamma_ur(*shape, g / scale),
            PowerGain::Rician { antennas, k_factor } => {
                Self::rician_mix(*antennas, *k_factor, |a, s| gamma_ur(a, g / s)).min(1.0)
            }
            PowerGain::Weibull { shape, scale } => (-(g / scale).powf(*shape)).exp(),
            PowerGain::Correlated(GenChi2::Mixture(pf)) => pf
                .pairs()
                .map(|(a, l)| a * (-g / l).exp())
                .sum::<f64>()
                .max(0.0),
            PowerGain::Correlated(d) => 1.0 - d.cdf(g),
            PowerGain::Clustered(d) => 1.0 - d.cdf(g),
        }
    }

    fn mean(&self) -> f64 {
        match self {
            PowerGain::Gamma { shape, scale } => shape * scale,
            PowerGain::Rician { antennas, .. } => *antennas as f64,
            PowerGain::Weibull { shape, scale } => scale * gamma(1.0 + 1.0 / shape),
            PowerGain::Correlated(GenChi2::Mixture(pf)) => pf.eigenvalues().iter().sum(),
            PowerGain::Correlated(GenChi2::Flat { dof, scale }) => *dof as f64 * scale,
            PowerGain::Clustered(d) => d.mean(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadOptions};

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["rayleigh", "rician:5", "nakagami:2", "weibull:2.5"] {
            let m: FadingModel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("nakagami:0.2".parse::<FadingModel>().is_err());
        assert!("rician".parse::<FadingModel>().is_err());
        assert!("lognormal:1".parse::<FadingModel>().is_err());
    }

    #[test]
    fn near_zero_exponents() {
        assert_eq!(FadingModel::Rayleigh.near_zero_exponent(3), 3.0);
        assert_eq!(FadingModel::Rician { k_factor: 5.0 }.near_zero_exponent(2), 2.0);
        assert_eq!(FadingModel::Nakagami { m: 2.0 }.near_zero_exponent(3), 6.0);
        assert_eq!(FadingModel::Weibull { shape: 3.0 }.near_zero_exponent(2), 3.0);
    }

    #[test]
    fn every_family_has_unit_power_per_antenna() {
        let opts = QuadOptions::default();
        let models = [
            FadingModel::Rayleigh,
            FadingModel::Rician { k_factor: 5.0 },
            FadingModel::Nakagami { m: 2.0 },
            FadingModel::Weibull { shape: 2.5 },
        ];
        for model in models {
            let k = if matches!(model, FadingModel::Weibull { .. }) { 1 } else { 2 };
            let d = model.power_distribution(k).unwrap();
            let hi = d.tail_point(1e-16);
            let total = integrate(|g| d.pdf(g), 0.0, hi, opts).unwrap().value;
            let mean = integrate(|g| g * d.pdf(g), 0.0, hi, opts).unwrap().value;
            assert!((total - 1.0).abs() < 1e-9, "{model}: mass {total}");
            assert!((mean - k as f64).abs() < 1e-8, "{model}: mean {mean}");
            assert!((d.mean() - k as f64).abs() < 1e-12);
            for g in [0.05, 0.5, 2.0] {
                let q = integrate(|t| d.pdf(t), 0.0, g, opts).unwrap().value;
                assert!((q - d.cdf(g)).abs() < 1e-10, "{model}: cdf({g})");
                assert!((d.cdf(g) + d.sf(g) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rician_without_los_is_rayleigh() {
        let r = FadingModel::Rician { k_factor: 0.0 }.power_distribution(2).unwrap();
        let g = FadingModel::Rayleigh.power_distribution(2).unwrap();
        for x in [0.1, 1.0, 3.0] {
            assert!((r.cdf(x) - g.cdf(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn weibull_needs_single_antenna() {
        assert!(FadingModel::Weibull { shape: 2.0 }.power_distribution(2).is_err());
    }
}

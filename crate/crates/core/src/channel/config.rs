use super::correlation::CorrelationMatrix;
use super::fading::{FadingModel, PowerGain};
use super::spectrum::Eigenspectrum;
use crate::error::{Error, Result};

/// A single-relay scenario: antenna counts, relay-noise ratio and per-link statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    /// Source (transmit) antennas.
    pub m: usize,
    /// Destination (receive) antennas.
    pub n: usize,
    /// Relay noise propagated to the destination over destination noise.
    pub alpha: f64,
    pub corr_sr: CorrelationMatrix,
    pub corr_rd: CorrelationMatrix,
    pub fading_sr: FadingModel,
    pub fading_rd: FadingModel,
    pub csi_at_source: bool,
}

impl ChannelConfig {
    /// Uncorrelated Rayleigh links with source CSI.
    pub fn iid(m: usize, n: usize, alpha: f64) -> Result<Self> {
        let cfg = Self {
            m,
            n,
            alpha,
            corr_sr: CorrelationMatrix::identity(m.max(1))?,
            corr_rd: CorrelationMatrix::identity(n.max(1))?,
            fading_sr: FadingModel::Rayleigh,
            fading_rd: FadingModel::Rayleigh,
            csi_at_source: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_correlation(mut self, sr: CorrelationMatrix, rd: CorrelationMatrix) -> Result<Self> {
        self.corr_sr = sr;
        self.corr_rd = rd;
        self.validate()?;
        Ok(self)
    }

    pub fn with_fading(mut self, sr: FadingModel, rd: FadingModel) -> Result<Self> {
        self.fading_sr = sr;
        self.fading_rd = rd;
        self.validate()?;
        Ok(self)
    }

    pub fn with_csi(mut self, csi_at_source: bool) -> Self {
        self.csi_at_source = csi_at_source;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::Validation(format!(
                "antenna counts must be positive (m = {}, n = {})",
                self.m, self.n
            )));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::Validation(format!(
                "alpha must be finite and non-negative, got {}",
                self.alpha
            )));
        }
        if self.corr_sr.dim() != self.m || self.corr_rd.dim() != self.n {
            return Err(Error::Validation(format!(
                "correlation dimensions {}x{} / {}x{} do not match m = {}, n = {}",
                self.corr_sr.dim(),
                self.corr_sr.dim(),
                self.corr_rd.dim(),
                self.corr_rd.dim(),
                self.m,
                self.n
            )));
        }
        self.fading_sr.validate()?;
        self.fading_rd.validate()?;
        // Correlation is only modelled for Rayleigh links.
        for (fading, corr, link) in [
            (&self.fading_sr, &self.corr_sr, "source-relay"),
            (&self.fading_rd, &self.corr_rd, "relay-destination"),
        ] {
            if !fading.is_rayleigh() && !corr.is_identity() {
                return Err(Error::Validation(format!(
                    "{link} link: correlation is supported for Rayleigh fading only, got {fading}"
                )));
            }
        }
        Ok(())
    }

    pub fn is_rayleigh(&self) -> bool {
        self.fading_sr.is_rayleigh() && self.fading_rd.is_rayleigh()
    }

    pub fn is_iid_rayleigh(&self) -> bool {
        self.is_rayleigh() && self.corr_sr.is_identity() && self.corr_rd.is_identity()
    }

    pub fn spectra(&self) -> Result<(Eigenspectrum<f64>, Eigenspectrum<f64>)> {
        Ok((self.corr_sr.eigenvalues()?, self.corr_rd.eigenvalues()?))
    }

    /// Laws of g_s = |h_sr|² and g_d = |h_rd|².
    pub fn link_distributions(&self) -> Result<(PowerGain, PowerGain)> {
        let one = |fading: &FadingModel, corr: &CorrelationMatrix, k: usize| -> Result<PowerGain> {
            if fading.is_rayleigh() && !corr.is_identity() {
                PowerGain::correlated(&corr.eigenvalues()?)
            } else {
                fading.power_distribution(k)
            }
        };
        Ok((
            one(&self.fading_sr, &self.corr_sr, self.m)?,
            one(&self.fading_rd, &self.corr_rd, self.n)?,
        ))
    }

    /// (d_s, d_d): near-zero exponents of the two link gains.
    pub fn diversity_orders(&self) -> Result<(f64, f64)> {
        let rank = |corr: &CorrelationMatrix, fading: &FadingModel, k: usize| -> Result<usize> {
            if fading.is_rayleigh() && !corr.is_identity() {
                Ok(corr.eigenvalues()?.len())
            } else {
                Ok(k)
            }
        };
        Ok((
            self.fading_sr
                .near_zero_exponent(rank(&self.corr_sr, &self.fading_sr, self.m)?),
            self.fading_rd
                .near_zero_exponent(rank(&self.corr_rd, &self.fading_rd, self.n)?),
        ))
    }

    /// Threshold actually seen by the channel: without source CSI the
    /// isotropic transmission costs a factor m in SNR.
    pub fn effective_threshold(&self, x: f64) -> f64 {
        if self.csi_at_source {
            x
        } else {
            x * self.m as f64
        }
    }
}

/// Physical link budget in linear units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub alpha: f64,
    pub gamma: f64,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(v: f64) -> f64 {
    10.0 * v.log10()
}

/// α = K_r G_rd σ_r²/σ_0² and γ = K_r G_rd G_sr σ_x²/σ_0² from gains in dB and
/// noise/signal powers in a common linear unit.
pub fn link_budget(
    relay_gain_db: f64,
    rd_path_gain_db: f64,
    sr_path_gain_db: f64,
    relay_noise: f64,
    dest_noise: f64,
    tx_power: f64,
) -> Result<LinkBudget> {
    if !(dest_noise > 0.0 && tx_power > 0.0 && relay_noise >= 0.0) {
        return Err(Error::Validation(format!(
            "powers must be positive (relay noise may be zero): sigma_r^2 = {relay_noise}, \
             sigma_0^2 = {dest_noise}, sigma_x^2 = {tx_power}"
        )));
    }
    let kr = db_to_linear(relay_gain_db);
    let grd = db_to_linear(rd_path_gain_db);
    let gsr = db_to_linear(sr_path_gain_db);
    if !(kr.is_finite() && grd.is_finite() && gsr.is_finite()) {
        return Err(Error::Validation("gains must be finite".into()));
    }
    Ok(LinkBudget {
        alpha: kr * grd * relay_noise / dest_noise,
        gamma: kr * grd * gsr * tx_power / dest_noise,
    })
}

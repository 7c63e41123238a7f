//! Seeded Monte-Carlo estimates of the outage probability.
//!
//! Trials are grouped in blocks of `BLOCK_TRIALS`; block b draws from the
//! ChaCha8 stream b of the run seed, so the estimate does not depend on how
//! blocks are spread over worker threads.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::channel::{ChannelConfig, FadingModel};
use crate::error::{Error, Result};
use crate::multirelay::RelaySet;

pub const BLOCK_TRIALS: u64 = 8192;
pub const MAX_PARTITIONS: usize = 64;
/// Outage events a point needs to enter a slope fit.
pub const MIN_EVENTS: u64 = 100;
pub const MIN_SLOPE_POINTS: usize = 4;

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;
const SEED_STEP: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of the i-th point of a sweep started from `seed`.
pub fn point_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add(SEED_STEP.wrapping_mul(i as u64))
}

/// Generator for one block of trials.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Uniform on (0, 1): the top 53 bits of a word, offset by half a step.
#[inline]
pub fn uniform_open<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * TWO_POW_M53
}

/// CN(0, 1) by Box-Muller: radius √(−ln u₁), angle 2π u₂.
#[inline]
pub fn complex_normal<R: RngCore>(rng: &mut R) -> Complex64 {
    let r = (-uniform_open(rng).ln()).sqrt();
    let theta = std::f64::consts::TAU * uniform_open(rng);
    Complex64::from_polar(r, theta)
}

/// Draws channel vectors for one link.
#[derive(Debug, Clone)]
pub struct LinkSampler {
    model: FadingModel,
    antennas: usize,
    factor: Option<DMatrix<Complex64>>,
    nakagami: Option<Gamma<f64>>,
    weibull_scale: f64,
}

impl LinkSampler {
    pub fn new(model: FadingModel, antennas: usize, factor: Option<DMatrix<Complex64>>) -> Result<Self> {
        model.validate()?;
        if antennas == 0 {
            return Err(Error::Validation("antenna count must be positive".into()));
        }
        if let Some(f) = &factor {
            if f.nrows() != antennas || f.ncols() != antennas {
                return Err(Error::Validation(format!(
                    "sampling factor is {}x{}, expected {antennas}x{antennas}",
                    f.nrows(),
                    f.ncols()
                )));
            }
            if !model.is_rayleigh() {
                return Err(Error::Validation(format!(
                    "correlated sampling is supported for Rayleigh fading only, got {model}"
                )));
            }
        }
        let nakagami = match model {
            FadingModel::Nakagami { m } => Some(
                Gamma::new(m, 1.0 / m)
                    .map_err(|e| Error::Validation(format!("Nakagami shape {m}: {e}")))?,
            ),
            _ => None,
        };
        let weibull_scale = match model {
            FadingModel::Weibull { shape } => 1.0 / gamma(1.0 + 2.0 / shape).sqrt(),
            _ => 1.0,
        };
        Ok(Self {
            model,
            antennas,
            factor,
            nakagami,
            weibull_scale,
        })
    }

    /// Sampler for the source-relay (`sr = true`) or relay-destination link of a configuration.
    pub fn for_link(cfg: &ChannelConfig, sr: bool) -> Result<Self> {
        let (model, corr, k) = if sr {
            (cfg.fading_sr, &cfg.corr_sr, cfg.m)
        } else {
            (cfg.fading_rd, &cfg.corr_rd, cfg.n)
        };
        let factor = if corr.is_identity() {
            None
        } else {
            Some(corr.sampling_factor()?)
        };
        Self::new(model, k, factor)
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    fn entry<R: RngCore>(&self, rng: &mut R) -> Complex64 {
        match self.model {
            FadingModel::Rayleigh => complex_normal(rng),
            FadingModel::Rician { k_factor } => {
                let los = (k_factor / (k_factor + 1.0)).sqrt();
                Complex64::new(los, 0.0) + complex_normal(rng) * (1.0 / (k_factor + 1.0)).sqrt()
            }
            FadingModel::Nakagami { .. } => {
                let power = self.nakagami.as_ref().map_or(1.0, |g| g.sample(rng));
                Complex64::from_polar(power.sqrt(), std::f64::consts::TAU * uniform_open(rng))
            }
            FadingModel::Weibull { shape } => {
                let amp = self.weibull_scale * (-uniform_open(rng).ln()).powf(1.0 / shape);
                Complex64::from_polar(amp, std::f64::consts::TAU * uniform_open(rng))
            }
        }
    }

    /// One channel vector, written into `out`.
    pub fn draw_into<R: RngCore>(&self, rng: &mut R, out: &mut Vec<Complex64>) {
        out.clear();
        out.extend((0..self.antennas).map(|_| self.entry(rng)));
        if let Some(f) = &self.factor {
            let u = out.clone();
            for (i, h) in out.iter_mut().enumerate() {
                *h = (0..=i).map(|j| f[(i, j)] * u[j]).sum();
            }
        }
    }

    pub fn draw<R: RngCore>(&self, rng: &mut R) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.antennas);
        self.draw_into(rng, &mut out);
        out
    }

    /// Power gain |h|² of one draw.
    pub fn gain<R: RngCore>(&self, rng: &mut R, scratch: &mut Vec<Complex64>) -> f64 {
        if self.factor.is_none() {
            return (0..self.antennas).map(|_| self.entry(rng).norm_sqr()).sum();
        }
        self.draw_into(rng, scratch);
        norm_sqr(scratch)
    }
}

/// One channel vector of `antennas` entries; `factor` is a lower-triangular
/// F with F·F^† equal to the correlation matrix.
pub fn draw_channel<R: RngCore>(
    model: FadingModel,
    antennas: usize,
    factor: Option<&DMatrix<Complex64>>,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    Ok(LinkSampler::new(model, antennas, factor.cloned())?.draw(rng))
}

pub fn norm_sqr(h: &[Complex64]) -> f64 {
    h.iter().map(Complex64::norm_sqr).sum()
}

/// Instantaneous end-to-end AF SNR |h_rd|²|h_sr|²γ/(1 + α|h_rd|²), divided by
/// m = len(h_sr) without source CSI.
pub fn snr_af(h_sr: &[Complex64], h_rd: &[Complex64], alpha: f64, gamma: f64, csi_at_source: bool) -> f64 {
    let m = if csi_at_source { 1.0 } else { h_sr.len() as f64 };
    af_from_gains(norm_sqr(h_sr), norm_sqr(h_rd), alpha, gamma) / m
}

#[inline]
fn af_from_gains(gs: f64, gd: f64, alpha: f64, gamma: f64) -> f64 {
    gd * gs * gamma / (1.0 + alpha * gd)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum McProtocol {
    #[default]
    Af,
    Df,
    AfSelection,
    DfSelection,
}

impl McProtocol {
    pub fn is_selection(self) -> bool {
        matches!(self, McProtocol::AfSelection | McProtocol::DfSelection)
    }
}

impl fmt::Display for McProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            McProtocol::Af => "af",
            McProtocol::Df => "df",
            McProtocol::AfSelection => "af-selection",
            McProtocol::DfSelection => "df-selection",
        })
    }
}

impl FromStr for McProtocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "af" => Ok(McProtocol::Af),
            "df" => Ok(McProtocol::Df),
            "af-selection" => Ok(McProtocol::AfSelection),
            "df-selection" => Ok(McProtocol::DfSelection),
            other => Err(Error::Validation(format!(
                "unknown protocol '{other}' (expected af, df, af-selection or df-selection)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub trials: u64,
    pub seed: u64,
    /// Worker partitions; None picks min(blocks, `MAX_PARTITIONS`).
    pub partitions: Option<usize>,
}

impl McOptions {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            partitions: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub events: u64,
    pub stderr: f64,
    pub seed: u64,
    pub partitions: usize,
}

impl McEstimate {
    fn new(events: u64, trials: u64, seed: u64, partitions: usize) -> Self {
        let p = events as f64 / trials as f64;
        Self {
            p_hat: p,
            trials,
            events,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            seed,
            partitions,
        }
    }
}

struct Relay {
    sr: LinkSampler,
    rd: LinkSampler,
    alpha: f64,
    /// 1 with source CSI, m without.
    csi_loss: f64,
}

/// Outage estimate at rate R (nats) and linear SNR γ.
///
/// `Af`/`Df` need a single relay; the selection variants declare outage when
/// the best relay (largest effective SNR) is in outage. A direct-link factor
/// is simulated as an independent Bernoulli event.
pub fn estimate_outage(
    set: &RelaySet,
    rate_nats: f64,
    gamma: f64,
    protocol: McProtocol,
    opts: McOptions,
) -> Result<McEstimate> {
    if opts.trials == 0 {
        return Err(Error::Validation("at least one trial is required".into()));
    }
    if !(rate_nats.is_finite() && rate_nats >= 0.0) {
        return Err(Error::Validation(format!("rate must be non-negative, got {rate_nats}")));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Validation(format!("SNR must be positive, got {gamma}")));
    }
    if !protocol.is_selection() && set.len() != 1 {
        return Err(Error::Validation(format!(
            "protocol {protocol} takes a single relay, got {}",
            set.len()
        )));
    }
    if opts.partitions == Some(0) {
        return Err(Error::Validation("partitions must be positive".into()));
    }
    let relays = relays_of(set)?;
    let threshold = rate_nats.exp_m1() / gamma;
    let direct = set.direct_link_outage();
    let df = matches!(protocol, McProtocol::Df | McProtocol::DfSelection);

    let blocks = opts.trials.div_ceil(BLOCK_TRIALS);
    let partitions = opts
        .partitions
        .unwrap_or_else(|| (blocks as usize).clamp(1, MAX_PARTITIONS));
    let run_block = |b: u64| -> u64 {
        let mut rng = block_rng(opts.seed, b);
        let mut scratch = Vec::new();
        let mut events = 0;
        for _ in 0..block_len(opts.trials, b) {
            let mut out = best_gain(&relays, df, &mut rng, &mut scratch) < threshold;
            if let Some(p) = direct {
                out &= uniform_open(&mut rng) < p;
            }
            events += u64::from(out);
        }
        events
    };
    let events: u64 = (0..partitions as u64)
        .into_par_iter()
        .map(|q| {
            let start = q * blocks / partitions as u64;
            let end = (q + 1) * blocks / partitions as u64;
            (start..end).map(run_block).sum::<u64>()
        })
        .sum();
    Ok(McEstimate::new(events, opts.trials, opts.seed, partitions))
}

fn relays_of(set: &RelaySet) -> Result<Vec<Relay>> {
    set.links()
        .iter()
        .map(|cfg| {
            Ok(Relay {
                sr: LinkSampler::for_link(cfg, true)?,
                rd: LinkSampler::for_link(cfg, false)?,
                alpha: cfg.alpha,
                csi_loss: if cfg.csi_at_source { 1.0 } else { cfg.m as f64 },
            })
        })
        .collect()
}

fn block_len(trials: u64, block: u64) -> u64 {
    BLOCK_TRIALS.min(trials - block * BLOCK_TRIALS)
}

/// End-to-end SNR over γ of the best relay for one draw.
fn best_gain<R: RngCore>(relays: &[Relay], df: bool, rng: &mut R, scratch: &mut Vec<Complex64>) -> f64 {
    let mut best = 0.0f64;
    for r in relays {
        let gs = r.sr.gain(rng, scratch);
        let gd = r.rd.gain(rng, scratch);
        let g = if df {
            (gs / r.csi_loss).min(gd)
        } else {
            af_from_gains(gs, gd, r.alpha, 1.0) / r.csi_loss
        };
        best = best.max(g);
    }
    best
}

/// Monte-Carlo x_ε: the empirical ε-quantile of the end-to-end SNR over γ.
/// The direct-link factor, if any, is ignored.
pub fn snr_loss_mc(set: &RelaySet, eps: f64, protocol: McProtocol, opts: McOptions) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("outage level must lie in (0, 1), got {eps}")));
    }
    if opts.trials == 0 {
        return Err(Error::Validation("at least one trial is required".into()));
    }
    if !protocol.is_selection() && set.len() != 1 {
        return Err(Error::Validation(format!(
            "protocol {protocol} takes a single relay, got {}",
            set.len()
        )));
    }
    let relays = relays_of(set)?;
    let df = matches!(protocol, McProtocol::Df | McProtocol::DfSelection);
    let blocks = opts.trials.div_ceil(BLOCK_TRIALS);
    let mut gains: Vec<f64> = (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = block_rng(opts.seed, b);
            let mut scratch = Vec::new();
            (0..block_len(opts.trials, b))
                .map(|_| best_gain(&relays, df, &mut rng, &mut scratch))
                .collect::<Vec<_>>()
        })
        .collect();
    let k = ((eps * opts.trials as f64).ceil() as usize).clamp(1, gains.len()) - 1;
    let (_, q, _) = gains.select_nth_unstable_by(k, f64::total_cmp);
    Ok(*q)
}

/// Single-relay convenience wrapper.
pub fn estimate_outage_single(
    cfg: &ChannelConfig,
    rate_nats: f64,
    gamma: f64,
    protocol: McProtocol,
    opts: McOptions,
) -> Result<McEstimate> {
    estimate_outage(&RelaySet::new(vec![cfg.clone()], None)?, rate_nats, gamma, protocol, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopePoint {
    pub snr_db: f64,
    pub estimate: McEstimate,
    /// Enough outage events to enter the fit.
    pub used: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    /// Least-squares slope of −ln p̂ against ln γ.
    pub slope: f64,
    pub intercept: f64,
    pub points: Vec<SlopePoint>,
}

/// Empirical diversity: fit −ln p̂ = d ln γ + c over the SNR points with at
/// least `MIN_EVENTS` outage events. The rate at each point satisfies
/// e^R − 1 = γ^r. Point i uses seed `seed + i·0x9E3779B97F4A7C15`.
pub fn diversity_slope(
    set: &RelaySet,
    protocol: McProtocol,
    r: f64,
    snr_db: &[f64],
    trials: u64,
    seed: u64,
) -> Result<SlopeFit> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("multiplexing gain must lie in [0, 1], got {r}")));
    }
    let mut points = Vec::with_capacity(snr_db.len());
    for (i, &db) in snr_db.iter().enumerate() {
        let gamma = 10f64.powf(db / 10.0);
        let rate = (gamma.powf(r)).ln_1p();
        let opts = McOptions::new(trials, point_seed(seed, i));
        let estimate = estimate_outage(set, rate, gamma, protocol, opts)?;
        points.push(SlopePoint {
            snr_db: db,
            used: estimate.events >= MIN_EVENTS,
            estimate,
        });
    }
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.used)
        .map(|p| (p.snr_db / 10.0 * std::f64::consts::LN_10, -p.estimate.p_hat.ln()))
        .collect();
    if used.len() < MIN_SLOPE_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} of {} SNR points have at least {MIN_EVENTS} outage events; {MIN_SLOPE_POINTS} are needed",
            used.len(),
            points.len()
        )));
    }
    let k = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / k;
    let my = used.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("SNR points coincide".into()));
    }
    let slope = sxy / sxx;
    Ok(SlopeFit {
        slope,
        intercept: my - slope * mx,
        points,
    })
}

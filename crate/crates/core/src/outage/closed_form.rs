//! Closed-form amplify-and-forward outage for Rayleigh links.

use crate::channel::{Eigenspectrum, PartialFraction, PowerGain};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, inv_factorial, lit, to_f64, Real};
use crate::specfun::bessel_k;

use super::oracle::outage_af_quadrature;

/// Relative half-width of the split applied to repeated eigenvalues.
pub const CLUSTER_SPLIT: f64 = 1e-4;

/// Relative agreement demanded from a perturbed spectrum against quadrature.
pub const CLUSTER_CHECK_TOL: f64 = 1e-6;

pub(crate) fn check_inputs<T: Real>(x: T, alpha: T) -> Result<()> {
    if !(x.is_finite() && x >= T::zero()) {
        return Err(Error::Domain(format!("threshold x must be finite and non-negative, got {x}")));
    }
    if !(alpha.is_finite() && alpha >= T::zero()) {
        return Err(Error::Domain(format!("alpha must be finite and non-negative, got {alpha}")));
    }
    Ok(())
}

fn check_antennas(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("antenna counts must be positive, got m = {m}, n = {n}")));
    }
    Ok(())
}

/// i.i.d. Rayleigh links:
/// 1 − (2e^{−αx}/(n−1)!) Σ_{k<m} Σ_{i≤k} α^i x^{(k+i+n)/2}/(i!(k−i)!) K_{n+i−k}(2√x).
pub fn outage_af_iid<T: Real>(x: T, alpha: T, m: usize, n: usize) -> Result<T> {
    check_inputs(x, alpha)?;
    check_antennas(m, n)?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    let sx = x.sqrt();
    let z = lit::<T>(2.0) * sx;
    let mut sum = T::zero();
    for k in 0..m {
        for i in 0..=k {
            let order = (n + i).abs_diff(k) as u32;
            let kv = bessel_k(order, z)?;
            if kv == T::zero() {
                continue;
            }
            let term = alpha.powi(i as i32) * inv_factorial::<T>(i) * inv_factorial::<T>(k - i)
                * sx.powi((k + i + n) as i32)
                * kv;
            sum = sum + term;
        }
    }
    let p = T::one() - lit::<T>(2.0) * (-alpha * x).exp() * inv_factorial::<T>(n - 1) * sum;
    Ok(p.max(T::zero()).min(T::one()))
}

/// Correlated links with distinct eigenvalues:
/// 1 − Σ_k Σ_j A_k B_j e^{−αx/λ_k} z K_1(z), z = √(4x/(λ_k η_j)),
/// with (λ, A) from the source-relay link and (η, B) from the relay-destination link.
pub fn outage_af_distinct<T: Real>(
    x: T,
    alpha: T,
    sr: &PartialFraction<T>,
    rd: &PartialFraction<T>,
) -> Result<T> {
    check_inputs(x, alpha)?;
    if x == T::zero() {
        return Ok(T::zero());
    }
    let four_x = lit::<T>(4.0) * x;
    let mut sum = T::zero();
    for (a, lam) in sr.pairs() {
        let damp = (-alpha * x / lam).exp();
        for (b, eta) in rd.pairs() {
            let z = (four_x / (lam * eta)).sqrt();
            sum = sum + a * b * damp * z * bessel_k(1, z)?;
        }
    }
    Ok((T::one() - sum).max(T::zero()).min(T::one()))
}

/// Splits every cluster of repeated eigenvalues symmetrically by ±`CLUSTER_SPLIT`
/// (relative), keeping the cluster sum.
pub fn perturb_clusters<T: Real>(eigs: &Eigenspectrum<T>) -> Result<Eigenspectrum<T>> {
    let mut values = eigs.values().to_vec();
    let delta = lit::<T>(CLUSTER_SPLIT);
    for (start, len) in eigs.clusters() {
        if len < 2 {
            continue;
        }
        let slice = &values[start..start + len];
        let mean = slice.iter().fold(T::zero(), |a, &b| a + b) / from_usize(len);
        let span = from_usize::<T>(len - 1);
        for i in 0..len {
            let offset = from_usize::<T>(len - 1) - lit::<T>(2.0) * from_usize::<T>(i);
            values[start + i] = mean * (T::one() + delta * offset / span);
        }
    }
    Eigenspectrum::new(values)
}

/// How a pair of spectra is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumRoute<T> {
    /// Both links are scaled identities: i.i.d. formula at (x', α').
    Flat { m: usize, n: usize, x_scale: T, alpha_scale: T },
    /// Partial fractions of the (possibly perturbed) spectra.
    Distinct {
        sr: PartialFraction<T>,
        rd: PartialFraction<T>,
        perturbed: bool,
    },
}

impl<T: Real> SpectrumRoute<T> {
    pub fn new(sr: &Eigenspectrum<T>, rd: &Eigenspectrum<T>) -> Result<Self> {
        if sr.is_flat() && rd.is_flat() {
            let cs = sr.sum() / from_usize(sr.len());
            let cd = rd.sum() / from_usize(rd.len());
            return Ok(SpectrumRoute::Flat {
                m: sr.len(),
                n: rd.len(),
                x_scale: (cs * cd).recip(),
                alpha_scale: cd,
            });
        }
        let perturbed = !(sr.is_distinct() && rd.is_distinct());
        let (s, d) = if perturbed {
            (perturb_clusters(sr)?, perturb_clusters(rd)?)
        } else {
            (sr.clone(), rd.clone())
        };
        Ok(SpectrumRoute::Distinct {
            sr: PartialFraction::new(&s)?,
            rd: PartialFraction::new(&d)?,
            perturbed,
        })
    }
}

/// Checks a value computed from perturbed spectra against quadrature over the
/// exact (repeated-eigenvalue) laws.
pub(crate) fn verify_against_oracle<T: Real>(
    value: T,
    x: T,
    alpha: T,
    sr: &Eigenspectrum<T>,
    rd: &Eigenspectrum<T>,
) -> Result<T> {
    let to64 = |e: &Eigenspectrum<T>| -> Result<PowerGain> {
        PowerGain::correlated(&Eigenspectrum::new(e.values().iter().map(|&v| to_f64(v)).collect())?)
    };
    let exact = outage_af_quadrature(to_f64(x), to_f64(alpha), &to64(sr)?, &to64(rd)?)?;
    let got = to_f64(value);
    let tol = CLUSTER_CHECK_TOL * exact.abs() + 1e-12;
    if (got - exact).abs() <= tol.max(10.0 * to_f64(T::epsilon()) * exact.abs()) {
        Ok(value)
    } else {
        Err(Error::Degenerate(format!(
            "split spectra {:?} / {:?} give {got:e}, quadrature gives {exact:e}",
            sr.values(),
            rd.values()
        )))
    }
}

/// Correlated Rayleigh links. Scaled-identity spectra use the i.i.d. formula;
/// repeated eigenvalues are split by `perturb_clusters` and the result is
/// checked against quadrature.
pub fn outage_af_correlated<T: Real>(
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
        } => outage_af_iid(x * x_scale, alpha * alpha_scale, m, n),
        SpectrumRoute::Distinct {
            sr: a,
            rd: b,
            perturbed,
        } => {
            let p = outage_af_distinct(x, alpha, &a, &b)?;
            if perturbed && x > T::zero() {
                verify_against_oracle(p, x, alpha, sr, rd)
            } else {
                Ok(p)
            }
        }
    }
}

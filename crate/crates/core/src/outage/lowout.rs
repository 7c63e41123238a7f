//! Leading-order behaviour of the outage probability as x → 0.

use crate::channel::{Eigenspectrum, PartialFraction};
use crate::error::{Error, Result};
use crate::scalar::{factorial, from_usize, inv_factorial, lit, Real};
use crate::specfun::{digamma_int, psi_pair};

use super::closed_form::{check_inputs, SpectrumRoute};

/// (a·x^p + b·x^p·ln(1/x))^N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowOutageExpansion<T> {
    pub leading_power: usize,
    pub coeff_poly: T,
    pub coeff_log: T,
    /// N for N identical relays under selection; 1 otherwise.
    pub repeat: usize,
    /// Upper end of the x range on which the expansion is meant to be used.
    pub validity: T,
}

impl<T: Real> LowOutageExpansion<T> {
    fn single(p: usize, a: T, b: T, alpha: T) -> Self {
        let mut validity = lit::<T>(0.1) / (T::one() + alpha);
        // keep a + b ln(1/x) positive
        if b > T::zero() && a < T::zero() {
            validity = validity.min(lit::<T>(0.1) * (a / b).exp());
        }
        Self {
            leading_power: p,
            coeff_poly: a,
            coeff_log: b,
            repeat: 1,
            validity,
        }
    }

    pub fn eval(&self, x: T) -> T {
        if x == T::zero() {
            return T::zero();
        }
        let one = x.powi(self.leading_power as i32) * (self.coeff_poly + self.coeff_log * x.recip().ln());
        one.powi(self.repeat as i32)
    }

    /// The expansion of the N-th power (N independent identical links).
    pub fn powered(self, n: usize) -> Self {
        Self {
            repeat: self.repeat * n,
            ..self
        }
    }

    /// Expansion of P(c·x) given the expansion of P(x).
    pub fn rescaled(self, c: T) -> Self {
        let cp = c.powi(self.leading_power as i32);
        Self {
            coeff_poly: (self.coeff_poly - self.coeff_log * c.ln()) * cp,
            coeff_log: self.coeff_log * cp,
            validity: self.validity / c,
            ..self
        }
    }
}

/// b_m = 1/m + 2ψ(1).
pub fn b_m<T: Real>(m: usize) -> Result<T> {
    Ok(from_usize::<T>(m).recip() + lit::<T>(2.0) * digamma_int::<T>(1)?)
}

/// i.i.d. links, by case m < n, m > n, m = n.
pub fn lowout_iid<T: Real>(alpha: T, m: usize, n: usize) -> Result<LowOutageExpansion<T>> {
    check_inputs(T::zero(), alpha)?;
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("antenna counts must be positive, got m = {m}, n = {n}")));
    }
    let out = if m < n {
        let a = (0..=m).fold(T::zero(), |acc, k| {
            acc + alpha.powi(k as i32) * factorial::<T>(n - m + k - 1) * inv_factorial::<T>(m - k)
                * inv_factorial::<T>(k)
        }) * inv_factorial::<T>(n - 1);
        LowOutageExpansion::single(m, a, T::zero(), alpha)
    } else if m > n {
        let a = factorial::<T>(m - n - 1) * inv_factorial::<T>(n) * inv_factorial::<T>(m - 1);
        LowOutageExpansion::single(n, a, T::zero(), alpha)
    } else {
        let noise = (1..=m).fold(T::zero(), |acc, k| {
            acc + alpha.powi(k as i32) * inv_factorial::<T>(m - k) * inv_factorial::<T>(k)
        });
        let a = (noise + b_m::<T>(m)? * inv_factorial::<T>(m)) * inv_factorial::<T>(m - 1);
        let b = inv_factorial::<T>(m) * inv_factorial::<T>(m - 1);
        LowOutageExpansion::single(m, a, b, alpha)
    };
    Ok(out)
}

/// D_kl(α) = (−1)^{l−k} α^{l−k} / ((l−k)!(k−1)!k!).
pub fn d_kl<T: Real>(k: usize, l: usize, alpha: T) -> T {
    debug_assert!(k >= 1 && l >= k);
    let sign = if (l - k).is_multiple_of(2) { T::one() } else { -T::one() };
    sign * alpha.powi((l - k) as i32) * inv_factorial::<T>(l - k) * inv_factorial::<T>(k - 1)
        * inv_factorial::<T>(k)
}

fn sign_pow<T: Real>(k: usize) -> T {
    if k.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

/// Σ_{k=1}^{m} Σ_i B_i ln η_i / η_i^k · D_km(α).
fn relay_log_sum<T: Real>(rd: &PartialFraction<T>, m: usize, alpha: T) -> T {
    (1..=m).fold(T::zero(), |acc, k| {
        let inner = rd
            .pairs()
            .fold(T::zero(), |s, (b, eta)| s + b * eta.ln() / eta.powi(k as i32));
        acc + inner * d_kl(k, m, alpha)
    })
}

/// Correlated links with distinct eigenvalues (m, n are the ranks).
pub fn lowout_distinct<T: Real>(
    alpha: T,
    sr: &PartialFraction<T>,
    rd: &PartialFraction<T>,
) -> Result<LowOutageExpansion<T>> {
    check_inputs(T::zero(), alpha)?;
    let m = sr.eigenvalues().len();
    let n = rd.eigenvalues().len();
    let det_sr = sr.eigenvalues().iter().fold(T::one(), |a, &b| a * b);
    let det_rd = rd.eigenvalues().iter().fold(T::one(), |a, &b| a * b);
    let noise = alpha.powi(m as i32) * inv_factorial::<T>(m) / det_sr;
    let out = if m < n {
        let a1 = noise + sign_pow::<T>(m + 1) / det_sr * relay_log_sum(rd, m, alpha);
        LowOutageExpansion::single(m, a1, T::zero(), alpha)
    } else if m > n {
        let a2 = sign_pow::<T>(n + 1) * inv_factorial::<T>(n) * inv_factorial::<T>(n - 1) / det_rd
            * sr.log_moment(n as i32);
        LowOutageExpansion::single(n, a2, T::zero(), alpha)
    } else {
        let b3 = inv_factorial::<T>(m) * inv_factorial::<T>(m - 1) / (det_sr * det_rd);
        let a3 = noise
            + sign_pow::<T>(m + 1) * inv_factorial::<T>(m) * inv_factorial::<T>(m - 1) / det_rd
                * sr.log_moment(m as i32)
            + b3 * psi_pair::<T>(m as u32)?
            + sign_pow::<T>(m + 1) / det_sr * relay_log_sum(rd, m, alpha);
        LowOutageExpansion::single(m, a3, b3, alpha)
    };
    Ok(out)
}

/// Correlated Rayleigh links; repeated eigenvalues follow the same policy as
/// the closed form (scaled identities go to the i.i.d. expansion, other
/// repeats are split).
pub fn lowout_correlated<T: Real>(
    alpha: T,
    sr: &Eigenspectrum<T>,
    rd: &Eigenspectrum<T>,
) -> Result<LowOutageExpansion<T>> {
    match SpectrumRoute::new(sr, rd)? {
        SpectrumRoute::Flat {
            m,
            n,
            x_scale,
            alpha_scale,
        } => Ok(lowout_iid(alpha * alpha_scale, m, n)?.rescaled(x_scale)),
        SpectrumRoute::Distinct { sr, rd, .. } => lowout_distinct(alpha, &sr, &rd),
    }
}

/// Low-outage slope of the 2×1 channel with one correlated two-antenna link
/// at α → 0: ln((1+|ρ|)/(1−|ρ|))/(2|ρ|), tending to 1 as ρ → 0.
pub fn two_by_one_coefficient<T: Real>(rho_abs: T) -> Result<T> {
    if !(rho_abs >= T::zero() && rho_abs < T::one()) {
        return Err(Error::Domain(format!("|rho| must lie in [0, 1), got {rho_abs}")));
    }
    if rho_abs < lit(1e-6) {
        return Ok(T::one() + rho_abs * rho_abs / lit(3.0));
    }
    Ok(((T::one() + rho_abs) / (T::one() - rho_abs)).ln() / (lit::<T>(2.0) * rho_abs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outage::closed_form::{outage_af_correlated, outage_af_iid};
    use crate::specfun::EULER_GAMMA;

    fn spec(v: &[f64]) -> Eigenspectrum<f64> {
        Eigenspectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn iid_examples() {
        let e = lowout_iid(0.0, 1, 1).unwrap();
        assert!((e.coeff_poly - (1.0 - 2.0 * EULER_GAMMA)).abs() < 1e-15);
        assert!((e.coeff_poly + 0.1544).abs() < 1e-4);
        assert_eq!(e.coeff_log, 1.0);
        let e = lowout_iid(0.7, 1, 1).unwrap();
        assert!((e.coeff_poly - 0.7 - (1.0 - 2.0 * EULER_GAMMA)).abs() < 1e-15);
        let e = lowout_iid(0.0f64, 2, 2).unwrap();
        let x: f64 = 1e-3;
        let want = x * x * ((1.0 / x).ln() + 0.5 - 2.0 * EULER_GAMMA) / 2.0;
        assert!((e.eval(x) - want).abs() < 1e-18);
        assert!((e.eval(x) / 3.13e-6 - 1.0).abs() < 0.01);
        let e = lowout_iid(0.0f64, 1, 3).unwrap();
        assert!((e.coeff_poly - 0.5).abs() < 1e-15);
        // (19)
        assert!((lowout_iid(1.0f64, 1, 2).unwrap().coeff_poly - 2.0).abs() < 1e-15);
        assert!((lowout_iid(1.0f64, 2, 1).unwrap().coeff_poly - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extra_source_antenna_removes_alpha() {
        for (m, n) in [(2, 1), (3, 1), (3, 2)] {
            let base = lowout_iid(0.0, m, n).unwrap();
            for alpha in [1.0, 10.0] {
                assert_eq!(lowout_iid(alpha, m, n).unwrap().coeff_poly, base.coeff_poly);
            }
            let s = spec(&[1.7, 0.9, 0.4][..m]);
            let r = spec(&[1.3, 0.7][..n]);
            let base = lowout_correlated(0.0, &s, &r).unwrap();
            for alpha in [1.0, 10.0] {
                assert_eq!(lowout_correlated(alpha, &s, &r).unwrap().coeff_poly, base.coeff_poly);
            }
        }
    }

    #[test]
    fn ratio_to_exact_at_small_x() {
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            for alpha in [0.0, 1.0] {
                let x = 1e-5;
                let r = lowout_iid(alpha, m, n).unwrap().eval(x) / outage_af_iid(x, alpha, m, n).unwrap();
                assert!((0.95..=1.05).contains(&r), "{m}x{n} a={alpha}: {r}");
            }
        }
    }

    #[test]
    fn correlated_examples() {
        let r = spec(&[1.5, 0.5]);
        let e = lowout_correlated(0.0, &r, &r).unwrap();
        assert!((e.coeff_log - 1.0 / (2.0 * 0.75 * 0.75)).abs() < 1e-14);
        assert!((e.coeff_log - 0.8889).abs() < 1e-4);
        let e = lowout_correlated(0.0, &r, &spec(&[1.0])).unwrap();
        assert!((e.coeff_poly - 3f64.ln()).abs() < 1e-14);
        assert!((e.coeff_poly - two_by_one_coefficient(0.5).unwrap()).abs() < 1e-14);
        let e2 = lowout_correlated(0.0, &spec(&[1.0]), &r).unwrap();
        assert!((e2.coeff_poly - e.coeff_poly).abs() < 1e-14);
        assert!((two_by_one_coefficient(1e-9f64).unwrap() - 1.0).abs() < 1e-15);
        assert!((two_by_one_coefficient(1e-3f64).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn correlated_leading_term_matches_exact() {
        let x = 1e-6;
        for (a, b) in [
            (vec![1.5, 0.5], vec![1.0]),
            (vec![1.0], vec![1.5, 0.5]),
            (vec![1.8, 0.2], vec![1.3, 0.7]),
            (vec![2.1, 0.6, 0.3], vec![1.6, 0.4]),
            (vec![1.6, 0.4], vec![2.1, 0.6, 0.3]),
        ] {
            for alpha in [0.0, 0.5] {
                let (sa, sb) = (spec(&a), spec(&b));
                let e = lowout_correlated(alpha, &sa, &sb).unwrap();
                let p = crate::outage::outage_af_correlated_accurate(x, alpha, &sa, &sb).unwrap();
                let r = e.eval(x) / p;
                assert!((r - 1.0).abs() < 0.02, "{a:?} {b:?} a={alpha}: {r}");
            }
        }
        // continuity with the i.i.d. expansion
        let near = spec(&[1.0 + 1e-4, 1.0 - 1e-4]);
        for alpha in [0.0, 1.0] {
            let c = lowout_correlated(alpha, &near, &near).unwrap();
            let i = lowout_iid(alpha, 2, 2).unwrap();
            assert!((c.coeff_poly - i.coeff_poly).abs() < 1e-6);
            assert!((c.coeff_log - i.coeff_log).abs() < 1e-6);
        }
        let _ = outage_af_correlated(0.1, 0.0, &near, &near).unwrap();
    }

    #[test]
    fn powered_expansion() {
        let e = lowout_iid(1.0f64, 1, 2).unwrap().powered(2);
        assert!((e.eval(1e-2) - 4e-4).abs() < 1e-18);
        assert_eq!(lowout_iid(0.0f64, 2, 1).unwrap().powered(2).eval(1e-2), 1e-4);
    }
}

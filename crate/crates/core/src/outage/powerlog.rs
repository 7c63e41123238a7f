//! Truncated power-log series Σ_p (a_p + b_p·ln x)·x^p.

use crate::error::{Error, Result};
use crate::scalar::{factorial, from_usize, inv_factorial, lit, Real};
use crate::specfun::digamma_int;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLog<T> {
    pub a: Vec<T>,
    pub b: Vec<T>,
}

impl<T: Real> PowerLog<T> {
    pub fn zeros(len: usize) -> Self {
        Self {
            a: vec![T::zero(); len],
            b: vec![T::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn add_scaled(&mut self, other: &Self, w: T) {
        for p in 0..self.len().min(other.len()) {
            self.a[p] = self.a[p] + w * other.a[p];
            self.b[p] = self.b[p] + w * other.b[p];
        }
    }

    /// Product with e^{-βx}.
    pub fn mul_exp(&self, beta: T) -> Self {
        let len = self.len();
        let mut e = vec![T::zero(); len];
        let mut c = T::one();
        for (r, slot) in e.iter_mut().enumerate() {
            *slot = c;
            c = -c * beta / from_usize(r + 1);
        }
        let mut out = Self::zeros(len);
        for p in 0..len {
            for r in 0..=p {
                out.a[p] = out.a[p] + self.a[p - r] * e[r];
                out.b[p] = out.b[p] + self.b[p - r] * e[r];
            }
        }
        out
    }

    /// x^{h/2}·K_ν(2√(c·x)) with h ≥ ν and h ≡ ν (mod 2), from the small-argument
    /// expansion of K_ν.
    pub fn bessel_block(nu: u32, c: T, h: u32, len: usize) -> Result<Self> {
        if h < nu || !(h - nu).is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "x^({h}/2) K_{nu} is not a power-log series"
            )));
        }
        let nu_u = nu as usize;
        let half = lit::<T>(0.5);
        let sc = c.sqrt();
        let ln_c = c.ln();
        let mut out = Self::zeros(len);
        let base = ((h - nu) / 2) as usize;
        for q in 0..nu_u {
            let p = base + q;
            if p >= len {
                break;
            }
            let sign = if q % 2 == 0 { T::one() } else { -T::one() };
            out.a[p] = out.a[p]
                + half * sign * factorial::<T>(nu_u - q - 1) * inv_factorial::<T>(q)
                    * sc.powi(2 * q as i32 - nu as i32);
        }
        let base = ((h + nu) / 2) as usize;
        let sign = if nu % 2 == 1 { T::one() } else { -T::one() };
        for q in 0..len.saturating_sub(base) {
            let p = base + q;
            let coef = sign * sc.powi((nu_u + 2 * q) as i32) * inv_factorial::<T>(q)
                * inv_factorial::<T>(nu_u + q);
            let psi = digamma_int::<T>(q as u32 + 1)? + digamma_int::<T>((nu_u + q) as u32 + 1)?;
            out.a[p] = out.a[p] + coef * half * (ln_c - psi);
            out.b[p] = out.b[p] + coef * half;
        }
        Ok(out)
    }

    /// Zeroes every power below `p`.
    pub fn drop_below(&mut self, p: usize) {
        for i in 0..p.min(self.len()) {
            self.a[i] = T::zero();
            self.b[i] = T::zero();
        }
    }

    /// Sums from power `start` until two consecutive terms fall below
    /// `rel_tol`·|sum| or the table runs out. Returns (value, highest power used).
    pub fn eval(&self, x: T, start: usize, rel_tol: T) -> (T, usize, bool) {
        let ln_x = x.ln();
        let mut sum = T::zero();
        let mut xp = x.powi(start as i32);
        let mut small = 0;
        for p in start..self.len() {
            if xp == T::zero() && x < T::one() {
                return (sum, p, true);
            }
            let term = (self.a[p] + self.b[p] * ln_x) * xp;
            sum = sum + term;
            if sum != T::zero() && term.abs() <= rel_tol * sum.abs() {
                small += 1;
                if small == 2 {
                    return (sum, p, true);
                }
            } else {
                small = 0;
            }
            xp = xp * x;
        }
        (sum, self.len().saturating_sub(1), false)
    }
}

/// Highest usable table length when coefficients grow like `scale`^p.
pub fn degree_cap<T: Real>(scale: T, wanted: usize, floor: usize) -> usize {
    let room = T::max_value().ln() * lit(0.8);
    let growth = scale.max(T::one()).ln();
    if growth <= T::zero() {
        return wanted;
    }
    let cap = (room / growth).to_usize().unwrap_or(wanted);
    wanted.min(cap.max(floor))
}

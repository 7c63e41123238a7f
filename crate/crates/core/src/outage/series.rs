//! Small-x series P_out = Σ_l (f_l + g_l·ln x)·x^{l + min(m, n)}.

use crate::channel::PartialFraction;
use crate::error::{Error, Result};
use crate::scalar::{factorial, from_usize, inv_factorial, lit, Real};
use crate::specfun::digamma_int;

use super::closed_form::check_inputs;
use super::powerlog::{degree_cap, PowerLog};

/// Largest x accepted by the series evaluators.
pub const SERIES_X_MAX: f64 = 0.5;
/// Relative size of the last retained term.
pub const SERIES_REL_TOL: f64 = 1e-12;
/// Default truncation order.
pub const SERIES_MAX_ORDER: usize = 60;

/// The m > n decomposition f = f′ + f″ − c′ − c″, g = g′ + g″.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCoefficients<T> {
    pub f1: Vec<T>,
    pub f2: Vec<T>,
    pub c1: Vec<T>,
    pub c2: Vec<T>,
    pub g1: Vec<T>,
    pub g2: Vec<T>,
}

/// Coefficients f_l, g_l for l = 0..=L.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable<T> {
    pub min_order: usize,
    pub f: Vec<T>,
    pub g: Vec<T>,
    pub split: Option<SplitCoefficients<T>>,
}

impl<T: Real> SeriesTable<T> {
    fn from_powerlog(series: &PowerLog<T>, min_order: usize) -> Self {
        Self {
            min_order,
            f: series.a[min_order..].to_vec(),
            g: series.b[min_order..].to_vec(),
            split: None,
        }
    }

    /// Truncation order L.
    pub fn order(&self) -> usize {
        self.f.len().saturating_sub(1)
    }

    /// Sums the table at x; returns the value, the last order used and whether
    /// the relative-term criterion was met before the table ran out.
    pub fn eval(&self, x: T) -> (T, usize, bool) {
        if x == T::zero() {
            return (T::zero(), 0, true);
        }
        let mut series = PowerLog::zeros(self.min_order + self.f.len());
        series.a[self.min_order..].copy_from_slice(&self.f);
        series.b[self.min_order..].copy_from_slice(&self.g);
        let (v, p, ok) = series.eval(x, self.min_order, lit(SERIES_REL_TOL));
        (v, p - self.min_order, ok)
    }
}

fn check_order(l_max: usize) -> Result<()> {
    if l_max == 0 || l_max > 200 {
        return Err(Error::Domain(format!("truncation order must lie in 1..=200, got {l_max}")));
    }
    Ok(())
}

/// Table for i.i.d. links from the term-by-term expansion of the Bessel
/// closed form.
pub fn series_table_iid<T: Real>(alpha: T, m: usize, n: usize, l_max: usize) -> Result<SeriesTable<T>> {
    check_inputs(T::zero(), alpha)?;
    check_order(l_max)?;
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("antenna counts must be positive, got m = {m}, n = {n}")));
    }
    let lo = m.min(n);
    let len = lo + l_max + 1;
    let mut s = PowerLog::zeros(len);
    for k in 0..m {
        for i in 0..=k {
            let order = (n + i).abs_diff(k) as u32;
            let block = PowerLog::bessel_block(order, T::one(), (k + i + n) as u32, len)?;
            let w = alpha.powi(i as i32) * inv_factorial::<T>(i) * inv_factorial::<T>(k - i);
            s.add_scaled(&block, w);
        }
    }
    let mut p = PowerLog::zeros(len);
    p.add_scaled(&s.mul_exp(alpha), -lit::<T>(2.0) * inv_factorial::<T>(n - 1));
    p.a[0] = p.a[0] + T::one();
    p.drop_below(lo);
    Ok(SeriesTable::from_powerlog(&p, lo))
}

/// α = 0 table: Σ_{i<|n−m|} μ_i x^{i+min} + Σ_i β_i x^{i+max}(ln x − c_i).
pub fn series_table_noiseless<T: Real>(m: usize, n: usize, l_max: usize) -> Result<SeriesTable<T>> {
    check_order(l_max)?;
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("antenna counts must be positive, got m = {m}, n = {n}")));
    }
    let lo = m.min(n);
    let hi = m.max(n);
    let d = hi - lo;
    let len = lo + l_max + 1;
    let mut p = PowerLog::zeros(len);
    let norm = inv_factorial::<T>(n - 1) * inv_factorial::<T>(m - 1);
    for i in 0..d {
        if lo + i >= len {
            break;
        }
        let sign = if i % 2 == 0 { T::one() } else { -T::one() };
        let mu = sign * factorial::<T>(d - i - 1) * inv_factorial::<T>(i) / from_usize::<T>(lo + i) * norm;
        p.a[lo + i] = p.a[lo + i] + mu;
    }
    let sign = if d % 2 == 1 { T::one() } else { -T::one() };
    for i in 0..len.saturating_sub(hi) {
        let beta = sign * inv_factorial::<T>(i) / from_usize::<T>(hi + i) * inv_factorial::<T>(d + i) * norm;
        let c = from_usize::<T>(hi + i).recip()
            + digamma_int::<T>(i as u32 + 1)?
            + digamma_int::<T>((d + i) as u32 + 1)?;
        p.a[hi + i] = p.a[hi + i] - beta * c;
        p.b[hi + i] = p.b[hi + i] + beta;
    }
    Ok(SeriesTable::from_powerlog(&p, lo))
}

/// Series evaluation for i.i.d. links: the α = 0 form when the relay is
/// noiseless, the expanded Bessel form otherwise. x must not exceed
/// `SERIES_X_MAX`.
pub fn outage_series_iid<T: Real>(
    x: T,
    alpha: T,
    m: usize,
    n: usize,
    l_max: usize,
) -> Result<(T, SeriesTable<T>)> {
    check_inputs(x, alpha)?;
    if x > lit(SERIES_X_MAX) {
        return Err(Error::Range(format!(
            "series evaluation needs x <= {SERIES_X_MAX}, got {x}"
        )));
    }
    let table = if alpha == T::zero() {
        series_table_noiseless(m, n, l_max)?
    } else {
        series_table_iid(alpha, m, n, l_max)?
    };
    let (v, _, _) = table.eval(x);
    Ok((v.max(T::zero()).min(T::one()), table))
}

/// Table for correlated links with distinct eigenvalues. Coefficients grow
/// like max(1/(λη), α/λ)^l, so the table is shortened when that is large.
pub fn series_table_correlated<T: Real>(
    alpha: T,
    sr: &PartialFraction<T>,
    rd: &PartialFraction<T>,
    l_max: usize,
) -> Result<SeriesTable<T>> {
    check_inputs(T::zero(), alpha)?;
    check_order(l_max)?;
    let lo = sr.eigenvalues().len().min(rd.eigenvalues().len());
    let lam_min = sr.eigenvalues().iter().copied().fold(T::infinity(), T::min);
    let eta_min = rd.eigenvalues().iter().copied().fold(T::infinity(), T::min);
    let growth = (lam_min * eta_min).recip().max(alpha / lam_min);
    let len = degree_cap(growth, lo + l_max + 1, lo + 2);
    let mut p = PowerLog::zeros(len);
    for (a, lam) in sr.pairs() {
        let mut inner = PowerLog::zeros(len);
        for (b, eta) in rd.pairs() {
            let c = (lam * eta).recip();
            let block = PowerLog::bessel_block(1, c, 1, len)?;
            inner.add_scaled(&block, b * lit::<T>(2.0) * c.sqrt());
        }
        p.add_scaled(&inner.mul_exp(alpha / lam), -a);
    }
    p.a[0] = p.a[0] + T::one();
    p.drop_below(lo);
    Ok(SeriesTable::from_powerlog(&p, lo))
}

/// Scaled argument below which the correlated series is used.
pub(crate) fn correlated_series_scale<T: Real>(
    x: T,
    alpha: T,
    sr: &PartialFraction<T>,
    rd: &PartialFraction<T>,
) -> T {
    let lam_min = sr.eigenvalues().iter().copied().fold(T::infinity(), T::min);
    let eta_min = rd.eigenvalues().iter().copied().fold(T::infinity(), T::min);
    (x / (lam_min * eta_min)).max(alpha * x / lam_min)
}

// ---- coefficient tables written out term by term ----

fn fact_checked<T: Real>(k: i64) -> Result<T> {
    if k < 0 {
        return Err(Error::Domain(format!("factorial of negative argument {k}")));
    }
    Ok(factorial(k as usize))
}

fn inv_fact_checked<T: Real>(k: i64) -> T {
    if k < 0 {
        T::zero()
    } else {
        inv_factorial(k as usize)
    }
}

fn psi<T: Real>(k: i64) -> Result<T> {
    if k < 1 {
        return Err(Error::Domain(format!("digamma at non-positive integer {k}")));
    }
    digamma_int(k as u32)
}

fn sgn<T: Real>(k: i64) -> T {
    if k.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Coefficient tables written out term by term. These are checked against
/// `series_table_iid` rather than trusted.
pub fn explicit_table<T: Real>(alpha: T, m: usize, n: usize, l_max: usize) -> Result<SeriesTable<T>> {
    check_order(l_max)?;
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!("antenna counts must be positive, got m = {m}, n = {n}")));
    }
    let (mi, ni) = (m as i64, n as i64);
    let omega = |i: i64, j: i64| -> T {
        alpha.powi((i + j) as i32) * from_usize::<T>(m) * inv_fact_checked::<T>(i)
            * inv_fact_checked::<T>(j)
            * inv_fact_checked::<T>(ni - 1)
            * inv_fact_checked::<T>(mi - i)
    };
    let p_of = |i: i64| (mi - ni - i).abs();
    let p0 = p_of(0);
    let q = |l: i64, i: i64, j: i64| l - i - j;
    let pos = |v: i64| v.max(0);
    let mut f = Vec::with_capacity(l_max + 1);
    let mut g = Vec::with_capacity(l_max + 1);
    if m <= n {
        for l in 0..=l_max as i64 {
            let lm = from_usize::<T>((l + mi) as usize);
            let mut fl = T::zero();
            let i_start = if m < n { 0 } else { 1 };
            for i in i_start..=mi {
                for j in pos(l + 1 - p_of(i))..=l {
                    let num: T = if m < n {
                        fact_checked(p0 - q(l, i, j) - 1)?
                    } else {
                        fact_checked(-q(l, i, j) - 1)?
                    };
                    fl = fl + omega(i, j) * sgn::<T>(l) * num * inv_fact_checked::<T>(q(l, 0, j)) / lm;
                }
            }
            let mut gl = T::zero();
            let mut cl = T::zero();
            if l >= p0 {
                for i in 0..=(l - p0).min(mi) {
                    for j in 0..=(l - p0 - i) {
                        let denom = inv_fact_checked::<T>(q(l, i, j) - p0) * inv_fact_checked::<T>(q(l, 0, j)) / lm;
                        let s = sgn::<T>(p_of(i) + j + 1);
                        gl = gl + omega(i, j) * s * denom;
                        let ps = psi::<T>(q(l, i, j) - p0 + 1)? + psi::<T>(q(l, 0, j) + 1)? + lm.recip();
                        cl = cl + s * omega(i, j) * ps * denom;
                    }
                }
            }
            f.push(fl - cl);
            g.push(gl);
        }
        return Ok(SeriesTable {
            min_order: m.min(n),
            f,
            g,
            split: None,
        });
    }
    let mut split = SplitCoefficients {
        f1: Vec::new(),
        f2: Vec::new(),
        c1: Vec::new(),
        c2: Vec::new(),
        g1: Vec::new(),
        g2: Vec::new(),
    };
    for l in 0..=l_max as i64 {
        let ln_ = from_usize::<T>((l + ni) as usize);
        let theta = |i: i64, j: i64| -> T {
            sgn::<T>(p_of(i) + j + 1) * inv_fact_checked::<T>(q(l, i, j)) * inv_fact_checked::<T>(q(l, 0, j) - p0) / ln_
        };
        let upsilon = |i: i64, j: i64| -> Result<T> {
            Ok((psi::<T>(q(l, i, j) + 1)? + psi::<T>(q(l, 0, j) - p0 + 1)? + ln_.recip()) * theta(i, j))
        };
        let mut f1 = T::zero();
        for i in 0..=l.min(p0 - 1) {
            for j in pos(l + 1 - p0)..=(l - i) {
                let num: T = fact_checked(p0 - q(l, 0, j) - 1)?;
                f1 = f1 + omega(i, j) * sgn::<T>(l - i) * num * inv_fact_checked::<T>(q(l, i, j)) / ln_;
            }
        }
        let mut f2 = T::zero();
        if l >= p0 {
            for i in (p0 + 1)..=mi {
                for j in pos(l + 1 - i)..=(l - p0) {
                    let num: T = fact_checked(-q(l, i, j) - 1)?;
                    f2 = f2 + omega(i, j) * sgn::<T>(l - p0) * num * inv_fact_checked::<T>(q(l, 0, j) - p0) / ln_;
                }
            }
        }
        let (mut c1, mut g1) = (T::zero(), T::zero());
        if l > p0 {
            for i in (p0 + 1)..=l.min(mi) {
                for j in 0..=(l - i) {
                    c1 = c1 + upsilon(i, j)? * omega(i, j);
                    g1 = g1 + theta(i, j) * omega(i, j);
                }
            }
        }
        let (mut c2, mut g2) = (T::zero(), T::zero());
        if l >= p0 {
            for i in 0..=p0 {
                for j in 0..=(l - p0) {
                    c2 = c2 + upsilon(i, j)? * omega(i, j);
                    g2 = g2 + theta(i, j) * omega(i, j);
                }
            }
        }
        f.push(f1 + f2 - c1 - c2);
        g.push(g1 + g2);
        split.f1.push(f1);
        split.f2.push(f2);
        split.c1.push(c1);
        split.c2.push(c2);
        split.g1.push(g1);
        split.g2.push(g2);
    }
    Ok(SeriesTable {
        min_order: n,
        f,
        g,
        split: Some(split),
    })
}

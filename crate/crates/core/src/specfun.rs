//! Integer-order modified Bessel functions of the second kind and the
//! integer-argument digamma function.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Euler's constant to 20 significant digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Largest order accepted by [`bessel_k`].
pub const MAX_BESSEL_ORDER: u32 = 64;

/// Arguments at or below this use the power series, above it the continued fraction.
pub const SERIES_SWITCH: f64 = 2.0;

/// Largest argument accepted by [`bessel_k_series`].
pub const SERIES_REGIME_MAX: f64 = 4.0;

const SERIES_MAX_TERMS: usize = 200;
const CF_MAX_ITER: usize = 10_000;

/// A function value together with a rough relative error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult<T> {
    pub value: T,
    pub est_rel_error: T,
}

/// ψ(k) = −C + Σ_{i=1}^{k−1} 1/i.
pub fn digamma_int<T: Real>(k: u32) -> Result<T> {
    if k < 1 {
        return Err(Error::Domain(format!("digamma_int requires k >= 1, got {k}")));
    }
    let mut acc = -lit::<T>(EULER_GAMMA);
    for i in 1..k {
        acc = acc + T::one() / from_usize::<T>(i as usize);
    }
    Ok(acc)
}

/// Ψ_k = ψ(k) + ψ(k+1).
pub fn psi_pair<T: Real>(k: u32) -> Result<T> {
    let a = digamma_int::<T>(k)?;
    Ok(a + a + T::one() / from_usize::<T>(k as usize))
}

/// K_order(x) for integer order and x > 0.
///
/// K_0 and K_1 come from the logarithmic power series for `x <= 2` and from
/// Steed's continued fraction above; higher orders use the upward recurrence
/// K_{N+1} = K_{N-1} + (2N/x) K_N, which is stable for K. Underflows to zero
/// for x beyond roughly 700.
pub fn bessel_k<T: Real>(order: u32, x: T) -> Result<T> {
    bessel_k_with_error(order, x).map(|r| r.value)
}

pub fn bessel_k_with_error<T: Real>(order: u32, x: T) -> Result<SpecFunResult<T>> {
    check_args(order, x)?;
    let (k0, k1, base_err) = if x <= lit(SERIES_SWITCH) {
        k01_series(x)
    } else {
        k01_continued_fraction(x)?
    };
    let value = recur_up(order, x, k0, k1)?;
    let est_rel_error = base_err + T::epsilon() * from_usize::<T>(order as usize + 1);
    Ok(SpecFunResult {
        value,
        est_rel_error,
    })
}

/// Partial sum of the logarithmic series for K_order(x).
///
/// The finite part Σ_{k<N} is always included in full; `k_max` is the number
/// of terms taken from the infinite part (`k_max = 0` keeps the finite part
/// only). Serves as the independent small-argument oracle for [`bessel_k`].
pub fn bessel_k_series<T: Real>(order: u32, x: T, k_max: usize) -> Result<T> {
    check_args(order, x)?;
    if x > lit(SERIES_REGIME_MAX) {
        return Err(Error::Range(format!(
            "bessel_k_series: x = {x} is outside the series regime (x <= {SERIES_REGIME_MAX})"
        )));
    }
    let (value, _) = series_sum(order as usize, x, k_max, false);
    if !value.is_finite() {
        return Err(Error::Overflow(format!("K_{order}({x})")));
    }
    Ok(value)
}

fn check_args<T: Real>(order: u32, x: T) -> Result<()> {
    if order > MAX_BESSEL_ORDER {
        return Err(Error::UnsupportedOrder {
            order,
            max: MAX_BESSEL_ORDER,
        });
    }
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "Bessel K requires a finite positive argument, got {x}"
        )));
    }
    Ok(())
}

/// Returns (sum, Σ|terms|). With `adaptive` the infinite part stops once a
/// term falls below half an ulp of the partial sum.
fn series_sum<T: Real>(n: usize, x: T, k_max: usize, adaptive: bool) -> (T, T) {
    let half = lit::<T>(0.5);
    let h = x * half;
    let h2 = h * h;
    let ln_h = h.ln();

    let mut sum = T::zero();
    let mut abs_sum = T::zero();

    // ½ Σ_{k=0}^{N-1} (-1)^k (N-k-1)!/k! (x/2)^{2k-N}
    if n > 0 {
        let mut f = h.powi(-(n as i32));
        for i in 1..n {
            f = f * from_usize::<T>(i);
        }
        for k in 0..n {
            let term = half * f;
            sum = if k % 2 == 0 { sum + term } else { sum - term };
            abs_sum = abs_sum + term.abs();
            if k + 1 < n {
                f = f * h2 / (from_usize::<T>(k + 1) * from_usize::<T>(n - k - 1));
            }
        }
    }

    // (-1)^{N+1} Σ_k (x/2)^{N+2k}/(k!(N+k)!) (ln(x/2) - ½ψ(k+1) - ½ψ(N+k+1))
    let sign = if n.is_multiple_of(2) { -T::one() } else { T::one() };
    let mut t = h.powi(n as i32);
    for i in 2..=n {
        t = t / from_usize::<T>(i);
    }
    let mut psi_a = -lit::<T>(EULER_GAMMA);
    let mut psi_b = psi_a;
    for i in 1..=n {
        psi_b = psi_b + T::one() / from_usize::<T>(i);
    }
    let cap = if adaptive { SERIES_MAX_TERMS } else { k_max };
    for k in 0..cap {
        let term = sign * t * (ln_h - half * psi_a - half * psi_b);
        sum = sum + term;
        abs_sum = abs_sum + term.abs();
        if adaptive && term.abs() < lit::<T>(0.5) * T::epsilon() * sum.abs() {
            break;
        }
        let k1 = from_usize::<T>(k + 1);
        t = t * h2 / (k1 * from_usize::<T>(n + k + 1));
        psi_a = psi_a + T::one() / k1;
        psi_b = psi_b + T::one() / from_usize::<T>(n + k + 1);
    }
    (sum, abs_sum)
}

fn k01_series<T: Real>(x: T) -> (T, T, T) {
    let (k0, a0) = series_sum(0, x, 0, true);
    let (k1, a1) = series_sum(1, x, 0, true);
    let cond = (a0 / k0.abs()).max(a1 / k1.abs());
    (k0, k1, T::epsilon() * cond * lit(4.0))
}

/// Steed's method (continued fraction CF2 with Temme's normalisation) for
/// K_0 and K_1, valid for x >= 2.
fn k01_continued_fraction<T: Real>(x: T) -> Result<(T, T, T)> {
    let one = T::one();
    let two = lit::<T>(2.0);
    let a1 = lit::<T>(0.25);
    let mut b = two * (one + x);
    let mut d = one / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = one;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    let mut converged = false;
    let mut iters = 0;
    for i in 1..CF_MAX_ITER {
        iters = i;
        let fi = from_usize::<T>(i);
        a = a - two * fi;
        c = -a * c / (fi + one);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = one / (b + a * d);
        delh = (b * d - one) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() < T::epsilon() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure {
            routine: "bessel_k continued fraction",
            detail: format!("no convergence after {iters} iterations at x = {x}"),
        });
    }
    h = a1 * h;
    let k0 = (T::PI() / (two * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + lit(0.5) - h) / x;
    Ok((k0, k1, T::epsilon() * lit(16.0)))
}

fn recur_up<T: Real>(order: u32, x: T, k0: T, k1: T) -> Result<T> {
    let value = match order {
        0 => k0,
        1 => k1,
        _ => {
            let mut prev = k0;
            let mut cur = k1;
            for nu in 1..order {
                let next = prev + from_usize::<T>(2 * nu as usize) / x * cur;
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    if !value.is_finite() {
        return Err(Error::Overflow(format!("K_{order}({x})")));
    }
    Ok(value)
}

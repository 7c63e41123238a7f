//! Eigen-spectra, partial-fraction weights and the generalized χ² law of |h|².

use crate::error::{Error, Result};
use crate::scalar::{from_usize, inv_factorial, lit, Real};

/// Relative gap below which two eigenvalues count as repeated.
pub const DISTINCT_REL_GAP: f64 = 1e-6;

/// Eigenvalues below `ZERO_EIG_TOL * dim` are treated as zero and pruned.
pub const ZERO_EIG_TOL: f64 = 1e-12;

/// Positive eigenvalues of a correlation matrix, sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspectrum<T> {
    values: Vec<T>,
    distinct: bool,
    original_dim: usize,
}

impl<T: Real> Eigenspectrum<T> {
    /// Builds a spectrum from raw eigenvalues, pruning numerical zeros.
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        let original_dim = values.len();
        if original_dim == 0 {
            return Err(Error::Validation("empty eigenvalue list".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("non-finite eigenvalue".into()));
        }
        let zero_tol = lit::<T>(ZERO_EIG_TOL) * from_usize::<T>(original_dim);
        if let Some(neg) = values.iter().find(|&&v| v < -zero_tol) {
            return Err(Error::Validation(format!(
                "negative eigenvalue {neg}: matrix is indefinite"
            )));
        }
        values.retain(|&v| v >= zero_tol);
        if values.is_empty() {
            return Err(Error::Validation("all eigenvalues are zero".into()));
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        let gap = lit::<T>(DISTINCT_REL_GAP);
        let distinct = values.windows(2).all(|w| (w[0] - w[1]) > gap * w[0]);
        Ok(Self {
            values,
            distinct,
            original_dim,
        })
    }

    /// `k` unit eigenvalues (the i.i.d. Rayleigh link).
    pub fn identity(k: usize) -> Result<Self> {
        Self::new(vec![T::one(); k])
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Rank after zero pruning.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }

    pub fn original_dim(&self) -> usize {
        self.original_dim
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a + b)
    }

    /// Product of the retained eigenvalues (the determinant for full rank).
    pub fn product(&self) -> T {
        self.values.iter().fold(T::one(), |a, &b| a * b)
    }

    pub fn max(&self) -> T {
        self.values[0]
    }

    /// True when every eigenvalue equals one to within the distinctness gap.
    pub fn is_unit(&self) -> bool {
        let gap = lit::<T>(DISTINCT_REL_GAP);
        self.values.iter().all(|&v| (v - T::one()).abs() <= gap)
    }

    /// True when all eigenvalues coincide (a scaled identity).
    pub fn is_flat(&self) -> bool {
        let gap = lit::<T>(DISTINCT_REL_GAP);
        let top = self.values[0];
        self.values.iter().all(|&v| (top - v) <= gap * top)
    }

    /// Groups of repeated eigenvalues as (start index, length), descending order.
    pub fn clusters(&self) -> Vec<(usize, usize)> {
        let gap = lit::<T>(DISTINCT_REL_GAP);
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.values.len() {
            let split = i == self.values.len()
                || (self.values[i - 1] - self.values[i]) > gap * self.values[i - 1];
            if split {
                out.push((start, i - start));
                start = i;
            }
        }
        out
    }
}

/// Weights A_k of Π_k (1 − jωλ_k)^{-1} = Σ_k A_k (1 − jωλ_k)^{-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFraction<T> {
    eigenvalues: Vec<T>,
    coefficients: Vec<T>,
}

impl<T: Real> PartialFraction<T> {
    pub fn new(eigs: &Eigenspectrum<T>) -> Result<Self> {
        if !eigs.is_distinct() {
            return Err(Error::Degenerate(format!(
                "partial fractions need distinct eigenvalues, got {:?}",
                eigs.values()
            )));
        }
        let lam = eigs.values();
        let coefficients = lam
            .iter()
            .enumerate()
            .map(|(k, &lk)| {
                lam.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != k)
                    .fold(T::one(), |acc, (_, &li)| acc * lk / (lk - li))
            })
            .collect();
        Ok(Self {
            eigenvalues: lam.to_vec(),
            coefficients,
        })
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn pairs(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.coefficients
            .iter()
            .copied()
            .zip(self.eigenvalues.iter().copied())
    }

    /// Σ_k A_k / λ_k^p.
    pub fn moment(&self, p: i32) -> T {
        self.pairs()
            .fold(T::zero(), |acc, (a, l)| acc + a / l.powi(p))
    }

    /// Σ_k A_k ln(λ_k) / λ_k^p.
    pub fn log_moment(&self, p: i32) -> T {
        self.pairs()
            .fold(T::zero(), |acc, (a, l)| acc + a * l.ln() / l.powi(p))
    }
}

/// Distribution of g = |h|² for a circular-symmetric complex Gaussian vector.
#[derive(Debug, Clone, PartialEq)]
pub enum GenChi2<T> {
    /// Distinct eigenvalues: exponential mixture.
    Mixture(PartialFraction<T>),
    /// `dof` equal eigenvalues `scale`: Gamma(dof, scale).
    Flat { dof: usize, scale: T },
}

impl<T: Real> GenChi2<T> {
    /// Picks the mixture or the flat path; partially repeated spectra are rejected.
    pub fn new(eigs: &Eigenspectrum<T>) -> Result<Self> {
        if eigs.is_distinct() {
            Ok(GenChi2::Mixture(PartialFraction::new(eigs)?))
        } else if eigs.is_flat() {
            let scale = eigs.sum() / from_usize::<T>(eigs.len());
            Ok(GenChi2::Flat {
                dof: eigs.len(),
                scale,
            })
        } else {
            Err(Error::Degenerate(format!(
                "partially repeated eigenvalues {:?}",
                eigs.values()
            )))
        }
    }

    pub fn pdf(&self, x: T) -> T {
        if x < T::zero() {
            return T::zero();
        }
        match self {
            GenChi2::Mixture(pf) => {
                if x <= pf.eigenvalues()[pf.eigenvalues().len() - 1] {
                    small_argument_law(pf.eigenvalues(), x).0
                } else {
                    pf.pairs()
                        .fold(T::zero(), |acc, (a, l)| acc + a / l * (-x / l).exp())
                }
            }
            GenChi2::Flat { dof, scale } => {
                let y = x / *scale;
                let body = if *dof == 1 {
                    (-y).exp()
                } else {
                    y.powi(*dof as i32 - 1) * (-y).exp() * inv_factorial::<T>(dof - 1)
                };
                body / *scale
            }
        }
    }

    pub fn cdf(&self, x: T) -> T {
        if x <= T::zero() {
            return T::zero();
        }
        let v = match self {
            GenChi2::Mixture(pf) => {
                if x <= pf.eigenvalues()[pf.eigenvalues().len() - 1] {
                    small_argument_law(pf.eigenvalues(), x).1
                } else {
                    pf.pairs()
                        .fold(T::zero(), |acc, (a, l)| acc - a * (-x / l).exp_m1())
                }
            }
            GenChi2::Flat { dof, scale } => gamma_int_cdf(*dof, x / *scale),
        };
        v.max(T::zero()).min(T::one())
    }
}

/// (pdf, cdf) of Σ_k λ_k·E_k for independent unit exponentials E_k, from the
/// power series at the origin. Every term is a complete homogeneous symmetric
/// polynomial of the 1/λ_k, so no cancellation occurs between eigenvalues; the
/// series is used for y ≤ min λ_k.
fn small_argument_law<T: Real>(eigenvalues: &[T], y: T) -> (T, T) {
    const MAX_TERMS: usize = 200;
    let n = eigenvalues.len();
    let mu: Vec<T> = eigenvalues.iter().map(|&l| l.recip()).collect();
    let prod_mu = mu.iter().fold(T::one(), |a, &b| a * b);
    let mut h = [T::zero(); MAX_TERMS];
    h[0] = T::one();
    for &m in &mu {
        for p in 1..MAX_TERMS {
            h[p] = h[p] + m * h[p - 1];
        }
    }
    // y^{N-1+p}/(N-1+p)!
    let mut power = y.powi(n as i32 - 1) * inv_factorial::<T>(n - 1);
    let mut pdf = T::zero();
    let mut cdf = T::zero();
    for (p, &hp) in h.iter().enumerate() {
        let sign = if p % 2 == 0 { T::one() } else { -T::one() };
        let next = power * y / from_usize::<T>(n + p);
        pdf = pdf + sign * hp * power;
        cdf = cdf + sign * hp * next;
        if (hp * next).abs() <= T::epsilon() * cdf.abs() * lit(0.01) && p > 0 {
            break;
        }
        power = next;
    }
    ((pdf * prod_mu).max(T::zero()), (cdf * prod_mu).max(T::zero()).min(T::one()))
}

/// Law of Σ_k λ_k·E_k when eigenvalues may repeat: a signed mixture of Gamma
/// densities Σ c_{k,r}·Gamma(r, λ_k) over the distinct values λ_k.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSum<T> {
    eigenvalues: Vec<T>,
    /// (shape r, scale λ, weight c).
    terms: Vec<(usize, T, T)>,
}

impl<T: Real> GammaSum<T> {
    pub fn new(eigs: &Eigenspectrum<T>) -> Self {
        let clusters: Vec<(T, usize)> = eigs
            .clusters()
            .into_iter()
            .map(|(start, len)| {
                let v = &eigs.values()[start..start + len];
                (v.iter().fold(T::zero(), |a, &b| a + b) / from_usize(len), len)
            })
            .collect();
        let mut terms = Vec::new();
        for (k, &(lk, mk)) in clusters.iter().enumerate() {
            // Expand Π_{j≠k} (a_j + b_j u)^{-m_j} in powers of u = 1 + sλ_k.
            let mut series = vec![T::zero(); mk];
            series[0] = T::one();
            for (j, &(lj, mj)) in clusters.iter().enumerate() {
                if j == k {
                    continue;
                }
                let a = T::one() - lj / lk;
                let b = lj / lk;
                let ratio = -b / a;
                let mut factor = vec![T::zero(); mk];
                let mut coef = a.powi(-(mj as i32));
                for (p, f) in factor.iter_mut().enumerate() {
                    *f = coef;
                    coef = coef * ratio * from_usize(mj + p) / from_usize(p + 1);
                }
                let mut out = vec![T::zero(); mk];
                for p in 0..mk {
                    for q in 0..=p {
                        out[p] = out[p] + series[q] * factor[p - q];
                    }
                }
                series = out;
            }
            for (p, &c) in series.iter().enumerate() {
                if c != T::zero() {
                    terms.push((mk - p, lk, c));
                }
            }
        }
        Self {
            eigenvalues: eigs.values().to_vec(),
            terms,
        }
    }

    pub fn terms(&self) -> &[(usize, T, T)] {
        &self.terms
    }

    pub fn pdf(&self, x: T) -> T {
        if x < T::zero() {
            return T::zero();
        }
        if x <= self.eigenvalues[self.eigenvalues.len() - 1] {
            return small_argument_law(&self.eigenvalues, x).0;
        }
        self.terms.iter().fold(T::zero(), |acc, &(r, l, c)| {
            let y = x / l;
            acc + c * y.powi(r as i32 - 1) * (-y).exp() * inv_factorial::<T>(r - 1) / l
        })
    }

    pub fn cdf(&self, x: T) -> T {
        if x <= T::zero() {
            return T::zero();
        }
        if x <= self.eigenvalues[self.eigenvalues.len() - 1] {
            return small_argument_law(&self.eigenvalues, x).1;
        }
        self.terms
            .iter()
            .fold(T::zero(), |acc, &(r, l, c)| acc + c * gamma_int_cdf(r, x / l))
            .max(T::zero())
            .min(T::one())
    }

    pub fn mean(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |a, &b| a + b)
    }
}

/// Regularized lower incomplete gamma P(k, y) for integer shape `k`.
///
/// Uses the tail series e^{-y} Σ_{j≥k} y^j/j! for y below the mode, which keeps
/// full relative accuracy when the probability is tiny.
pub fn gamma_int_cdf<T: Real>(k: usize, y: T) -> T {
    if y <= T::zero() {
        return T::zero();
    }
    if y < from_usize(k) {
        let mut term = y.powi(k as i32) * inv_factorial::<T>(k);
        let mut sum = term;
        let mut j = k;
        loop {
            j += 1;
            term = term * y / from_usize(j);
            sum = sum + term;
            if term < sum * T::epsilon() || j > k + 10_000 {
                break;
            }
        }
        (sum * (-y).exp()).min(T::one())
    } else {
        let mut term = T::one();
        let mut sum = T::one();
        for j in 1..k {
            term = term * y / from_usize(j);
            sum = sum + term;
        }
        (T::one() - sum * (-y).exp()).max(T::zero())
    }
}

/// Eigenvalues of the two-antenna correlation matrix [[1, ρ], [ρ*, 1]]: 1 ± |ρ|.
pub fn two_antenna_eigenvalues<T: Real>(rho_abs: T) -> Result<Eigenspectrum<T>> {
    if !(rho_abs >= T::zero() && rho_abs < T::one()) {
        return Err(Error::Validation(format!("|rho| must lie in [0, 1), got {rho_abs}")));
    }
    Eigenspectrum::new(vec![T::one() + rho_abs, T::one() - rho_abs])
}

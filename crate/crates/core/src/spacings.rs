//! Order-statistics preprocessing: log-spacings, regression covariates and
//! the (optionally randomised) weight scheme.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::open_unit;

/// Strictly positive observations in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Sorts `values`; every entry must be finite and > 0.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::domain(format!(
                "observations must be finite and > 0, found {bad}"
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `X_{n-j,n}` for `j = 0..n`, i.e. the j-th largest counting from zero.
    #[inline]
    pub fn top(&self, j: usize) -> f64 {
        self.values[self.values.len() - 1 - j]
    }

    /// Every observation multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::domain(format!("scale must be > 0, got {c}")));
        }
        Ok(Self {
            values: self.values.iter().map(|v| v * c).collect(),
        })
    }

    /// Checks `2 <= k <= n - 1`.
    pub fn check_k(&self, k: usize) -> Result<()> {
        let n = self.len();
        if k < 2 || k + 1 > n {
            return Err(Error::domain(format!(
                "k must satisfy 2 <= k <= n-1 (n = {n}), got {k}"
            )));
        }
        Ok(())
    }
}

/// `T_j = j (log X_{n-j+1,n} - log X_{n-j,n})` for `j = 1..=k`.
pub fn log_spacings(sample: &SortedSample, k: usize) -> Result<Vec<f64>> {
    sample.check_k(k)?;
    Ok(all_log_spacings(sample, k))
}

/// Spacings up to `k_max` without the lower bound on k; `k_max <= n - 1`.
pub(crate) fn all_log_spacings(sample: &SortedSample, k_max: usize) -> Vec<f64> {
    // Below a ratio of 2 the difference hi - lo is exact, so ln_1p keeps
    // small gaps accurate; both forms are exactly invariant under
    // power-of-two rescaling of the data.
    (1..=k_max)
        .map(|j| {
            let (hi, lo) = (sample.top(j - 1), sample.top(j));
            let gap = if hi <= 2.0 * lo {
                ((hi - lo) / lo).ln_1p()
            } else {
                (hi / lo).ln()
            };
            j as f64 * gap
        })
        .collect()
}

/// `C_j = (j/(k+1))^(-rho)` for `j = 1..=k`.
pub fn covariates(k: usize, rho: f64) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::domain("k must be >= 1"));
    }
    if !(rho < 0.0) {
        return Err(Error::domain(format!("rho must be < 0, got {rho}")));
    }
    let denom = (k + 1) as f64;
    Ok((1..=k).map(|j| (j as f64 / denom).powf(-rho)).collect())
}

/// `(alpha + 1) / (2 alpha + 1)`, the mean of the randomised weights times 2.
pub fn kappa(alpha_k: f64) -> Result<f64> {
    if !(alpha_k >= 0.0) {
        return Err(Error::domain(format!("alpha(k) must be >= 0, got {alpha_k}")));
    }
    if alpha_k.is_infinite() {
        return Ok(0.5);
    }
    Ok((alpha_k + 1.0) / (2.0 * alpha_k + 1.0))
}

/// `(alpha + 1)(6 alpha^2 + 4 alpha + 1) / (2 alpha + 1)^2`.
pub fn phi(alpha_k: f64) -> Result<f64> {
    if !(alpha_k >= 0.0) || alpha_k.is_infinite() {
        return Err(Error::domain(format!(
            "alpha(k) must be finite and >= 0, got {alpha_k}"
        )));
    }
    let a = alpha_k;
    Ok((a + 1.0) * (6.0 * a * a + 4.0 * a + 1.0) / ((2.0 * a + 1.0) * (2.0 * a + 1.0)))
}

/// How the weight exponent grows with k.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AlphaSchedule {
    /// `alpha(k) = ln(1 + k)`; `alpha(k)/k -> 0`.
    #[default]
    Log1p,
    /// `alpha(k) = delta * k` with `0 < delta <= 1`.
    Linear {
        delta: f64,
    },
    Constant {
        alpha: f64,
    },
}

impl AlphaSchedule {
    pub fn alpha(&self, k: usize) -> f64 {
        match *self {
            AlphaSchedule::Log1p => (k as f64).ln_1p(),
            AlphaSchedule::Linear { delta } => delta * k as f64,
            AlphaSchedule::Constant { alpha } => alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AlphaSchedule::Log1p => Ok(()),
            AlphaSchedule::Linear { delta } if delta > 0.0 && delta <= 1.0 => Ok(()),
            AlphaSchedule::Constant { alpha } if alpha >= 0.0 && alpha.is_finite() => Ok(()),
            other => Err(Error::domain(format!("invalid alpha schedule {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// `W_j = 1 - theta_j^alpha j/(k+1)`.
    Raw,
    /// `W_j / sum_i W_i`.
    Normalised,
}

/// Weight function over `j = 1..=k` for the given `theta` vector.
pub fn weights(k: usize, alpha_k: f64, theta: &[f64], mode: WeightMode) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::domain("k must be >= 1"));
    }
    if theta.len() != k {
        return Err(Error::domain(format!("theta has length {}, expected {k}", theta.len())));
    }
    if !(alpha_k >= 0.0) {
        return Err(Error::domain(format!("alpha(k) must be >= 0, got {alpha_k}")));
    }
    if let Some(bad) = theta.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
        return Err(Error::domain(format!("theta values must lie in (0,1], found {bad}")));
    }
    let denom = (k + 1) as f64;
    let mut w: Vec<f64> = theta
        .iter()
        .enumerate()
        .map(|(i, th)| 1.0 - th.powf(alpha_k) * (i + 1) as f64 / denom)
        .collect();
    if mode == WeightMode::Normalised {
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
    }
    Ok(w)
}

/// Uniform normalised weights `1/k`.
pub fn uniform_weights(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

/// `k` i.i.d. Uniform(0,1) draws for the randomised weight function.
pub fn draw_theta<R: RngCore + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    (0..k).map(|_| open_unit(rng)).collect()
}

/// Everything the regression estimators need at one tail fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingSet {
    pub k: usize,
    pub t: Vec<f64>,
    pub c: Vec<f64>,
    pub w_tilde: Vec<f64>,
    pub alpha_k: f64,
    pub theta: Vec<f64>,
}

impl SpacingSet {
    pub fn new(sample: &SortedSample, k: usize, rho: f64, alpha_k: f64, theta: Vec<f64>) -> Result<Self> {
        let t = log_spacings(sample, k)?;
        let c = covariates(k, rho)?;
        let w_tilde = weights(k, alpha_k, &theta, WeightMode::Normalised)?;
        Ok(Self {
            k,
            t,
            c,
            w_tilde,
            alpha_k,
            theta,
        })
    }
}

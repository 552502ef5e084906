//! The estimator roster: Hill, bias-corrected Hill and four members of the
//! penalised weighted least-squares family fitted to the exponential
//! regression model `T_j = gamma + b C_j + eps_j`.
//!
//! | tag  | weights                 | penalty       |
//! |------|-------------------------|---------------|
//! | LS   | uniform                 | none          |
//! | RR   | uniform                 | data driven   |
//! | WLS  | `1 - theta^alpha j/(k+1)` | none        |
//! | RWLS | `1 - theta^alpha j/(k+1)` | data driven |

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream_rng};
use crate::second_order::SecondOrderParams;
use crate::spacings::{
    all_log_spacings, covariates, draw_theta, kappa, uniform_weights, weights, AlphaSchedule, SortedSample, WeightMode,
};
use crate::stats::pairwise_sum;

/// Denominators below this are treated as zero.
pub const SINGULAR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EstimatorTag {
    #[serde(rename = "HILL")]
    Hill,
    #[serde(rename = "BCHILL")]
    BcHill,
    #[serde(rename = "LS")]
    Ls,
    #[serde(rename = "RR")]
    Rr,
    #[serde(rename = "WLS")]
    Wls,
    #[serde(rename = "RWLS")]
    Rwls,
}

impl EstimatorTag {
    pub const ALL: [EstimatorTag; 6] = [
        EstimatorTag::Hill,
        EstimatorTag::BcHill,
        EstimatorTag::Ls,
        EstimatorTag::Rr,
        EstimatorTag::Wls,
        EstimatorTag::Rwls,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorTag::Hill => "HILL",
            EstimatorTag::BcHill => "BCHILL",
            EstimatorTag::Ls => "LS",
            EstimatorTag::Rr => "RR",
            EstimatorTag::Wls => "WLS",
            EstimatorTag::Rwls => "RWLS",
        }
    }

    /// Default estimator configuration carrying this tag.
    pub fn kind(&self) -> EstimatorKind {
        match self {
            EstimatorTag::Hill => EstimatorKind::Hill,
            EstimatorTag::BcHill => EstimatorKind::BcHill,
            EstimatorTag::Ls => EstimatorKind::ls(),
            EstimatorTag::Rr => EstimatorKind::rr(),
            EstimatorTag::Wls => EstimatorKind::wls(),
            EstimatorTag::Rwls => EstimatorKind::rwls(),
        }
    }
}

impl fmt::Display for EstimatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EstimatorTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::domain(format!("unknown estimator '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PenaltyMode {
    None,
    /// Fixed loss penalty `lambda >= 0`.
    Fixed {
        lambda: f64,
    },
    /// Plug-in MSE-optimal penalty averaged over random theta.
    DataDriven,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WeightScheme {
    Uniform,
    /// Randomised linear weights; the fit uses the point value `theta`
    /// for every `theta_j`.
    Tapered {
        schedule: AlphaSchedule,
        theta: f64,
    },
}

impl WeightScheme {
    pub fn tapered() -> Self {
        WeightScheme::Tapered {
            schedule: AlphaSchedule::Log1p,
            theta: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionOptions {
    pub weights: WeightScheme,
    pub penalty: PenaltyMode,
    /// Theta vectors averaged over by the data-driven penalty.
    pub theta_draws: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EstimatorKind {
    Hill,
    BcHill,
    Regression(RegressionOptions),
}

pub const DEFAULT_THETA_DRAWS: usize = 100;

impl EstimatorKind {
    fn regression(weights: WeightScheme, penalty: PenaltyMode) -> Self {
        EstimatorKind::Regression(RegressionOptions {
            weights,
            penalty,
            theta_draws: DEFAULT_THETA_DRAWS,
        })
    }

    pub fn ls() -> Self {
        Self::regression(WeightScheme::Uniform, PenaltyMode::None)
    }

    pub fn rr() -> Self {
        Self::regression(WeightScheme::Uniform, PenaltyMode::DataDriven)
    }

    pub fn wls() -> Self {
        Self::regression(WeightScheme::tapered(), PenaltyMode::None)
    }

    pub fn rwls() -> Self {
        Self::regression(WeightScheme::tapered(), PenaltyMode::DataDriven)
    }

    /// Same weights, different penalty.
    pub fn with_penalty(self, penalty: PenaltyMode) -> Self {
        match self {
            EstimatorKind::Regression(o) => EstimatorKind::Regression(RegressionOptions { penalty, ..o }),
            other => other,
        }
    }

    pub fn tag(&self) -> EstimatorTag {
        match self {
            EstimatorKind::Hill => EstimatorTag::Hill,
            EstimatorKind::BcHill => EstimatorTag::BcHill,
            EstimatorKind::Regression(o) => match (o.weights, o.penalty) {
                (WeightScheme::Uniform, PenaltyMode::None) => EstimatorTag::Ls,
                (WeightScheme::Uniform, _) => EstimatorTag::Rr,
                (WeightScheme::Tapered { .. }, PenaltyMode::None) => EstimatorTag::Wls,
                (WeightScheme::Tapered { .. }, _) => EstimatorTag::Rwls,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorResult {
    pub gamma_hat: f64,
    /// Fitted slope for the regression kinds; the implied bias
    /// `gamma_H beta (n/k)^rho` for BCHILL; 0 for HILL.
    pub b_hat: f64,
    /// Loss penalty `lambda`; the fit adds `2 kappa lambda` (tapered weights)
    /// or `lambda` (uniform weights) to the denominator.
    pub lambda_used: f64,
    pub k: usize,
    pub kind: EstimatorKind,
}

/// `(1/k) sum_j log(X_{n-j+1,n} / X_{n-k,n})`.
pub fn hill(sample: &SortedSample, k: usize) -> Result<f64> {
    let n = sample.len();
    if k < 1 || k + 1 > n {
        return Err(Error::domain(format!(
            "k must satisfy 1 <= k <= n-1 (n = {n}), got {k}"
        )));
    }
    let threshold = sample.top(k);
    let logs: Vec<f64> = (0..k).map(|j| (sample.top(j) / threshold).ln()).collect();
    Ok(pairwise_sum(&logs) / k as f64)
}

/// Hill as the mean of the first `k` log-spacings.
pub fn hill_from_spacings(t: &[f64]) -> f64 {
    pairwise_sum(t) / t.len() as f64
}

/// Hill multiplied by `1 - beta (n/k)^rho / (1 - rho)`.
pub fn bias_corrected_hill(hill: f64, beta_hat: f64, rho_hat: f64, n: usize, k: usize) -> f64 {
    hill * (1.0 - beta_hat * (n as f64 / k as f64).powf(rho_hat) / (1.0 - rho_hat))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SStats {
    /// Weighted mean of the covariates.
    pub s1: f64,
    /// Weighted variance of the covariates.
    pub s2: f64,
    /// `sum w^2 (S1 - C)`.
    pub s_dot: f64,
    /// `sum w^2 (S1 - C)^2`.
    pub s_ddot: f64,
}

pub fn s_stats(w_tilde: &[f64], c: &[f64]) -> Result<SStats> {
    if w_tilde.len() != c.len() || c.is_empty() {
        return Err(Error::domain(format!(
            "weights ({}) and covariates ({}) must have equal non-zero length",
            w_tilde.len(),
            c.len()
        )));
    }
    let s1: f64 = w_tilde.iter().zip(c).map(|(w, c)| w * c).sum();
    // centred form keeps S2 >= 0 up to rounding
    let s2: f64 = w_tilde.iter().zip(c).map(|(w, c)| w * (c - s1) * (c - s1)).sum();
    let (mut s_dot, mut s_ddot) = (0.0, 0.0);
    for (w, c) in w_tilde.iter().zip(c) {
        let d = s1 - c;
        s_dot += w * w * d;
        s_ddot += w * w * d * d;
    }
    Ok(SStats {
        s1,
        s2: s2.max(0.0),
        s_dot,
        s_ddot,
    })
}

/// Minimiser of `sum w (T - gamma - b C)^2 + lambda_eff b^2` for normalised
/// weights; returns `(gamma_hat, b_hat)`.
pub fn fit_penalized_wls(t: &[f64], c: &[f64], w_tilde: &[f64], lambda_eff: f64) -> Result<(f64, f64)> {
    if t.len() != c.len() || t.len() != w_tilde.len() || t.len() < 2 {
        return Err(Error::domain("t, c and weights must have equal length >= 2"));
    }
    if !(lambda_eff >= 0.0) {
        return Err(Error::domain(format!("lambda_eff must be >= 0, got {lambda_eff}")));
    }
    let s1: f64 = w_tilde.iter().zip(c).map(|(w, c)| w * c).sum();
    let s2: f64 = w_tilde.iter().zip(c).map(|(w, c)| w * (c - s1) * (c - s1)).sum();
    let denom = lambda_eff + s2;
    if denom < SINGULAR_EPS {
        return Err(Error::SingularFit(denom));
    }
    let mut cov = 0.0;
    let mut mean_t = 0.0;
    for ((t, c), w) in t.iter().zip(c).zip(w_tilde) {
        cov += w * (c - s1) * t;
        mean_t += w * t;
    }
    let b_hat = cov / denom;
    Ok((mean_t - b_hat * s1, b_hat))
}

/// Plug-in penalty for one theta vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaTheta {
    /// Unclamped root of the first-order condition.
    pub raw: f64,
    /// `max(raw, 0)`.
    pub clamped: f64,
    /// Whether `S1 S2 beta (n/k)^(2 rho) > S_dot` holds.
    pub included: bool,
}

pub fn lambda_hat_theta(
    s: &SStats,
    beta_hat: f64,
    rho_hat: f64,
    n: usize,
    k: usize,
    alpha_k: f64,
) -> Result<LambdaTheta> {
    lambda_hat_theta_kappa(s, beta_hat, rho_hat, n, k, kappa(alpha_k)?)
}

pub(crate) fn lambda_hat_theta_kappa(
    s: &SStats,
    beta_hat: f64,
    rho_hat: f64,
    n: usize,
    k: usize,
    kappa: f64,
) -> Result<LambdaTheta> {
    if k == 0 || k > n {
        return Err(Error::domain(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    if !(rho_hat < 0.0) {
        return Err(Error::domain(format!("rho_hat must be < 0, got {rho_hat}")));
    }
    let scale = (n as f64 / k as f64).powf(2.0 * rho_hat);
    let signal = s.s1 * s.s2 * scale;
    let denom = 2.0 * kappa * (signal * beta_hat * beta_hat - s.s_dot);
    if denom.abs() < SINGULAR_EPS {
        return Err(Error::SingularEstimate(format!("penalty denominator {denom:e}")));
    }
    let raw = (s.s1 * s.s_ddot + s.s_dot * s.s2) / denom;
    Ok(LambdaTheta {
        raw,
        clamped: raw.max(0.0),
        included: signal * beta_hat > s.s_dot,
    })
}

/// Penalty averaged over random theta vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEstimate {
    pub value: f64,
    pub draws: usize,
    pub included: usize,
}

impl LambdaEstimate {
    pub fn all_excluded(&self) -> bool {
        self.included == 0
    }
}

/// Inputs shared by every theta draw of the data-driven penalty.
#[derive(Debug, Clone, Copy)]
pub struct PenaltyInputs<'a> {
    pub c: &'a [f64],
    pub n: usize,
    pub alpha_k: f64,
    pub beta_hat: f64,
    pub rho_hat: f64,
}

/// `E_theta[ lambda+(theta) 1{included} ]` over `theta_draws` seeded draws.
/// Draw `i` uses stream `i` of `seed`. Singular draws count as excluded.
pub fn lambda_hat(inputs: &PenaltyInputs<'_>, theta_draws: usize, seed: u64) -> Result<LambdaEstimate> {
    lambda_hat_with(inputs, theta_draws, |i, k| {
        draw_theta(k, &mut stream_rng(seed, i as u64))
    })
}

/// As [`lambda_hat`] with caller-supplied theta vectors.
pub fn lambda_hat_with<F>(inputs: &PenaltyInputs<'_>, theta_draws: usize, theta_for: F) -> Result<LambdaEstimate>
where
    F: Fn(usize, usize) -> Vec<f64> + Sync,
{
    if theta_draws == 0 {
        return Err(Error::domain("theta_draws must be >= 1"));
    }
    let k = inputs.c.len();
    let kap = kappa(inputs.alpha_k)?;
    let per_draw: Vec<Option<f64>> = (0..theta_draws)
        .into_par_iter()
        .map(|i| -> Result<Option<f64>> {
            let theta = theta_for(i, k);
            let w = weights(k, inputs.alpha_k, &theta, WeightMode::Normalised)?;
            let s = s_stats(&w, inputs.c)?;
            match lambda_hat_theta_kappa(&s, inputs.beta_hat, inputs.rho_hat, inputs.n, k, kap) {
                Ok(l) if l.included => Ok(Some(l.clamped)),
                Ok(_) | Err(Error::SingularEstimate(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let kept: Vec<f64> = per_draw.iter().flatten().copied().collect();
    Ok(LambdaEstimate {
        value: pairwise_sum(&kept) / theta_draws as f64,
        draws: theta_draws,
        included: kept.len(),
    })
}

/// Data-driven penalty for uniform weights. `S_dot` vanishes identically,
/// so no theta average is needed; kappa is the uniform-weight value 1/2.
pub(crate) fn ridge_lambda(c: &[f64], n: usize, beta_hat: f64, rho_hat: f64) -> Result<f64> {
    let s = s_stats(&uniform_weights(c.len()), c)?;
    match lambda_hat_theta_kappa(&s, beta_hat, rho_hat, n, c.len(), 0.5) {
        Ok(l) if l.included => Ok(l.clamped),
        Ok(_) | Err(Error::SingularEstimate(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

fn require_so(so: Option<&SecondOrderParams>, tag: EstimatorTag) -> Result<&SecondOrderParams> {
    so.ok_or_else(|| Error::domain(format!("{tag} needs second-order parameters")))
}

fn hill_family(
    sample: &SortedSample,
    k: usize,
    kind: &EstimatorKind,
    so: Option<&SecondOrderParams>,
) -> Result<EstimatorResult> {
    let h = hill(sample, k)?;
    let (gamma_hat, b_hat) = match kind {
        EstimatorKind::BcHill => {
            let so = require_so(so, EstimatorTag::BcHill)?;
            let g = bias_corrected_hill(h, so.beta_hat, so.rho_hat, sample.len(), k);
            (g, h - g)
        }
        _ => (h, 0.0),
    };
    Ok(EstimatorResult {
        gamma_hat,
        b_hat,
        lambda_used: 0.0,
        k,
        kind: *kind,
    })
}

/// Regression estimate from precomputed log-spacings `t_all` (at least `k`
/// entries) of a sample of size `n`.
pub(crate) fn regression_from_spacings(
    t_all: &[f64],
    n: usize,
    k: usize,
    opts: &RegressionOptions,
    so: &SecondOrderParams,
    seed: u64,
) -> Result<EstimatorResult> {
    let t = &t_all[..k];
    let c = covariates(k, so.rho_hat)?;
    let (w, alpha_k, two_kappa) = match opts.weights {
        WeightScheme::Uniform => (uniform_weights(k), f64::INFINITY, 1.0),
        WeightScheme::Tapered { schedule, theta } => {
            let a = schedule.alpha(k);
            (
                weights(k, a, &vec![theta; k], WeightMode::Normalised)?,
                a,
                2.0 * kappa(a)?,
            )
        }
    };
    let lambda = match opts.penalty {
        PenaltyMode::None => 0.0,
        PenaltyMode::Fixed { lambda } => {
            if !(lambda >= 0.0) {
                return Err(Error::domain(format!("penalty must be >= 0, got {lambda}")));
            }
            lambda
        }
        PenaltyMode::DataDriven => match opts.weights {
            WeightScheme::Uniform => ridge_lambda(&c, n, so.beta_hat, so.rho_hat)?,
            WeightScheme::Tapered { .. } => {
                let inputs = PenaltyInputs {
                    c: &c,
                    n,
                    alpha_k,
                    beta_hat: so.beta_hat,
                    rho_hat: so.rho_hat,
                };
                lambda_hat(&inputs, opts.theta_draws, derive_seed(seed, k as u64))?.value
            }
        },
    };
    let (gamma_hat, b_hat) = fit_penalized_wls(t, &c, &w, two_kappa * lambda)?;
    Ok(EstimatorResult {
        gamma_hat,
        b_hat,
        lambda_used: lambda,
        k,
        kind: EstimatorKind::Regression(*opts),
    })
}

/// One estimator at one tail fraction. `so` is required for every kind but
/// HILL; `seed` drives the theta draws of the data-driven penalty.
pub fn estimate(
    sample: &SortedSample,
    k: usize,
    kind: &EstimatorKind,
    so: Option<&SecondOrderParams>,
    seed: u64,
) -> Result<EstimatorResult> {
    sample.check_k(k)?;
    match kind {
        EstimatorKind::Regression(opts) => {
            let so = require_so(so, kind.tag())?;
            regression_from_spacings(&all_log_spacings(sample, k), sample.len(), k, opts, so, seed)
        }
        _ => hill_family(sample, k, kind, so),
    }
}

/// Estimates over `k_lo..=k_hi` with fixed second-order parameters.
pub type TailPath = Vec<EstimatorResult>;

pub fn tail_path(
    sample: &SortedSample,
    kind: &EstimatorKind,
    k_lo: usize,
    k_hi: usize,
    so: Option<&SecondOrderParams>,
    seed: u64,
) -> Result<TailPath> {
    sample.check_k(k_lo)?;
    sample.check_k(k_hi)?;
    if k_lo > k_hi {
        return Err(Error::domain(format!("empty k range [{k_lo}, {k_hi}]")));
    }
    if !matches!(kind, EstimatorKind::Hill) {
        require_so(so, kind.tag())?;
    }
    let t_all = all_log_spacings(sample, k_hi);
    (k_lo..=k_hi)
        .into_par_iter()
        .map(|k| match (kind, so) {
            (EstimatorKind::Regression(opts), Some(so)) => {
                regression_from_spacings(&t_all, sample.len(), k, opts, so, seed)
            }
            _ => hill_family(sample, k, kind, so),
        })
        .collect()
}

//! Second-order parameters `(rho, beta)` of the tail quantile function.
//!
//! `rho` is chosen from a grid as the value that makes the ridge-regression
//! tail path flattest (minimum variance over a k-range). `beta` is the ratio
//! estimator built from weighted means of the log-spacings:
//!
//! ```text
//! d(a) = (1/k) sum (j/k)^(-a)
//! D(a) = (1/k) sum (j/k)^(-a) T_j
//! beta = (k/n)^rho [d(rho) D(0) - D(rho)] / [d(rho) D(rho) - D(2 rho)]
//! ```

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{ridge_lambda, SINGULAR_EPS};
use crate::spacings::{all_log_spacings, covariates, SortedSample};
use crate::stats::variance;

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderParams {
    pub rho_hat: f64,
    pub beta_hat: f64,
    /// k-range of the rho search.
    pub k_range: (usize, usize),
    /// Tail fraction at which beta was computed.
    pub k_beta: usize,
    pub rho_method: String,
    pub beta_method: String,
    /// Set when the beta ratio was singular and replaced by 0.
    pub beta_fallback: bool,
}

impl SecondOrderParams {
    /// Externally supplied (e.g. true) parameters.
    pub fn fixed(rho_hat: f64, beta_hat: f64) -> Self {
        Self {
            rho_hat,
            beta_hat,
            k_range: (0, 0),
            k_beta: 0,
            rho_method: "fixed".into(),
            beta_method: "fixed".into(),
            beta_fallback: false,
        }
    }
}

/// `{-0.05, -0.10, ..., -4.00}`.
pub fn default_rho_grid() -> Vec<f64> {
    (1..=80).map(|i| -(i as f64) / 20.0).collect()
}

/// `(ceil(sqrt n), floor(0.9 n))`.
pub fn default_k_range(n: usize) -> (usize, usize) {
    ((n as f64).sqrt().ceil() as usize, default_k_beta(n))
}

pub fn default_k_beta(n: usize) -> usize {
    (0.9 * n as f64).floor() as usize
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SecondOrderConfig {
    /// Defaults to [`default_rho_grid`].
    pub grid: Option<Vec<f64>>,
    /// Defaults to [`default_k_range`].
    pub k_range: Option<(usize, usize)>,
    /// Defaults to [`default_k_beta`].
    pub k_beta: Option<usize>,
}

fn d_weight(j: usize, k: usize, a: f64) -> f64 {
    (j as f64 / k as f64).powf(-a)
}

/// Beta ratio from the first `k` entries of `t_all` for a sample of size `n`.
pub fn beta_from_spacings(t_all: &[f64], n: usize, k: usize, rho_hat: f64) -> Result<f64> {
    if !(rho_hat < 0.0) {
        return Err(Error::domain(format!("rho_hat must be < 0, got {rho_hat}")));
    }
    let kf = k as f64;
    let (mut d_rho, mut big_d0, mut big_d_rho, mut big_d_2rho) = (0.0, 0.0, 0.0, 0.0);
    for (i, t) in t_all[..k].iter().enumerate() {
        let w = d_weight(i + 1, k, rho_hat);
        d_rho += w;
        big_d0 += t;
        big_d_rho += w * t;
        big_d_2rho += w * w * t;
    }
    let (d_rho, big_d0, big_d_rho, big_d_2rho) = (d_rho / kf, big_d0 / kf, big_d_rho / kf, big_d_2rho / kf);
    let denom = d_rho * big_d_rho - big_d_2rho;
    if denom.abs() < SINGULAR_EPS {
        return Err(Error::SingularEstimate(format!("beta denominator {denom:e}")));
    }
    Ok((kf / n as f64).powf(rho_hat) * (d_rho * big_d0 - big_d_rho) / denom)
}

pub fn estimate_beta(sample: &SortedSample, k: usize, rho_hat: f64) -> Result<f64> {
    sample.check_k(k)?;
    beta_from_spacings(&all_log_spacings(sample, k), sample.len(), k, rho_hat)
}

fn beta_or_zero(t_all: &[f64], n: usize, k: usize, rho: f64) -> Result<(f64, bool)> {
    match beta_from_spacings(t_all, n, k, rho) {
        Ok(b) => Ok((b, false)),
        Err(Error::SingularEstimate(_)) => Ok((0.0, true)),
        Err(e) => Err(e),
    }
}

/// Ridge-regression tail path `gamma_RR(k; rho)` for `k_lo..=k_hi` in O(1)
/// per k. With `C_j = j^(-rho) (k+1)^rho`, every weighted moment is a
/// prefix sum over j rescaled by a power of `k + 1`.
pub(crate) fn ridge_path(
    t_all: &[f64],
    n: usize,
    rho: f64,
    beta_hat: f64,
    k_lo: usize,
    k_hi: usize,
) -> Result<Vec<f64>> {
    let (mut p1, mut p2, mut pt, mut pct) = (0.0, 0.0, 0.0, 0.0);
    let mut path = Vec::with_capacity(k_hi + 1 - k_lo);
    for k in 1..=k_hi {
        let pj = (k as f64).powf(-rho);
        let t = t_all[k - 1];
        p1 += pj;
        p2 += pj * pj;
        pt += t;
        pct += pj * t;
        if k < k_lo {
            continue;
        }
        let kf = k as f64;
        let scale = ((k + 1) as f64).powf(rho);
        let s1 = scale * p1 / kf;
        let s2 = (scale * scale * p2 / kf - s1 * s1).max(0.0);
        let mean_t = pt / kf;
        let cov = scale * pct / kf - s1 * mean_t;
        // uniform weights: S_dot = 0 and S_ddot = S2/k, so the plug-in
        // penalty reduces to 1 / (k beta^2 (n/k)^(2 rho)) when included
        let lambda = if beta_hat > 0.0 && s1 * s2 > 0.0 {
            let denom = kf * beta_hat * beta_hat * (n as f64 / kf).powf(2.0 * rho);
            if denom * s1 * s2 < SINGULAR_EPS {
                0.0
            } else {
                1.0 / denom
            }
        } else {
            0.0
        };
        let d = lambda + s2;
        if d < SINGULAR_EPS {
            return Err(Error::SingularFit(d));
        }
        path.push(mean_t - cov / d * s1);
    }
    Ok(path)
}

/// Variance of the ridge path for every grid value.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoSearch {
    pub rho_hat: f64,
    pub grid: Vec<f64>,
    pub path_variance: Vec<f64>,
}

fn check_search_inputs(sample: &SortedSample, grid: &[f64], k_range: (usize, usize), k_beta: usize) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("rho grid is empty"));
    }
    if let Some(bad) = grid.iter().find(|r| !(**r < 0.0) || !r.is_finite()) {
        return Err(Error::domain(format!(
            "rho grid values must be finite and < 0, found {bad}"
        )));
    }
    let (lo, hi) = k_range;
    if lo >= hi {
        return Err(Error::domain(format!("k range ({lo}, {hi}) must have k_lo < k_hi")));
    }
    sample.check_k(lo)?;
    sample.check_k(hi)?;
    sample.check_k(k_beta)
}

/// Grid search for rho. Ties (within `1e-12` of the path's squared mean) go
/// to the value closest to -1, then to the larger value.
pub fn search_rho(sample: &SortedSample, grid: &[f64], k_range: (usize, usize), k_beta: usize) -> Result<RhoSearch> {
    check_search_inputs(sample, grid, k_range, k_beta)?;
    let n = sample.len();
    let t_all = all_log_spacings(sample, k_range.1.max(k_beta));
    let scored: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&rho| -> Result<(f64, f64)> {
            let (beta, _) = beta_or_zero(&t_all, n, k_beta, rho)?;
            let path = ridge_path(&t_all, n, rho, beta, k_range.0, k_range.1)?;
            let m = crate::stats::mean(&path);
            Ok((variance(&path), m * m))
        })
        .collect::<Result<_>>()?;
    let min_var = scored.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let mut best: Option<f64> = None;
    for (&rho, &(var, mean_sq)) in grid.iter().zip(&scored) {
        if var - min_var > 1e-12 * mean_sq {
            continue;
        }
        best = match best {
            None => Some(rho),
            Some(b) => {
                let (db, dr) = ((b + 1.0).abs(), (rho + 1.0).abs());
                if dr < db || (dr == db && rho > b) {
                    Some(rho)
                } else {
                    Some(b)
                }
            }
        };
    }
    Ok(RhoSearch {
        rho_hat: best.expect("non-empty grid"),
        grid: grid.to_vec(),
        path_variance: scored.into_iter().map(|s| s.0).collect(),
    })
}

/// Minimum-variance rho with `k_beta = floor(0.9 n)`.
pub fn estimate_rho(sample: &SortedSample, grid: &[f64], k_range: (usize, usize)) -> Result<f64> {
    Ok(search_rho(sample, grid, k_range, default_k_beta(sample.len()))?.rho_hat)
}

/// Both parameters, with beta falling back to 0 when singular.
pub fn estimate_second_order(sample: &SortedSample, config: &SecondOrderConfig) -> Result<SecondOrderParams> {
    let n = sample.len();
    let default_grid;
    let grid = match &config.grid {
        Some(g) => g.as_slice(),
        None => {
            default_grid = default_rho_grid();
            &default_grid
        }
    };
    let k_range = config.k_range.unwrap_or_else(|| default_k_range(n));
    let k_beta = config.k_beta.unwrap_or_else(|| default_k_beta(n));
    let search = search_rho(sample, grid, k_range, k_beta)?;
    let t_all = all_log_spacings(sample, k_beta);
    let (beta_hat, beta_fallback) = beta_or_zero(&t_all, n, k_beta, search.rho_hat)?;
    Ok(SecondOrderParams {
        rho_hat: search.rho_hat,
        beta_hat,
        k_range,
        k_beta,
        rho_method: "min-variance ridge path".into(),
        beta_method: "spacing ratio".into(),
        beta_fallback,
    })
}

/// Ridge tail path through the generic estimator; slow reference route.
#[doc(hidden)]
pub fn ridge_path_reference(sample: &SortedSample, rho: f64, beta: f64, k_lo: usize, k_hi: usize) -> Result<Vec<f64>> {
    let t_all = all_log_spacings(sample, k_hi);
    let n = sample.len();
    (k_lo..=k_hi)
        .map(|k| {
            let c = covariates(k, rho)?;
            let lambda = ridge_lambda(&c, n, beta, rho)?;
            let w = crate::spacings::uniform_weights(k);
            Ok(crate::estimators::fit_penalized_wls(&t_all[..k], &c, &w, lambda)?.0)
        })
        .collect()
}

//! Pareto-type families with known tail index.
//!
//! | family        | survival 1 - F(x)      | gamma     | rho     | beta |
//! |---------------|------------------------|-----------|---------|------|
//! | Burr XII      | (1 + x^tau)^(-xi)      | 1/(tau xi)| -1/xi   | 1    |
//! | Fréchet       | 1 - exp(-x^(-alpha))   | 1/alpha   | -1      | 1/2  |
//! | strict Pareto | x^(-1/gamma), x >= 1   | gamma     | -inf    | 0    |
//!
//! `rho` and `beta` describe the tail quantile function
//! `U(t) = t^gamma * l(t)` with `log l(t) ~ (gamma beta / rho) t^rho`.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{open_unit, stream_rng};
use crate::spacings::SortedSample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParetoTypeDist {
    BurrXii { xi: f64, tau: f64 },
    Frechet { alpha: f64 },
    StrictPareto { gamma: f64 },
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl ParetoTypeDist {
    pub fn burr_xii(xi: f64, tau: f64) -> Result<Self> {
        check_positive("xi", xi)?;
        check_positive("tau", tau)?;
        Ok(Self::BurrXii { xi, tau })
    }

    pub fn frechet(alpha: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        Ok(Self::Frechet { alpha })
    }

    pub fn strict_pareto(gamma: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        Ok(Self::StrictPareto { gamma })
    }

    /// Re-checks the parameters, e.g. after deserialisation.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::BurrXii { xi, tau } => {
                check_positive("xi", xi)?;
                check_positive("tau", tau)
            }
            Self::Frechet { alpha } => check_positive("alpha", alpha),
            Self::StrictPareto { gamma } => check_positive("gamma", gamma),
        }
    }

    pub fn true_gamma(&self) -> f64 {
        match *self {
            Self::BurrXii { xi, tau } => 1.0 / (tau * xi),
            Self::Frechet { alpha } => 1.0 / alpha,
            Self::StrictPareto { gamma } => gamma,
        }
    }

    /// Second-order parameter of the tail quantile function;
    /// `-inf` for the strict Pareto, whose slowly varying part is constant.
    pub fn true_rho(&self) -> f64 {
        match *self {
            Self::BurrXii { xi, .. } => -1.0 / xi,
            Self::Frechet { .. } => -1.0,
            Self::StrictPareto { .. } => f64::NEG_INFINITY,
        }
    }

    /// Scale of the second-order term, `b(t) = gamma * beta * t^rho`.
    pub fn true_beta(&self) -> f64 {
        match *self {
            Self::BurrXii { .. } => 1.0,
            Self::Frechet { .. } => 0.5,
            Self::StrictPareto { .. } => 0.0,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Self::BurrXii { xi, tau } => format!("burr_xi{xi:.4}_tau{tau:.4}"),
            Self::Frechet { alpha } => format!("frechet_alpha{alpha:.4}"),
            Self::StrictPareto { gamma } => format!("pareto_gamma{gamma:.4}"),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::BurrXii { xi, tau } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-xi * x.powf(tau).ln_1p()).exp_m1()
                }
            }
            Self::Frechet { alpha } => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-x.powf(-alpha)).exp()
                }
            }
            Self::StrictPareto { gamma } => {
                if x <= 1.0 {
                    0.0
                } else {
                    -(-x.ln() / gamma).exp_m1()
                }
            }
        }
    }

    /// Inverse of [`cdf`](Self::cdf) on (0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("probability must lie in (0,1), got {p}")));
        }
        Ok(match *self {
            Self::BurrXii { xi, tau } => (-(-p).ln_1p() / xi).exp_m1().powf(1.0 / tau),
            Self::Frechet { alpha } => (-p.ln()).powf(-1.0 / alpha),
            Self::StrictPareto { gamma } => (-gamma * (-p).ln_1p()).exp(),
        })
    }

    /// Quantile at survival probability `s = 1 - p`, accurate for tiny `s`.
    fn survival_quantile(&self, s: f64) -> f64 {
        match *self {
            Self::BurrXii { xi, tau } => (-s.ln() / xi).exp_m1().powf(1.0 / tau),
            Self::Frechet { alpha } => (-(-s).ln_1p()).powf(-1.0 / alpha),
            Self::StrictPareto { gamma } => (-gamma * s.ln()).exp(),
        }
    }

    /// `n` draws from `rng`, sorted ascending.
    pub fn sample_with<R: RngCore + ?Sized>(&self, n: usize, rng: &mut R) -> Result<SortedSample> {
        if n == 0 {
            return Err(Error::domain("sample size must be >= 1"));
        }
        let draws = (0..n).map(|_| self.survival_quantile(open_unit(rng))).collect();
        SortedSample::new(draws)
    }

    /// `n` inverse-transform draws from stream 0 of `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SortedSample> {
        self.sample_with(n, &mut stream_rng(seed, 0))
    }
}

use std::path::PathBuf;

use paretail::claims::{read_claims, ColumnSelector, Delimiter};
use paretail::estimators::{lambda_hat, PenaltyInputs};
use paretail::rng::{derive_seed, stream_rng};
use paretail::second_order::{default_k_range, default_rho_grid, estimate_beta, estimate_rho};
use paretail::simstudy::{run_study, KGrid, SecondOrderMode, StudyConfig};
use paretail::spacings::{covariates, log_spacings, AlphaSchedule};
use paretail::{estimate_second_order, tail_path, EstimatorKind, EstimatorTag, ParetoTypeDist, SecondOrderConfig};
use rayon::prelude::*;

fn burr_half() -> ParetoTypeDist {
    ParetoTypeDist::burr_xii(2f64.sqrt(), 2f64.sqrt()).unwrap()
}

#[test]
fn strict_pareto_spacings_average_gamma() {
    let gamma = 0.7;
    let dist = ParetoTypeDist::strict_pareto(gamma).unwrap();
    let (n, k, reps) = (400, 100, 400u64);
    let means: Vec<f64> = (0..reps)
        .map(|r| {
            log_spacings(&dist.sample(n, r).unwrap(), k)
                .unwrap()
                .iter()
                .sum::<f64>()
                / k as f64
        })
        .collect();
    let m = means.iter().sum::<f64>() / reps as f64;
    // each replicate mean has sd gamma / sqrt(k)
    let se = gamma / ((k as u64 * reps) as f64).sqrt();
    assert!((m - gamma).abs() <= 4.0 * se, "mean {m} vs {gamma} (se {se})");
}

#[test]
fn hill_unbiased_across_k_on_exact_model() {
    let cfg = StudyConfig {
        distributions: vec![ParetoTypeDist::strict_pareto(1.0).unwrap()],
        sample_sizes: vec![500],
        replications: 1000,
        estimators: vec![EstimatorTag::Hill],
        k_grid: KGrid::All,
        master_seed: 21,
        second_order: SecondOrderMode::Estimated,
        theta_draws: 1,
    };
    let report = run_study(&cfg).unwrap();
    let cells: Vec<_> = report.groups[0]
        .cells
        .iter()
        .filter(|c| (10..=450).contains(&c.k))
        .collect();
    let within = cells.iter().filter(|c| c.bias.abs() <= 3.0 * c.se_bias).count();
    assert!(within as f64 >= 0.95 * cells.len() as f64, "{within}/{}", cells.len());
}

#[test]
fn hill_path_mean_near_gamma() {
    let dist = ParetoTypeDist::strict_pareto(1.0).unwrap();
    let means: Vec<f64> = (0..100u64)
        .map(|r| {
            let s = dist.sample(500, r).unwrap();
            let p = tail_path(&s, &EstimatorKind::Hill, 10, 450, None, 0).unwrap();
            p.iter().map(|e| e.gamma_hat).sum::<f64>() / p.len() as f64
        })
        .collect();
    let m = means.iter().sum::<f64>() / means.len() as f64;
    assert!((m - 1.0).abs() <= 0.05, "{m}");
}

/// Share of 200 replications with the min-variance rho within 0.25 of the
/// true -1/sqrt(2) for Burr XII(sqrt2, sqrt2) at n = 5000.
#[test]
fn burr_rho_hat_near_truth() {
    let dist = burr_half();
    let truth = dist.true_rho();
    let n = 5000;
    let grid = default_rho_grid();
    let rhos: Vec<f64> = (0..200u64)
        .into_par_iter()
        .map(|r| {
            let s = dist.sample_with(n, &mut stream_rng(derive_seed(31, 0), r)).unwrap();
            estimate_rho(&s, &grid, default_k_range(n)).unwrap()
        })
        .collect();
    let near = rhos.iter().filter(|r| (**r - truth).abs() <= 0.25).count();
    let mut sorted = rhos.clone();
    sorted.sort_by(f64::total_cmp);
    assert!(
        near >= 160,
        "{near}/200 within 0.25 of {truth:.3}; median rho_hat {}",
        sorted[100]
    );
}

#[test]
fn beta_hat_sign_stable_on_burr() {
    let dist = burr_half();
    let (n, k) = (2000, 200);
    let betas: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|r| {
            let s = dist.sample_with(n, &mut stream_rng(derive_seed(32, 0), r)).unwrap();
            let so = estimate_second_order(&s, &SecondOrderConfig::default()).unwrap();
            estimate_beta(&s, k, so.rho_hat).unwrap()
        })
        .collect();
    assert!(betas.iter().all(|b| b.is_finite()));
    let pos = betas.iter().filter(|b| **b > 0.0).count();
    assert!(pos == 0 || pos == betas.len(), "{pos}/100 positive: {betas:?}");
}

#[test]
fn penalty_stable_under_more_theta_draws() {
    let s = burr_half().sample(2000, 33).unwrap();
    let k = 200;
    let so = estimate_second_order(&s, &SecondOrderConfig::default()).unwrap();
    let c = covariates(k, so.rho_hat).unwrap();
    let inputs = PenaltyInputs {
        c: &c,
        n: 2000,
        alpha_k: AlphaSchedule::Log1p.alpha(k),
        beta_hat: so.beta_hat,
        rho_hat: so.rho_hat,
    };
    // Standard error of the 100-draw mean from 20 independent reruns.
    let small: Vec<f64> = (0..20u64)
        .map(|i| lambda_hat(&inputs, 100, 500 + i).unwrap().value)
        .collect();
    let m = small.iter().sum::<f64>() / 20.0;
    let sd = (small.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 19.0).sqrt();
    let base = small[0];
    let big = lambda_hat(&inputs, 1000, 77).unwrap().value;
    let se = (sd * sd + sd * sd / 10.0).sqrt();
    assert!(
        (base - big).abs() <= 2.0 * se,
        "100 draws {base}, 1000 draws {big}, se {se}"
    );
}

fn data_file(var: &str, default: &str) -> Option<PathBuf> {
    if let Ok(p) = std::env::var(var) {
        return Some(PathBuf::from(p));
    }
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(default);
    p.exists().then_some(p)
}

fn column(var: &str) -> ColumnSelector {
    std::env::var(var).unwrap_or_else(|_| "0".into()).parse().unwrap()
}

#[test]
#[ignore = "needs the GH claims file (PARETAIL_GH_CLAIMS or data/gh_claims.csv)"]
fn gh_claims_paths_for_every_estimator() {
    let path = data_file("PARETAIL_GH_CLAIMS", "gh_claims.csv").expect("GH claims file");
    let data = read_claims(&path, &column("PARETAIL_GH_COLUMN"), Delimiter::Byte(b',')).unwrap();
    assert_eq!(data.values.len(), 452);
    let s = data.sorted().unwrap();
    let so = estimate_second_order(&s, &SecondOrderConfig::default()).unwrap();
    for tag in EstimatorTag::ALL {
        let p = tail_path(&s, &tag.kind(), 2, 451, Some(&so), 1).unwrap();
        assert_eq!(p.len(), 450);
        assert!(p.iter().all(|e| e.gamma_hat.is_finite()), "{tag}");
    }
}

#[test]
#[ignore = "needs the SOA 1991 claims file (PARETAIL_SOA_CLAIMS or data/soa_claims.csv)"]
fn soa_claims_count() {
    let path = data_file("PARETAIL_SOA_CLAIMS", "soa_claims.csv").expect("SOA claims file");
    let data = read_claims(&path, &column("PARETAIL_SOA_COLUMN"), Delimiter::Byte(b',')).unwrap();
    assert_eq!(data.values.len(), 75_789);
}

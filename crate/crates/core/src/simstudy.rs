//! Monte Carlo bias/MSE study of the estimator roster.
//!
//! Replication `r` of group `(distribution d, sample size n)` draws its
//! sample from stream `r` of `derive_seed(master_seed, group)` and seeds the
//! penalty's theta draws with `derive_seed(that seed, r)`. Replications run in
//! parallel and are reduced in index order, so reports are identical for any
//! thread count.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::ParetoTypeDist;
use crate::error::{Error, Result};
use crate::estimators::{hill, regression_from_spacings, EstimatorKind, EstimatorTag, DEFAULT_THETA_DRAWS};
use crate::rng::{derive_seed, stream_rng};
use crate::second_order::{estimate_second_order, SecondOrderConfig, SecondOrderParams};
use crate::spacings::{all_log_spacings, SortedSample};
use crate::stats::CompensatedSum;

/// Which tail fractions each cell is evaluated at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KGrid {
    /// Stride `max(1, n/100)`: every k for n=50, 5 for n=500, 20 for n=2000.
    Auto,
    All,
    Stride {
        step: usize,
    },
    Explicit {
        ks: Vec<usize>,
    },
}

impl KGrid {
    /// Values in `[2, n-1]`: k = 2 and every multiple of the stride.
    pub fn ks(&self, n: usize) -> Vec<usize> {
        let stride = match self {
            KGrid::Auto => (n / 100).max(1),
            KGrid::All => 1,
            KGrid::Stride { step } => (*step).max(1),
            KGrid::Explicit { ks } => {
                let mut v: Vec<usize> = ks.iter().copied().filter(|k| *k >= 2 && *k < n).collect();
                v.sort_unstable();
                v.dedup();
                return v;
            }
        };
        (2..n).filter(|k| *k == 2 || k % stride == 0).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondOrderMode {
    /// Estimate (rho, beta) from every replication.
    Estimated,
    /// Use the distribution's analytic (rho, beta).
    Oracle,
}

fn default_theta_draws() -> usize {
    DEFAULT_THETA_DRAWS
}

fn default_second_order() -> SecondOrderMode {
    SecondOrderMode::Estimated
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub distributions: Vec<ParetoTypeDist>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub estimators: Vec<EstimatorTag>,
    pub k_grid: KGrid,
    pub master_seed: u64,
    #[serde(default = "default_second_order")]
    pub second_order: SecondOrderMode,
    #[serde(default = "default_theta_draws")]
    pub theta_draws: usize,
}

impl StudyConfig {
    /// Frechet alpha in {10, 2, 1} and Burr XII (xi, tau) in
    /// {(sqrt10, sqrt10), (sqrt2, sqrt2), (2, 1/2)}; n in {50, 500, 2000};
    /// 1000 replications of all six estimators.
    pub fn full_design(master_seed: u64) -> Self {
        let s10 = 10f64.sqrt();
        let s2 = 2f64.sqrt();
        Self {
            distributions: vec![
                ParetoTypeDist::BurrXii { xi: s10, tau: s10 },
                ParetoTypeDist::BurrXii { xi: s2, tau: s2 },
                ParetoTypeDist::BurrXii { xi: 2.0, tau: 0.5 },
                ParetoTypeDist::Frechet { alpha: 10.0 },
                ParetoTypeDist::Frechet { alpha: 2.0 },
                ParetoTypeDist::Frechet { alpha: 1.0 },
            ],
            sample_sizes: vec![50, 500, 2000],
            replications: 1000,
            estimators: EstimatorTag::ALL.to_vec(),
            k_grid: KGrid::Auto,
            master_seed,
            second_order: SecondOrderMode::Estimated,
            theta_draws: DEFAULT_THETA_DRAWS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::domain("replications must be >= 1"));
        }
        if self.theta_draws == 0 {
            return Err(Error::domain("theta_draws must be >= 1"));
        }
        if let Some(n) = self.sample_sizes.iter().find(|n| **n < 4) {
            return Err(Error::domain(format!("sample sizes must be >= 4, got {n}")));
        }
        for d in &self.distributions {
            d.validate()?;
            if self.second_order == SecondOrderMode::Oracle && !d.true_rho().is_finite() {
                return Err(Error::domain(format!(
                    "{d:?} has no finite second-order parameter for oracle mode"
                )));
            }
        }
        Ok(())
    }

    /// Group index of `(dist_idx, n_idx)`.
    fn group(&self, dist_idx: usize, n_idx: usize) -> u64 {
        (dist_idx * self.sample_sizes.len() + n_idx) as u64
    }

    pub fn replication_seed(&self, dist_idx: usize, n_idx: usize) -> u64 {
        derive_seed(self.master_seed, self.group(dist_idx, n_idx))
    }

    /// The sample used by replication `rep` of a group.
    pub fn replication_sample(&self, dist_idx: usize, n_idx: usize, rep: usize) -> Result<SortedSample> {
        let dist = &self.distributions[dist_idx];
        let mut rng = stream_rng(self.replication_seed(dist_idx, n_idx), rep as u64);
        dist.sample_with(self.sample_sizes[n_idx], &mut rng)
    }

    /// Seed handed to the estimators in replication `rep`.
    pub fn estimator_seed(&self, dist_idx: usize, n_idx: usize, rep: usize) -> u64 {
        derive_seed(self.replication_seed(dist_idx, n_idx), rep as u64)
    }

    pub fn estimator_kind(&self, tag: EstimatorTag) -> EstimatorKind {
        match tag.kind() {
            EstimatorKind::Regression(mut o) => {
                o.theta_draws = self.theta_draws;
                EstimatorKind::Regression(o)
            }
            other => other,
        }
    }
}

/// Aggregates for one (estimator, k) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub k: usize,
    pub kind: EstimatorTag,
    pub bias: f64,
    pub mse: f64,
    /// Population variance of the estimates.
    pub variance: f64,
    pub se_bias: f64,
    pub se_mse: f64,
    pub replications: usize,
    pub fail_count: usize,
}

impl CellStats {
    /// More than 5% of replications failed.
    pub fn flagged(&self) -> bool {
        let total = self.replications + self.fail_count;
        total > 0 && self.fail_count as f64 > 0.05 * total as f64
    }

    fn from_errors(k: usize, kind: EstimatorTag, errors: &[f64], fail_count: usize) -> Self {
        let r = errors.len();
        if r == 0 {
            return Self {
                k,
                kind,
                bias: f64::NAN,
                mse: f64::NAN,
                variance: f64::NAN,
                se_bias: f64::NAN,
                se_mse: f64::NAN,
                replications: 0,
                fail_count,
            };
        }
        let rf = r as f64;
        let sum = |f: &dyn Fn(f64) -> f64| {
            let mut acc = CompensatedSum::default();
            errors.iter().for_each(|e| acc.add(f(*e)));
            acc.value()
        };
        let bias = sum(&|e| e) / rf;
        let mse = sum(&|e| e * e) / rf;
        let variance = sum(&|e| (e - bias) * (e - bias)) / rf;
        let var_sq = sum(&|e| (e * e - mse) * (e * e - mse)) / rf;
        let (se_bias, se_mse) = if r > 1 {
            let corr = rf / (rf - 1.0);
            ((variance * corr / rf).sqrt(), (var_sq * corr / rf).sqrt())
        } else {
            (f64::NAN, f64::NAN)
        };
        Self {
            k,
            kind,
            bias,
            mse,
            variance,
            se_bias,
            se_mse,
            replications: r,
            fail_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupReport {
    pub dist: ParetoTypeDist,
    pub true_gamma: f64,
    pub n: usize,
    /// Ordered by estimator (config order), then k.
    pub cells: Vec<CellStats>,
    /// Replications whose second-order estimation failed.
    pub second_order_failures: usize,
}

impl GroupReport {
    pub fn cell(&self, kind: EstimatorTag, k: usize) -> Option<&CellStats> {
        self.cells.iter().find(|c| c.kind == kind && c.k == k)
    }

    pub fn series(&self, kind: EstimatorTag) -> Vec<&CellStats> {
        self.cells.iter().filter(|c| c.kind == kind).collect()
    }

    pub fn file_stem(&self) -> String {
        format!("{}_n{}", self.dist.label(), self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub groups: Vec<GroupReport>,
}

/// Estimator errors `gamma_hat - gamma` for one replication, one entry per
/// (estimator, k) cell in report order; `None` marks a failed fit.
fn replication_errors(
    config: &StudyConfig,
    sample: &SortedSample,
    ks: &[usize],
    true_gamma: f64,
    dist: &ParetoTypeDist,
    seed: u64,
) -> (Vec<Option<f64>>, bool) {
    let n = sample.len();
    let needs_so = config.estimators.iter().any(|t| *t != EstimatorTag::Hill);
    let so: Option<Result<SecondOrderParams>> = needs_so.then(|| match config.second_order {
        SecondOrderMode::Estimated => estimate_second_order(sample, &SecondOrderConfig::default()),
        SecondOrderMode::Oracle => Ok(SecondOrderParams::fixed(dist.true_rho(), dist.true_beta())),
    });
    let so_failed = matches!(so, Some(Err(_)));
    let so = so.and_then(|r| r.ok());
    let k_max = ks.last().copied().unwrap_or(2);
    let t_all = all_log_spacings(sample, k_max);
    let mut out = Vec::with_capacity(config.estimators.len() * ks.len());
    for tag in &config.estimators {
        let kind = config.estimator_kind(*tag);
        for &k in ks {
            let g = match (&kind, so.as_ref()) {
                (EstimatorKind::Hill, _) => hill(sample, k).ok(),
                (EstimatorKind::BcHill, Some(so)) => hill(sample, k)
                    .ok()
                    .map(|h| crate::estimators::bias_corrected_hill(h, so.beta_hat, so.rho_hat, n, k)),
                (EstimatorKind::Regression(o), Some(so)) => regression_from_spacings(&t_all, n, k, o, so, seed)
                    .ok()
                    .map(|r| r.gamma_hat),
                _ => None,
            };
            out.push(g.filter(|g| g.is_finite()).map(|g| g - true_gamma));
        }
    }
    (out, so_failed)
}

pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    config.validate()?;
    let mut groups = Vec::new();
    for (di, dist) in config.distributions.iter().enumerate() {
        let gamma = dist.true_gamma();
        for (ni, &n) in config.sample_sizes.iter().enumerate() {
            let ks = config.k_grid.ks(n);
            let reps: Vec<(Vec<Option<f64>>, bool)> = (0..config.replications)
                .into_par_iter()
                .map(|r| -> Result<_> {
                    let sample = config.replication_sample(di, ni, r)?;
                    Ok(replication_errors(
                        config,
                        &sample,
                        &ks,
                        gamma,
                        dist,
                        config.estimator_seed(di, ni, r),
                    ))
                })
                .collect::<Result<_>>()?;
            let mut cells = Vec::with_capacity(config.estimators.len() * ks.len());
            let mut idx = 0;
            for tag in &config.estimators {
                for &k in &ks {
                    let errors: Vec<f64> = reps.iter().filter_map(|(e, _)| e[idx]).collect();
                    let fails = reps.len() - errors.len();
                    cells.push(CellStats::from_errors(k, *tag, &errors, fails));
                    idx += 1;
                }
            }
            groups.push(GroupReport {
                dist: *dist,
                true_gamma: gamma,
                n,
                cells,
                second_order_failures: reps.iter().filter(|(_, f)| *f).count(),
            });
        }
    }
    Ok(StudyReport { groups })
}

pub const REPORT_HEADER: &str = "k,kind,bias,mse,se_bias,se_mse,fail_count";

pub fn write_group_csv<W: Write>(mut out: W, group: &GroupReport) -> std::io::Result<()> {
    writeln!(out, "{REPORT_HEADER}")?;
    for c in &group.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.k, c.kind, c.bias, c.mse, c.se_bias, c.se_mse, c.fail_count
        )?;
    }
    Ok(())
}

/// One row of an exported report CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub k: usize,
    pub kind: EstimatorTag,
    pub bias: f64,
    pub mse: f64,
    pub se_bias: f64,
    pub se_mse: f64,
    pub fail_count: usize,
}

impl From<&CellStats> for ReportRow {
    fn from(c: &CellStats) -> Self {
        Self {
            k: c.k,
            kind: c.kind,
            bias: c.bias,
            mse: c.mse,
            se_bias: c.se_bias,
            se_mse: c.se_mse,
            fail_count: c.fail_count,
        }
    }
}

pub fn read_group_csv(path: impl AsRef<Path>) -> Result<Vec<ReportRow>> {
    let path = path.as_ref();
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if headers != REPORT_HEADER {
        return Err(Error::Data {
            path: path.to_path_buf(),
            message: format!("unexpected header '{headers}'"),
        });
    }
    let bad = |message: String| Error::Data {
        path: path.to_path_buf(),
        message,
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let f = |i: usize| -> Result<f64> { rec[i].parse::<f64>().map_err(|e| bad(format!("field {i}: {e}"))) };
        rows.push(ReportRow {
            k: rec[0].parse().map_err(|e| bad(format!("k: {e}")))?,
            kind: rec[1].parse()?,
            bias: f(2)?,
            mse: f(3)?,
            se_bias: f(4)?,
            se_mse: f(5)?,
            fail_count: rec[6].parse().map_err(|e| bad(format!("fail_count: {e}")))?,
        });
    }
    Ok(rows)
}

/// Writes one CSV per (distribution, n) into `dir`, plus one SVG figure per
/// distribution when `svg` is set. Returns the written paths.
pub fn export_report(report: &StudyReport, dir: impl AsRef<Path>, svg: bool) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for g in &report.groups {
        let path = dir.join(format!("{}.csv", g.file_stem()));
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = BufWriter::new(file);
        write_group_csv(&mut w, g)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    if svg {
        let mut dists: Vec<ParetoTypeDist> = Vec::new();
        for g in &report.groups {
            if !dists.contains(&g.dist) {
                dists.push(g.dist);
            }
        }
        for d in dists {
            let path = dir.join(format!("{}.svg", d.label()));
            fs::write(&path, figure_svg(report, &d)).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Bias (top row) and MSE (bottom row) against k, one column per sample size.
pub fn figure_svg(report: &StudyReport, dist: &ParetoTypeDist) -> String {
    let groups: Vec<&GroupReport> = report.groups.iter().filter(|g| g.dist == *dist).collect();
    let (pw, ph, margin) = (300.0, 200.0, 40.0);
    let width = margin + groups.len().max(1) as f64 * (pw + margin);
    let height = margin + 2.0 * (ph + margin) + 20.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"#
    );
    for (col, g) in groups.iter().enumerate() {
        let mut tags: Vec<EstimatorTag> = Vec::new();
        for c in &g.cells {
            if !tags.contains(&c.kind) {
                tags.push(c.kind);
            }
        }
        for (row, metric) in ["bias", "MSE"].iter().enumerate() {
            let x0 = margin + col as f64 * (pw + margin);
            let y0 = margin + row as f64 * (ph + margin);
            let value = |c: &CellStats| if row == 0 { c.bias } else { c.mse };
            let finite: Vec<&CellStats> = g.cells.iter().filter(|c| value(c).is_finite()).collect();
            let (kmin, kmax) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, c| {
                (a.0.min(c.k as f64), a.1.max(c.k as f64))
            });
            let (vmin, vmax) = finite.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, c| {
                (a.0.min(value(c)), a.1.max(value(c)))
            });
            let sx = |k: f64| {
                x0 + if kmax > kmin {
                    (k - kmin) / (kmax - kmin) * pw
                } else {
                    0.0
                }
            };
            let sy = |v: f64| {
                y0 + ph
                    - if vmax > vmin {
                        (v - vmin) / (vmax - vmin) * ph
                    } else {
                        ph / 2.0
                    }
            };
            let _ = writeln!(
                s,
                r##"<rect x="{x0}" y="{y0}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle">{metric}, n = {}</text>"#,
                x0 + pw / 2.0,
                y0 - 6.0,
                g.n
            );
            if vmin.is_finite() && vmin < 0.0 && vmax > 0.0 && row == 0 {
                let y = sy(0.0);
                let _ = writeln!(
                    s,
                    r##"<line x1="{x0}" y1="{y}" x2="{}" y2="{y}" stroke="#aaa" stroke-dasharray="3,3"/>"##,
                    x0 + pw
                );
            }
            for (i, tag) in tags.iter().enumerate() {
                let pts: Vec<String> = g
                    .cells
                    .iter()
                    .filter(|c| c.kind == *tag && value(c).is_finite())
                    .map(|c| format!("{:.2},{:.2}", sx(c.k as f64), sy(value(c))))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"/>"#,
                    PALETTE[i % PALETTE.len()],
                    pts.join(" ")
                );
            }
        }
        if col == 0 {
            for (i, tag) in tags.iter().enumerate() {
                let x = margin + i as f64 * 60.0;
                let y = height - 10.0;
                let _ = writeln!(
                    s,
                    r#"<text x="{x}" y="{y}" fill="{}">{tag}</text>"#,
                    PALETTE[i % PALETTE.len()]
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::estimate;

    fn small_config(reps: usize) -> StudyConfig {
        StudyConfig {
            distributions: vec![
                ParetoTypeDist::frechet(2.0).unwrap(),
                ParetoTypeDist::strict_pareto(0.5).unwrap(),
            ],
            sample_sizes: vec![60],
            replications: reps,
            estimators: EstimatorTag::ALL.to_vec(),
            k_grid: KGrid::Stride { step: 10 },
            master_seed: 99,
            second_order: SecondOrderMode::Estimated,
            theta_draws: 10,
        }
    }

    #[test]
    fn k_grids() {
        assert_eq!(KGrid::Auto.ks(50), (2..50).collect::<Vec<_>>());
        let g = KGrid::Auto.ks(500);
        assert_eq!(g[..3], [2, 5, 10]);
        assert!(g.contains(&450) && !g.contains(&500));
        assert!(KGrid::Auto.ks(2000).contains(&1800));
        assert_eq!(
            KGrid::Explicit {
                ks: vec![9, 1, 3, 3, 200]
            }
            .ks(100),
            vec![3, 9]
        );
    }

    #[test]
    fn single_replication_equals_direct_estimate() {
        let cfg = small_config(1);
        let report = run_study(&cfg).unwrap();
        for (di, dist) in cfg.distributions.iter().enumerate() {
            let sample = cfg.replication_sample(di, 0, 0).unwrap();
            let so = estimate_second_order(&sample, &SecondOrderConfig::default()).unwrap();
            let seed = cfg.estimator_seed(di, 0, 0);
            for c in &report.groups[di].cells {
                let direct = estimate(&sample, c.k, &cfg.estimator_kind(c.kind), Some(&so), seed).unwrap();
                let err = direct.gamma_hat - dist.true_gamma();
                assert_eq!(c.bias, err, "{:?} k={}", c.kind, c.k);
                assert_eq!(c.mse, err * err);
                assert_eq!(c.replications, 1);
            }
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cfg = small_config(12);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_study(&cfg)).unwrap();
        let b = four.install(|| run_study(&cfg)).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn mse_decomposes() {
        let report = run_study(&small_config(40)).unwrap();
        for g in &report.groups {
            for c in &g.cells {
                assert!((c.mse - (c.variance + c.bias * c.bias)).abs() <= 1e-10);
                assert!(c.mse >= c.bias * c.bias - 1e-12);
                assert!(!c.flagged());
            }
        }
    }

    #[test]
    fn validation() {
        let mut cfg = small_config(0);
        assert!(run_study(&cfg).is_err());
        cfg.replications = 2;
        cfg.second_order = SecondOrderMode::Oracle;
        assert!(run_study(&cfg).is_err());
        cfg.distributions.pop();
        assert!(run_study(&cfg).is_ok());
    }

    #[test]
    fn export_round_trip_and_svg() {
        let report = run_study(&small_config(5)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = export_report(&report, dir.path(), true).unwrap();
        assert_eq!(files.iter().filter(|p| p.extension().unwrap() == "csv").count(), 2);
        for g in &report.groups {
            let rows = read_group_csv(dir.path().join(format!("{}.csv", g.file_stem()))).unwrap();
            let expected: Vec<ReportRow> = g.cells.iter().map(ReportRow::from).collect();
            assert_eq!(rows.len(), expected.len());
            for (a, b) in rows.iter().zip(&expected) {
                assert_eq!(a.k, b.k);
                assert_eq!(a.kind, b.kind);
                assert_eq!(a.bias.to_bits(), b.bias.to_bits());
                assert_eq!(a.mse.to_bits(), b.mse.to_bits());
                assert_eq!(a.se_bias.to_bits(), b.se_bias.to_bits());
                assert_eq!(a.se_mse.to_bits(), b.se_mse.to_bits());
                assert_eq!(a.fail_count, b.fail_count);
            }
        }
        let svg = fs::read_to_string(dir.path().join(format!("{}.svg", report.groups[0].dist.label()))).unwrap();
        assert_eq!(svg.matches("<rect").count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 12);
    }

    #[test]
    fn empty_group_exports_header_only() {
        let report = StudyReport {
            groups: vec![GroupReport {
                dist: ParetoTypeDist::frechet(1.0).unwrap(),
                true_gamma: 1.0,
                n: 10,
                cells: vec![],
                second_order_failures: 0,
            }],
        };
        let dir = tempfile::tempdir().unwrap();
        let files = export_report(&report, dir.path(), false).unwrap();
        assert_eq!(fs::read_to_string(&files[0]).unwrap(), format!("{REPORT_HEADER}\n"));
        assert!(read_group_csv(&files[0]).unwrap().is_empty());
    }

    #[test]
    fn full_design_grid() {
        let cfg = StudyConfig::full_design(1);
        cfg.validate().unwrap();
        let gammas: Vec<f64> = cfg.distributions.iter().map(|d| d.true_gamma()).collect();
        for (g, e) in gammas.iter().zip([0.1, 0.5, 1.0, 0.1, 0.5, 1.0]) {
            assert!((g - e).abs() < 1e-12);
        }
        let toml_text = toml::to_string(&cfg).unwrap();
        let back: StudyConfig = toml::from_str(&toml_text).unwrap();
        assert_eq!(back, cfg);
    }
}

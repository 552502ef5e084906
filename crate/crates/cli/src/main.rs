use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paretail::claims::{
    qq_data, read_claims, write_qq_csv, write_tail_paths_csv, ClaimsDataset, ColumnSelector, Delimiter, QqKind,
};
use paretail::simstudy::{export_report, run_study, StudyConfig};
use paretail::{estimate_second_order, tail_path, EstimatorTag, SecondOrderConfig, SortedSample};

#[derive(Parser)]
#[command(name = "paretail", version, about = "Tail-index estimation for Pareto-type data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tail-index estimates over a range of tail fractions k.
    Estimate(EstimateArgs),
    /// Monte Carlo bias/MSE study from a TOML or JSON config.
    Simulate(SimulateArgs),
    /// Exponential or Pareto Q-Q plot coordinates.
    Qq(QqArgs),
    /// Second-order parameters (rho, beta) of a sample.
    SecondOrder(SecondOrderArgs),
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// Column name or 0-based index.
    #[arg(long, default_value = "0")]
    column: ColumnSelector,
    /// Single character, or "ws" for runs of whitespace.
    #[arg(long, default_value = ",")]
    delimiter: Delimiter,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Hill,
    Bchill,
    Ls,
    Rr,
    Wls,
    Rwls,
    All,
}

impl EstimatorArg {
    fn tags(self) -> Vec<EstimatorTag> {
        match self {
            EstimatorArg::Hill => vec![EstimatorTag::Hill],
            EstimatorArg::Bchill => vec![EstimatorTag::BcHill],
            EstimatorArg::Ls => vec![EstimatorTag::Ls],
            EstimatorArg::Rr => vec![EstimatorTag::Rr],
            EstimatorArg::Wls => vec![EstimatorTag::Wls],
            EstimatorArg::Rwls => vec![EstimatorTag::Rwls],
            EstimatorArg::All => EstimatorTag::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "all")]
    estimator: EstimatorArg,
    #[arg(long, conflicts_with = "k_range")]
    k: Option<usize>,
    /// "lo:hi" (inclusive) or "auto".
    #[arg(long)]
    k_range: Option<String>,
    /// Restrict the auto k-range to the top fraction of the data.
    #[arg(long)]
    top_fraction: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write bias/MSE line charts.
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct QqArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "pareto")]
    kind: QqKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SecondOrderArgs {
    #[command(flatten)]
    input: InputArgs,
    /// k range of the rho search, "lo:hi" or "auto".
    #[arg(long)]
    k_range: Option<String>,
    /// k at which beta is estimated.
    #[arg(long)]
    k_beta: Option<usize>,
}

enum Failure {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<paretail::Error> for Failure {
    fn from(e: paretail::Error) -> Self {
        use paretail::Error as E;
        match e {
            E::Domain(_) => Failure::Usage(e.to_string()),
            E::SingularEstimate(_) | E::SingularFit(_) => Failure::Numeric(e.to_string()),
            E::Io { .. } | E::Data { .. } | E::Csv(_) => Failure::Data(e.to_string()),
        }
    }
}

fn io_failure(path: Option<&Path>, e: io::Error) -> Failure {
    match path {
        Some(p) => Failure::Data(format!("{}: {e}", p.display())),
        None => Failure::Data(format!("stdout: {e}")),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn load(input: &InputArgs) -> CliResult<(ClaimsDataset, SortedSample)> {
    let data = read_claims(&input.input, &input.column, input.delimiter)?;
    if data.dropped > 0 {
        eprintln!(
            "{}: dropped {} of {} rows (non-numeric or non-positive)",
            data.name, data.dropped, data.raw_rows
        );
    }
    let sample = data.sorted()?;
    Ok((data, sample))
}

fn parse_range(spec: &str) -> CliResult<(usize, usize)> {
    let bad = || Failure::Usage(format!("invalid k range '{spec}', expected lo:hi or auto"));
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn auto_range(n: usize, top_fraction: Option<f64>) -> (usize, usize) {
    match top_fraction {
        Some(f) => (2, (n - 1).min((f * n as f64).floor() as usize)),
        None => (2, n - 1),
    }
}

/// Writes to `out` or stdout.
fn emit(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult<()> {
    match out {
        Some(p) => {
            let f = fs::File::create(p).map_err(|e| io_failure(Some(p), e))?;
            let mut w = BufWriter::new(f);
            write(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_failure(Some(p), e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write(&mut w).and_then(|_| w.flush()).map_err(|e| io_failure(None, e))
        }
    }
}

fn run_estimate(args: &EstimateArgs) -> CliResult<()> {
    if let Some(f) = args.top_fraction {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Failure::Usage(format!("--top-fraction must lie in (0, 1], got {f}")));
        }
    }
    let (_, sample) = load(&args.input)?;
    let n = sample.len();
    if n < 3 {
        return Err(Failure::Data(format!("need at least 3 usable values, got {n}")));
    }
    let (lo, hi) = match (args.k, args.k_range.as_deref()) {
        (Some(k), _) => (k, k),
        (None, Some(r)) if r != "auto" => parse_range(r)?,
        _ => auto_range(n, args.top_fraction),
    };
    let tags = args.estimator.tags();
    let so = if tags.iter().any(|t| *t != EstimatorTag::Hill) {
        Some(estimate_second_order(&sample, &SecondOrderConfig::default())?)
    } else {
        None
    };
    let mut paths = Vec::with_capacity(tags.len());
    for tag in tags {
        let path = tail_path(&sample, &tag.kind(), lo, hi, so.as_ref(), args.seed)?;
        paths.push((tag, path));
    }
    emit(args.out.as_deref(), |w| write_tail_paths_csv(w, &paths))
}

fn read_config(path: &Path) -> CliResult<StudyConfig> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(Some(path), e))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed = if is_json {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        toml::from_str(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn run_simulate(args: &SimulateArgs) -> CliResult<()> {
    let mut config = read_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    let report = run_study(&config)?;
    for g in &report.groups {
        for c in g.cells.iter().filter(|c| c.flagged()) {
            eprintln!(
                "warning: {} n={} {} k={}: {} of {} replications failed",
                g.dist.label(),
                g.n,
                c.kind,
                c.k,
                c.fail_count,
                c.fail_count + c.replications
            );
        }
    }
    let written = export_report(&report, &args.out_dir, args.svg)?;
    emit(None, |w| {
        written.iter().try_for_each(|p| writeln!(w, "{}", p.display()))
    })
}

fn run_qq(args: &QqArgs) -> CliResult<()> {
    let (_, sample) = load(&args.input)?;
    let points = qq_data(&sample, args.kind)?;
    emit(args.out.as_deref(), |w| write_qq_csv(w, &points))
}

fn run_second_order(args: &SecondOrderArgs) -> CliResult<()> {
    let (_, sample) = load(&args.input)?;
    let k_range = match args.k_range.as_deref() {
        None | Some("auto") => None,
        Some(r) => Some(parse_range(r)?),
    };
    let config = SecondOrderConfig {
        grid: None,
        k_range,
        k_beta: args.k_beta,
    };
    let so = estimate_second_order(&sample, &config)?;
    if so.beta_fallback {
        eprintln!("warning: beta estimate was singular; reporting 0");
    }
    emit(None, |w| {
        writeln!(w, "rho_hat,beta_hat,k_lo,k_hi,k_beta")?;
        writeln!(
            w,
            "{},{},{},{},{}",
            so.rho_hat, so.beta_hat, so.k_range.0, so.k_range.1, so.k_beta
        )
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Estimate(a) => run_estimate(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Qq(a) => run_qq(a),
        Command::SecondOrder(a) => run_second_order(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

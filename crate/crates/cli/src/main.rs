//! `sdd`: compute, compare and validate simplexwise distance invariants.
//!
//! Exit codes: 0 success, 1 unreadable input, 2 invalid parameters,
//! 3 shape mismatch, 4 failed validation or Lipschitz violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use simplexwise::cloud::{validate_metric_with, Axiom};
use simplexwise::corpus::{self, CorpusName, Sign, T6Params};
use simplexwise::format::{self, ComparisonReport};
use simplexwise::invariants::{amd, pdd, sdd, sdm};
use simplexwise::metrics::{lipschitz_check, sdd_dist_emd, sdd_dist_lac, sdm_lower_bound};
use simplexwise::mmspace::{wsd, wsd_dist_emd, WeightedSpace};
use simplexwise::{Cloud, CloudKind, Error, ToleranceConfig};

#[derive(Parser)]
#[command(name = "sdd", version, about = "Isometry invariants of finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an invariant of one cloud.
    Compute {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        invariant: Invariant,
        /// Basis size for sdd, sdm and wsd.
        #[arg(long, default_value_t = 2)]
        h: usize,
        /// Moment order for sdm.
        #[arg(long, default_value_t = 1)]
        l: u32,
        /// Number of neighbours for amd; defaults to m - 1.
        #[arg(long)]
        kmax: Option<usize>,
        #[command(flatten)]
        load: LoadArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance between the SDDs (or WSDs) of two clouds.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, value_enum, default_value_t = Metric::Emd)]
        metric: Metric,
        /// Weight scale of the WDD ground distance.
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[command(flatten)]
        load: LoadArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the clouds of a named family to a directory.
    Corpus {
        #[arg(long)]
        name: String,
        /// Half-lengths l1, l2, l3 of the 6-point family.
        #[arg(long, num_args = 3, value_names = ["L1", "L2", "L3"])]
        lengths: Option<Vec<f64>>,
        /// Signs of y1, y2, y3 for the 6-point family, e.g. "+-+".
        #[arg(long)]
        signs: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the 2ε Lipschitz bound under random perturbations.
    PerturbTest {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        load: LoadArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the metric axioms of a cloud file.
    Validate {
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Read a CSV file as a distance matrix rather than coordinates.
        #[arg(long)]
        matrix: bool,
    },
}

#[derive(clap::Args)]
struct LoadArgs {
    /// Check the triangle inequality when reading a distance matrix.
    #[arg(long)]
    validate_triangle: bool,
    /// Read a CSV file as a distance matrix rather than coordinates.
    #[arg(long)]
    matrix: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Invariant {
    Sdd,
    Pdd,
    Amd,
    Sdm,
    Wsd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Metric {
    Emd,
    Lac,
    Wsd,
}

impl Metric {
    fn name(self) -> &'static str {
        match self {
            Metric::Emd => "emd",
            Metric::Lac => "lac",
            Metric::Wsd => "wsd",
        }
    }
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::EmptyCloud
            | Error::DimensionMismatch { .. }
            | Error::WeightCount { .. }
            | Error::InvalidWeight { .. }
            | Error::WeightSum { .. }
            | Error::NotSquare { .. }
            | Error::InvalidDistance { .. }
            | Error::NonzeroDiagonal { .. }
            | Error::Asymmetric { .. }
            | Error::TriangleViolation { .. } => 1,
            Error::Shape(_) => 3,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = configure_threads().and_then(|()| run(cli)) {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    ExitCode::SUCCESS
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("SDD_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::new(2, format!("SDD_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::new(2, e.to_string()))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Compute {
            input,
            invariant,
            h,
            l,
            kmax,
            load,
            out,
        } => {
            let cloud = load_cloud(&input, &load)?;
            let text = match invariant {
                Invariant::Sdd => format::sdd_to_json(&sdd(&cloud, h)?),
                Invariant::Pdd => format::pdd_to_json(&pdd(&cloud)?),
                Invariant::Amd => {
                    let k = kmax.unwrap_or(cloud.m().saturating_sub(1));
                    format::vector_to_json(&amd(&cloud, k)?)
                }
                Invariant::Sdm => format::vector_to_json(&sdm(&cloud, h, l)?),
                Invariant::Wsd => format::wsd_to_json(&wsd(&WeightedSpace::new(cloud)?, h)?),
            };
            emit(out.as_deref(), &text)
        }
        Command::Compare {
            a,
            b,
            h,
            metric,
            gamma,
            load,
            out,
        } => {
            let (ca, cb) = (load_cloud(&a, &load)?, load_cloud(&b, &load)?);
            if ca.m() != cb.m() {
                return Err(Failure::new(
                    3,
                    format!("clouds have {} and {} points", ca.m(), cb.m()),
                ));
            }
            let start = Instant::now();
            let value = match metric {
                Metric::Emd => sdd_dist_emd(&sdd(&ca, h)?, &sdd(&cb, h)?)?,
                Metric::Lac => sdd_dist_lac(&sdd(&ca, h)?, &sdd(&cb, h)?)?,
                Metric::Wsd => {
                    let (wa, wb) = (WeightedSpace::new(ca.clone())?, WeightedSpace::new(cb.clone())?);
                    wsd_dist_emd(&wsd(&wa, h)?, &wsd(&wb, h)?, gamma)?
                }
            };
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            let report = ComparisonReport {
                metric: metric.name().into(),
                h,
                value,
                lower_bound_sdm: sdm_lower_bound(&ca, &cb, h)?,
                elapsed_ms,
                gamma: (metric == Metric::Wsd).then_some(gamma),
            };
            emit(out.as_deref(), &report.to_json())
        }
        Command::Corpus {
            name,
            lengths,
            signs,
            out,
        } => {
            let name: CorpusName = name.parse()?;
            let mut params = T6Params::default();
            if let Some(l) = lengths {
                params.l = [l[0], l[1], l[2]];
            }
            if let Some(s) = signs {
                params.signs = parse_signs(&s)?;
            }
            fs::create_dir_all(&out)
                .map_err(|e| Failure::new(2, format!("cannot create {}: {e}", out.display())))?;
            for entry in corpus::generate(name, &params)? {
                let path = out.join(format!("{}.json", entry.name));
                write_file(&path, &format::cloud_to_json(&entry.cloud))?;
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::PerturbTest {
            input,
            eps,
            trials,
            h,
            seed,
            load,
            out,
        } => {
            let cloud = load_cloud(&input, &load)?;
            let report = lipschitz_check(&cloud, eps, trials, h, seed)?;
            let file = PerturbFile {
                eps,
                h,
                violations: report.violations().len(),
                max_emd: report.max_emd(),
                max_lac: report.max_lac(),
                trials: report
                    .trials
                    .iter()
                    .map(|t| TrialRow {
                        seed: t.seed,
                        emd: t.emd,
                        lac: t.lac,
                        bound: t.bound,
                        lower_bound_sdm: t.lower,
                        violation: t.is_violation(),
                    })
                    .collect(),
            };
            emit(out.as_deref(), &format::to_json(&file))?;
            if file.violations > 0 {
                let seeds: Vec<String> = report.violations().iter().map(|t| t.seed.to_string()).collect();
                return Err(Failure::new(
                    4,
                    format!("Lipschitz bound violated in trials with seeds {}", seeds.join(", ")),
                ));
            }
            Ok(())
        }
        Command::Validate { input, matrix } => validate(&input, matrix),
    }
}

#[derive(Serialize)]
struct TrialRow {
    seed: u64,
    emd: f64,
    lac: f64,
    bound: f64,
    lower_bound_sdm: f64,
    violation: bool,
}

#[derive(Serialize)]
struct PerturbFile {
    eps: f64,
    h: usize,
    violations: usize,
    max_emd: f64,
    max_lac: f64,
    trials: Vec<TrialRow>,
}

#[derive(Serialize)]
struct ViolationRow {
    axiom: &'static str,
    indices: Vec<usize>,
    magnitude: f64,
}

#[derive(Serialize)]
struct ValidationFile {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<String>,
    violations: Vec<ViolationRow>,
}

fn axiom_name(a: Axiom) -> &'static str {
    match a {
        Axiom::Square => "square",
        Axiom::Nonnegativity => "nonnegativity",
        Axiom::ZeroDiagonal => "zero_diagonal",
        Axiom::Symmetry => "symmetry",
        Axiom::Triangle => "triangle",
    }
}

fn validate(input: &Path, csv_matrix: bool) -> CliResult<()> {
    let text = read_file(input)?;
    let (matrix, weights) = if is_csv(input) {
        let rows = format::read_csv_rows(text.as_bytes())?;
        if csv_matrix {
            (rows, None)
        } else {
            (Cloud::from_coordinates(&rows, None)?.distance_matrix(), None)
        }
    } else {
        let mut file = format::cloud_file_from_json(&text)?;
        let weights = file.weights.take();
        match (file.kind.as_str(), file.matrix.take()) {
            ("matrix", Some(m)) => (m, weights),
            _ => (file.into_cloud(false)?.distance_matrix(), weights),
        }
    };
    let violations = validate_metric_with(&matrix, &ToleranceConfig::default());
    let weight_problem = weights.as_deref().and_then(|w| weight_problem(w, matrix.len()));
    let report = ValidationFile {
        valid: violations.is_empty() && weight_problem.is_none(),
        weights: weight_problem.clone(),
        violations: violations
            .iter()
            .map(|v| ViolationRow {
                axiom: axiom_name(v.axiom),
                indices: v.indices.clone(),
                magnitude: v.magnitude,
            })
            .collect(),
    };
    print!("{}", format::to_json(&report));
    if let Some(problem) = weight_problem {
        return Err(Failure::new(4, problem));
    }
    match violations.first() {
        None => Ok(()),
        Some(v) => Err(Failure::new(
            4,
            format!(
                "{} violation(s); first: {} at indices {:?} by {}",
                violations.len(),
                axiom_name(v.axiom),
                v.indices,
                v.magnitude
            ),
        )),
    }
}

fn weight_problem(w: &[f64], m: usize) -> Option<String> {
    if w.len() != m {
        return Some(format!("{} weights for {m} points", w.len()));
    }
    if let Some((i, x)) = w.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x > 0.0)) {
        return Some(format!("weight {i} is not positive: {x}"));
    }
    let sum: f64 = w.iter().sum();
    let tol = ToleranceConfig::default();
    (!tol.approx_eq(sum, 1.0)).then(|| format!("weights sum to {sum}, expected 1"))
}

fn parse_signs(s: &str) -> CliResult<[Sign; 3]> {
    let signs: Vec<Sign> = s
        .chars()
        .map(|c| c.to_string().parse::<Sign>())
        .collect::<Result<_, _>>()?;
    signs
        .try_into()
        .map_err(|_| Failure::new(2, format!("--signs needs exactly three of + and -, got {s:?}")))
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))
}

fn load_cloud(path: &Path, load: &LoadArgs) -> CliResult<Cloud> {
    let text = read_file(path)?;
    let cloud = if is_csv(path) {
        let kind = if load.matrix {
            CloudKind::Matrix
        } else {
            CloudKind::Coordinates
        };
        format::cloud_from_csv(text.as_bytes(), kind, load.validate_triangle)?
    } else {
        format::cloud_from_json(&text, load.validate_triangle)?
    };
    Ok(cloud)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

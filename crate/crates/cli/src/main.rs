//! `fewnomial`: construct fewnomial systems with many positive solutions,
//! solve and certify them, and tabulate the known upper bounds.
//!
//! Exit codes: 0 success, 2 precondition violation, 3 solution count
//! mismatch, 4 certification failure.

mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fewnomial_core::bounds::{self, TableFormat};
use fewnomial_core::construct::{self, plan_record};
use fewnomial_core::numeric::{parse_rational, ten_to, to_decimal_string};
use fewnomial_core::solver::{self, verify_points};
use fewnomial_core::{BlockRecipe, BlockRegistry, Error, SolutionsFile, SparseSystem};
use num::BigRational;

use manifest::RunManifest;

const EXIT_PRECONDITION: u8 = 2;
const EXIT_COUNT_MISMATCH: u8 = 3;
const EXIT_CERTIFICATION: u8 = 4;

#[derive(Parser)]
#[command(name = "fewnomial", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the n-equation system with n+k+1 monomials and ⌊(n+k)/k⌋^k
    /// positive solutions.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra block recipe; preferred over the built-in block of the
        /// same dimension. May be repeated.
        #[arg(long = "block")]
        blocks: Vec<PathBuf>,
    },
    /// Solve a constructed system and certify every solution.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        /// Significant decimal digits.
        #[arg(long, env = "FEWNOMIAL_PRECISION", default_value_t = solver::DEFAULT_PRECISION,
              value_parser = clap::value_parser!(u32).range(10..=1000))]
        precision: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "block")]
        blocks: Vec<PathBuf>,
    },
    /// Re-certify a list of solutions against a system.
    Verify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        solutions: PathBuf,
        /// Residual tolerance. Defaults to 10^(10-p) for files written at
        /// precision p, and 1e-4 for files without a precision.
        #[arg(long)]
        tolerance: Option<String>,
    },
    /// Evaluate every bound at one (n, k).
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = bounds::DEFAULT_DIGITS)]
        digits: u32,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate the bounds over 1 ≤ n ≤ n-max, 1 ≤ k ≤ k-max.
    Table {
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        k_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = bounds::DEFAULT_DIGITS)]
        digits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Md,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Json => TableFormat::Json,
            Format::Md => TableFormat::Markdown,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn precondition(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PRECONDITION, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Certification(_) => EXIT_CERTIFICATION,
            _ => EXIT_PRECONDITION,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct { n, k, out, blocks } => cmd_construct(n, k, out.as_deref(), &blocks),
        Command::Solve { input, precision, out, blocks } => {
            cmd_solve(&input, precision, out.as_deref(), &blocks)
        }
        Command::Verify { system, solutions, tolerance } => {
            cmd_verify(&system, &solutions, tolerance.as_deref())
        }
        Command::Bounds { n, k, digits, json } => cmd_bounds(n, k, digits, json),
        Command::Table { n_max, k_max, format, digits, out } => {
            cmd_table(n_max, k_max, format, digits, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::precondition(format!("cannot read {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<(String, Vec<u8>), Failure> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::precondition(format!("{} is not UTF-8", path.display())))?;
    Ok((text, bytes))
}

fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::precondition(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json serializes");
    s.push('\n');
    s
}

/// User blocks first, then the built-ins, so a user block of dimension m
/// takes precedence.
fn load_registry(paths: &[PathBuf], manifest: RunManifest) -> Result<(BlockRegistry, RunManifest), Failure> {
    let mut registry = BlockRegistry::empty();
    let mut manifest = manifest;
    for (i, path) in paths.iter().enumerate() {
        let (text, bytes) = read_text(path)?;
        manifest = manifest.input(&format!("block{i}"), &bytes);
        let recipe = BlockRecipe::from_json(&text)?;
        registry.register(recipe)?;
    }
    for m in 1..=3 {
        let recipe = fewnomial_core::builtin_block(m)?;
        if registry.get(recipe.id()).is_none() {
            registry.register(recipe)?;
        }
    }
    let manifest = manifest.blocks(&registry);
    Ok((registry, manifest))
}

fn cmd_construct(n: usize, k: usize, out: Option<&Path>, blocks: &[PathBuf]) -> CmdResult {
    let manifest = RunManifest::new("construct").arg("n", n).arg("k", k);
    let (registry, manifest) = load_registry(blocks, manifest)?;
    let plan = construct::plan(n, k, &registry)?;
    let mut system = construct::assemble(&plan);
    system.metadata_mut().insert("manifest".into(), manifest.to_value());
    emit(&system.to_json(), out)
}

fn cmd_solve(input: &Path, precision: u32, out: Option<&Path>, blocks: &[PathBuf]) -> CmdResult {
    let (text, bytes) = read_text(input)?;
    let manifest = RunManifest::new("solve").input("system", &bytes).precision(precision);
    let (registry, manifest) = load_registry(blocks, manifest)?;
    let system = SparseSystem::from_json(&text)?;
    let claimed = plan_record(&system)?.predicted_count;
    let set = solver::solve_assembled(&system, &registry, precision)?;
    let mut file = SolutionsFile::from_set(&set, precision);
    file.manifest = Some(manifest.to_value());
    emit(&file.to_json(), out)?;
    if set.len().to_string() != claimed {
        return Err(Failure {
            code: EXIT_COUNT_MISMATCH,
            message: format!("certified {} solutions, the plan claims {claimed}", set.len()),
        });
    }
    Ok(())
}

fn cmd_verify(system_path: &Path, solutions_path: &Path, tolerance: Option<&str>) -> CmdResult {
    let (system_text, _) = read_text(system_path)?;
    let (solutions_text, _) = read_text(solutions_path)?;
    let system = SparseSystem::from_json(&system_text)?;
    let file: SolutionsFile = serde_json::from_str(&solutions_text)
        .map_err(|e| Failure::precondition(format!("malformed solutions file: {e}")))?;
    let points = file.points()?;
    let tolerance: BigRational = match tolerance {
        Some(t) => parse_rational(t)?,
        None => match file.precision {
            Some(p) => ten_to(10 - p as i64),
            None => ten_to(-4),
        },
    };
    let precision = file.precision.unwrap_or(0).max(solver::DEFAULT_PRECISION);
    if let Some(dim) = points.iter().map(Vec::len).find(|&d| d != system.num_variables()) {
        return Err(Failure::precondition(format!(
            "a solution has {dim} coordinates, the system has {} variables",
            system.num_variables()
        )));
    }
    if let Ok(record) = plan_record(&system) {
        if points.len().to_string() != record.predicted_count {
            return Err(Failure {
                code: EXIT_COUNT_MISMATCH,
                message: format!(
                    "{} solutions given, the plan predicts {}",
                    points.len(),
                    record.predicted_count
                ),
            });
        }
    }
    let report = verify_points(&system, &points, precision, &tolerance)?;
    println!(
        "{} solutions, {} failing at tolerance {}, pairwise distinct: {}",
        report.count,
        report.failures.len(),
        to_decimal_string(&tolerance, 6),
        report.distinct
    );
    if !report.certified() {
        return Err(Failure {
            code: EXIT_CERTIFICATION,
            message: if report.failures.is_empty() {
                "solutions are not pairwise distinct".to_string()
            } else {
                format!("solutions {:?} do not certify", report.failures)
            },
        });
    }
    Ok(())
}

fn cmd_bounds(n: u32, k: u32, digits: u32, json: bool) -> CmdResult {
    let report = bounds::report(n, k, digits)?;
    if json {
        let mut value = report.to_json_value();
        let manifest = RunManifest::new("bounds").arg("n", n).arg("k", k).arg("digits", digits);
        value["manifest"] = manifest.to_value();
        print!("{}", pretty(&value));
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn cmd_table(n_max: u32, k_max: u32, format: Format, digits: u32, out: Option<&Path>) -> CmdResult {
    if n_max == 0 {
        return Err(Failure::precondition("--n-max must be at least 1"));
    }
    let rows = bounds::table(n_max, k_max, digits)?;
    let text = match format {
        Format::Json => {
            let table: serde_json::Value =
                serde_json::from_str(&bounds::render_table(&rows, TableFormat::Json))
                    .expect("table json parses");
            let manifest = RunManifest::new("table")
                .arg("n_max", n_max)
                .arg("k_max", k_max)
                .arg("format", "json")
                .arg("digits", digits);
            pretty(&serde_json::json!({ "rows": table, "manifest": manifest.to_value() }))
        }
        f => bounds::render_table(&rows, f.into()),
    };
    emit(&text, out)
}

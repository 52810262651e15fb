//! The `surfdyn` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 fiber-count trials
//! disagree, 3 iteration stopped by the degree budget (the partial report is
//! still printed), 4 a gallery check failed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use surfdyn_core::dynamics::{
    analyze, degree_sequence, family_scan, involution_invariance_scan, scaling_family_scan, topological_degree,
    AnalysisConfig, FiberCountConfig, InvolutionCandidate,
};
use surfdyn_core::number::{format_rational, parse_rational, pow10, rat, Rounding};
use surfdyn_core::ratmap::DEFAULT_DEGREE_BUDGET;
use surfdyn_core::spectral::{analyze_spectrum, krein_rutman_check, PerronEntries, PullbackMatrix};
use surfdyn_core::{Error, Integer, NSLattice, Rational, RationalSelfMap};

use crate::gallery::{self, Entry};
use crate::mapio::{load_map, MapFile, MapIoError};
use crate::report::{decimal, emit_report, sequence_csv, ReportFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_GENERICITY: i32 = 2;
pub const EXIT_TRUNCATED: i32 = 3;
pub const EXIT_GALLERY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "surfdyn", version, about = "Dynamical invariants of rational self-maps of P2 and P1xP1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full analysis of a map file.
    Analyze(AnalyzeArgs),
    /// Degree sequence of the iterates as CSV.
    Iterate(IterateArgs),
    /// Topological degree by randomized fiber counting.
    FiberCount(FiberCountArgs),
    /// Run built-in examples against their stated values.
    Gallery(GalleryArgs),
    /// Base-scheme length and pullback matrix along a parameter.
    FamilyScan(FamilyScanArgs),
    /// Commutation with candidate involutions.
    InvarianceCheck(InvarianceArgs),
    /// Spectral data of a matrix acting on a lattice.
    Spectral(SpectralArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FiberArgs {
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, env = "SURFDYN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Bound on random shear and target entries.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(0..))]
    pub height: u64,
}

impl FiberArgs {
    fn config(&self) -> Result<FiberCountConfig, Error> {
        FiberCountConfig::new(self.trials, self.seed, self.height)
    }
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[command(flatten)]
    pub fiber: FiberArgs,
    #[arg(long, default_value = "1e-12", value_parser = parse_tolerance)]
    pub tolerance: Rational,
    /// Largest total degree allowed for an iterate.
    #[arg(long, default_value_t = DEFAULT_DEGREE_BUDGET)]
    pub budget: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct IterateArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DEGREE_BUDGET)]
    pub budget: u32,
}

#[derive(Args, Debug)]
pub struct FiberCountArgs {
    pub path: PathBuf,
    #[command(flatten)]
    pub fiber: FiberArgs,
}

#[derive(Args, Debug)]
pub struct GalleryArgs {
    /// all, ex41, ex42, ex44, power-d, power-<d> or feps.
    #[arg(long, default_value = "all")]
    pub name: String,
    /// Exponent of `power-d`.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub d: u32,
    /// Parameter of `feps`.
    #[arg(long, default_value = "2", value_parser = parse_value, allow_hyphen_values = true)]
    pub eps: Rational,
    #[command(flatten)]
    pub fiber: FiberArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct FamilyScanArgs {
    pub path: PathBuf,
    #[arg(long, default_value = "eps")]
    pub param: String,
    /// Comma-separated rationals.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_values)]
    pub values: Values,
    /// Also count preimages at every value.
    #[arg(long)]
    pub deg_top: bool,
    #[command(flatten)]
    pub fiber: FiberArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `A(w) = K/w` for each value `K`.
    Reciprocal,
    /// `A(w) = L w` for each value `L`, also at the parameter `-L^2`.
    Scaling,
    /// `A(w) = w`; values are ignored.
    Swap,
}

#[derive(Args, Debug)]
pub struct InvarianceArgs {
    pub path: PathBuf,
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_values)]
    pub values: Option<Values>,
    /// Family parameter varied by `scaling`.
    #[arg(long, default_value = "eps")]
    pub param: String,
}

#[derive(Args, Debug)]
pub struct SpectralArgs {
    /// `P2`, `P1xP1` or a lattice JSON file.
    #[arg(long, default_value = "P1xP1")]
    pub lattice: String,
    /// Row-major JSON matrix, e.g. `[[2,2],[2,2]]`.
    #[arg(long)]
    pub matrix: String,
    #[arg(long, default_value = "1e-12", value_parser = parse_tolerance)]
    pub tolerance: Rational,
    #[arg(long)]
    pub json: bool,
}

/// A non-empty list of parameter values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Values(pub Vec<Rational>);

fn parse_value(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

fn parse_values(s: &str) -> Result<Values, String> {
    let v = s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(parse_value).collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty list of values".into());
    }
    Ok(Values(v))
}

/// Accepts `p/q`, decimals and scientific notation, all read exactly.
pub fn parse_tolerance(s: &str) -> Result<Rational, String> {
    let bad = || format!("`{s}` is not a positive tolerance");
    let q = match parse_rational(s) {
        Some(q) => q,
        None => {
            let (mantissa, exp) = match s.split_once(['e', 'E']) {
                Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
                None => (s, 0),
            };
            let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
            if !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: Integer = format!("{int}{frac}").parse().map_err(|_| bad())?;
            let shift = exp - frac.len() as i32;
            let scale = Rational::from_integer(pow10(shift.unsigned_abs()));
            let base = Rational::from_integer(digits);
            if shift >= 0 {
                base * scale
            } else {
                base / scale
            }
        }
    };
    if q > rat(0) {
        Ok(q)
    } else {
        Err(bad())
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Map(#[from] MapIoError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Genericity(_)) | CliError::Map(MapIoError::Core(Error::Genericity(_))) => {
                EXIT_GENERICITY
            }
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_TRUNCATED,
            _ => EXIT_INPUT,
        }
    }
}

impl From<gallery::GalleryError> for CliError {
    fn from(e: gallery::GalleryError) -> Self {
        match e {
            gallery::GalleryError::Map(m) => CliError::Map(m),
            gallery::GalleryError::Core(c) => CliError::Core(c),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Analyze(a) => cmd_analyze(&a, out, err),
        Command::Iterate(a) => cmd_iterate(&a, out, err),
        Command::FiberCount(a) => {
            let f = read_map(&a.path)?;
            let d = topological_degree(&f, &a.fiber.config()?)?;
            emit(out, &format!("{d}\n"))?;
            Ok(EXIT_OK)
        }
        Command::Gallery(a) => cmd_gallery(&a, out),
        Command::FamilyScan(a) => cmd_family_scan(&a, out),
        Command::InvarianceCheck(a) => cmd_invariance(&a, out),
        Command::Spectral(a) => cmd_spectral(&a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Other(format!("cannot write output: {e}")))
}

fn read_map(path: &Path) -> Result<RationalSelfMap, CliError> {
    Ok(load_map(&MapFile::read(path)?)?)
}

fn truncation_code(e: &Option<Error>, err: &mut dyn Write) -> i32 {
    match e {
        Some(e) => {
            let _ = writeln!(err, "warning: {e}; report covers the completed iterates");
            EXIT_TRUNCATED
        }
        None => EXIT_OK,
    }
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let f = read_map(&a.path)?;
    let cfg = AnalysisConfig {
        iterations: a.n as usize,
        budget: a.budget,
        tolerance: a.tolerance.clone(),
        fiber: a.fiber.config()?,
    };
    let r = analyze(&f, &cfg)?;
    let format = if a.json { ReportFormat::Json } else { ReportFormat::Table };
    emit(out, &emit_report(&r, format))?;
    Ok(truncation_code(&r.sequence.truncated, err))
}

fn cmd_iterate(a: &IterateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let f = read_map(&a.path)?;
    let seq = degree_sequence(&f, a.n as usize, a.budget)?;
    let csv = sequence_csv(&seq);
    match &a.csv {
        Some(path) => {
            fs::write(path, csv).map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display())))?
        }
        None => emit(out, &csv)?,
    }
    Ok(truncation_code(&seq.truncated, err))
}

#[derive(Serialize, Deserialize)]
struct CheckJson {
    label: String,
    expected: String,
    actual: String,
    pass: bool,
}

#[derive(Serialize, Deserialize)]
struct OutcomeJson {
    entry: String,
    passed: bool,
    checks: Vec<CheckJson>,
}

fn cmd_gallery(a: &GalleryArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let entries = if a.name == "all" {
        Entry::all()
    } else {
        vec![Entry::parse(&a.name, a.d, &a.eps)
            .ok_or_else(|| CliError::Other(format!("unknown gallery entry `{}`", a.name)))?]
    };
    let opts = gallery::Options { fiber: a.fiber.config()? };
    let mut all_pass = true;
    let mut json = Vec::new();
    for entry in &entries {
        let outcome = gallery::run(entry, &opts)?;
        all_pass &= outcome.passed();
        if a.json {
            json.push(OutcomeJson {
                entry: entry.to_string(),
                passed: outcome.passed(),
                checks: outcome
                    .checks
                    .iter()
                    .map(|c| CheckJson {
                        label: c.label.clone(),
                        expected: c.expected.clone(),
                        actual: c.actual.clone(),
                        pass: c.pass,
                    })
                    .collect(),
            });
        } else {
            for line in outcome.lines() {
                emit(out, &format!("{line}\n"))?;
            }
        }
    }
    if a.json {
        emit(out, &(serde_json::to_string_pretty(&json).expect("serializable") + "\n"))?;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_GALLERY })
}

fn builder(file: MapFile, param: String) -> impl Fn(&Rational) -> Result<RationalSelfMap, Error> {
    move |v| load_map(&file.clone().with_parameter(&param, v)).map_err(gallery::core_error)
}

fn cmd_family_scan(a: &FamilyScanArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = MapFile::read(&a.path)?;
    let fiber = a.fiber.config()?;
    let scan = family_scan(builder(file, a.param.clone()), &a.values.0, a.deg_top.then_some(&fiber))?;
    let mut text = format!("{},base_scheme_length,pullback_matrix,deg_top,degenerate,error\n", a.param);
    for r in &scan.rows {
        let show = |o: Option<String>| o.unwrap_or_default();
        text += &format!(
            "{},{},\"{}\",{},{},{}\n",
            format_rational(&r.value),
            show(r.base_scheme_length.map(|x| x.to_string())),
            show(r.pullback_matrix.as_ref().map(|m| format!("{m:?}"))),
            show(r.deg_top.map(|x| x.to_string())),
            r.degenerate,
            show(r.error.as_ref().map(|e| e.to_string().replace(',', ";"))),
        );
    }
    text += &format!("# length constant: {}, matrix constant: {}\n", scan.length_constant, scan.matrix_constant);
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_invariance(a: &InvarianceArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = MapFile::read(&a.path)?;
    let values = match (a.family, &a.values) {
        (Family::Swap, _) => Vec::new(),
        (_, Some(v)) => v.0.clone(),
        (_, None) => return Err(CliError::Other("--values is required for this family".into())),
    };
    let mut text = String::new();
    match a.family {
        Family::Reciprocal | Family::Swap => {
            let candidates: Vec<InvolutionCandidate> = if a.family == Family::Swap {
                vec![InvolutionCandidate::IdentitySwap]
            } else {
                values.into_iter().map(InvolutionCandidate::Reciprocal).collect()
            };
            text += "candidate,invariant,note\n";
            for row in involution_invariance_scan(&load_map(&file)?, &candidates)? {
                let inv = row.invariant.map_or("-".into(), |b| b.to_string());
                text += &format!("{},{inv},{}\n", row.candidate.label(), row.note.unwrap_or_default());
            }
        }
        Family::Scaling => {
            let params = file.parameter_values()?;
            let eps = params
                .get(&a.param)
                .cloned()
                .ok_or_else(|| CliError::Other(format!("map file has no parameter `{}`", a.param)))?;
            text += &format!("L,L^2+{0},invariant_at_{0},invariant_at_-L^2,note\n", a.param);
            for row in scaling_family_scan(builder(file, a.param.clone()), &eps, &values)? {
                let show = |o: Option<bool>| o.map_or("-".into(), |b| b.to_string());
                text += &format!(
                    "{},{},{},{},{}\n",
                    format_rational(&row.l),
                    format_rational(&row.obstruction),
                    show(row.invariant_at_eps),
                    show(row.invariant_at_minus_l_sq),
                    row.note.unwrap_or_default()
                );
            }
        }
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Deserialize)]
struct LatticeJson {
    rank: usize,
    form: Vec<Vec<i64>>,
    nef_generators: Vec<Vec<i64>>,
    ample: Vec<i64>,
}

fn read_lattice(spec: &str) -> Result<NSLattice, CliError> {
    match spec {
        "P2" => return Ok(NSLattice::p2()),
        "P1xP1" => return Ok(NSLattice::p1xp1()),
        _ => {}
    }
    let text = fs::read_to_string(spec).map_err(|source| MapIoError::Io { path: spec.into(), source })?;
    let l: LatticeJson = serde_json::from_str(&text).map_err(MapIoError::Json)?;
    if l.form.len() != l.rank {
        return Err(CliError::Other(format!("lattice rank {} but form has {} rows", l.rank, l.form.len())));
    }
    Ok(NSLattice::new(l.form, l.nef_generators, l.ample)?)
}

#[derive(Serialize)]
struct SpectralJson {
    char_poly: Vec<String>,
    spectral_radius_exact: Option<String>,
    spectral_radius_interval: [String; 2],
    perron_exact: Option<Vec<String>>,
    cone_certified: bool,
    indeterminate: bool,
    rank: usize,
    trace: String,
    krein_rutman: bool,
}

fn cmd_spectral(a: &SpectralArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let lattice = std::sync::Arc::new(read_lattice(&a.lattice)?);
    let rows: Vec<Vec<i64>> = serde_json::from_str(&a.matrix).map_err(MapIoError::Json)?;
    let t = PullbackMatrix::from_i64(&rows, lattice)?;
    let s = analyze_spectrum(&t, &a.tolerance)?;
    let j = SpectralJson {
        char_poly: s.radius.char_poly.iter().map(|c| c.to_string()).collect(),
        spectral_radius_exact: s.radius.rho_exact.as_ref().map(format_rational),
        spectral_radius_interval: [decimal(&s.radius.lo, Rounding::Down), decimal(&s.radius.hi, Rounding::Up)],
        perron_exact: match &s.perron.entries {
            PerronEntries::Exact(v) => Some(v.iter().map(format_rational).collect()),
            PerronEntries::Interval(_) => None,
        },
        cone_certified: s.perron.cone_certified,
        indeterminate: s.perron.indeterminate,
        rank: s.rank,
        trace: s.trace.to_string(),
        krein_rutman: krein_rutman_check(&t)?,
    };
    if a.json {
        emit(out, &(serde_json::to_string_pretty(&j).expect("serializable") + "\n"))?;
        return Ok(EXIT_OK);
    }
    let rho = j
        .spectral_radius_exact
        .clone()
        .unwrap_or_else(|| format!("[{}, {}]", j.spectral_radius_interval[0], j.spectral_radius_interval[1]));
    let perron = j.perron_exact.as_ref().map_or("interval".into(), |v| format!("({})", v.join(", ")));
    let text = format!(
        "char poly (ascending)  [{}]\nspectral radius        {rho}\nperron vector          {perron} cone_certified={}\nrank / trace           {} / {}\nkrein-rutman check     {}\n",
        j.char_poly.join(", "),
        j.cone_certified,
        j.rank,
        j.trace,
        j.krein_rutman
    );
    emit(out, &text)?;
    Ok(EXIT_OK)
}

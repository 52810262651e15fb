//! Built-in maps with the values stated for them, and a runner that
//! recomputes each value and reports PASS or FAIL per item.
//!
//! `ex42` and `ex44` are not algebraically stable, so their dynamical degree
//! is only bracketed and the stated value `lambda` cannot be certified; the
//! runner prints the bracket and fails those items.

use std::fmt;

use surfdyn_core::dynamics::{
    analyze, family_scan, involution_invariance_scan, AnalysisConfig, AnalysisReport, FiberCountConfig,
    InvolutionCandidate,
};
use surfdyn_core::number::{format_rational, rat, ratio};
use surfdyn_core::ratmap::lattice_of;
use surfdyn_core::spectral::PerronEntries;
use surfdyn_core::{Rational, RationalSelfMap};

use crate::mapio::{load_map, MapFile, MapIoError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Ex41,
    Ex42,
    Ex44,
    Power(u32),
    Feps(Rational),
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Ex41 => f.write_str("ex41"),
            Entry::Ex42 => f.write_str("ex42"),
            Entry::Ex44 => f.write_str("ex44"),
            Entry::Power(d) => write!(f, "power-{d}"),
            Entry::Feps(e) => write!(f, "feps({})", format_rational(e)),
        }
    }
}

impl Entry {
    /// `ex41`, `ex42`, `ex44`, `power-d` (or `power-<d>`), `feps`.
    pub fn parse(name: &str, d: u32, eps: &Rational) -> Option<Entry> {
        match name {
            "ex41" => Some(Entry::Ex41),
            "ex42" => Some(Entry::Ex42),
            "ex44" => Some(Entry::Ex44),
            "power-d" | "power" => Some(Entry::Power(d)),
            "feps" => Some(Entry::Feps(eps.clone())),
            other => other.strip_prefix("power-")?.parse().ok().filter(|&d| d >= 1).map(Entry::Power),
        }
    }

    /// What `gallery all` runs.
    pub fn all() -> Vec<Entry> {
        vec![
            Entry::Ex41,
            Entry::Ex42,
            Entry::Ex44,
            Entry::Power(2),
            Entry::Power(3),
            Entry::Power(5),
            Entry::Feps(rat(2)),
        ]
    }

    pub fn map_file(&self) -> MapFile {
        match self {
            Entry::Ex41 => MapFile::plane(["x*z + y^2", "y*z + x^2", "x^2 + y^2"]),
            Entry::Ex42 => MapFile::plane(["x^2*y + y^2*z", "x*y*z", "x^2*y + x*y^2 + 2*y^2*z + z^2*(x + y)"]),
            Entry::Ex44 => feps_file().with_parameter("eps", &rat(1)),
            Entry::Power(d) => {
                let (a, b) = (format!("t0^{d}"), format!("t1^{d}"));
                MapFile::product([&a, &b], ["w0", "w1"])
            }
            Entry::Feps(e) => feps_file().with_parameter("eps", e),
        }
    }

    /// Iterates used for the degree sequence. The fifth iterate of `ex44`
    /// has factors of bidegree above 300 and is left out.
    pub fn iterations(&self) -> usize {
        match self {
            Entry::Ex44 => 4,
            _ => 5,
        }
    }
}

/// The family `f_eps`; `eps = 1` gives `ex44`.
pub fn feps_file() -> MapFile {
    MapFile::product(
        ["t0*t1*w0*w1", "t0^2*w1^2 - eps*t1^2*w0^2"],
        ["t0*w1*(t0*w0 - eps*t1*w1)", "t0^2*w1^2 - (t0*w0 - t1*w1)^2"],
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    fn eq(label: &str, expected: impl ToString, actual: impl ToString) -> Check {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Check { label: label.into(), pass: expected == actual, expected, actual }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub entry: Entry,
    pub checks: Vec<Check>,
    pub report: Option<AnalysisReport>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                format!("{verdict} {} {}: expected {}, got {}", self.entry, c.label, c.expected, c.actual)
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub fiber: FiberCountConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum GalleryError {
    #[error(transparent)]
    Map(#[from] MapIoError),
    #[error(transparent)]
    Core(#[from] surfdyn_core::Error),
}

pub fn load(entry: &Entry) -> Result<RationalSelfMap, MapIoError> {
    load_map(&entry.map_file())
}

pub fn run(entry: &Entry, opts: &Options) -> Result<Outcome, GalleryError> {
    let f = load(entry)?;
    if let Entry::Feps(eps) = entry {
        return Ok(Outcome { entry: entry.clone(), checks: feps_checks(&f, eps)?, report: None });
    }
    let cfg = AnalysisConfig { iterations: entry.iterations(), fiber: opts.fiber.clone(), ..AnalysisConfig::default() };
    let r = analyze(&f, &cfg)?;
    let mut checks = Vec::new();
    match entry {
        Entry::Ex41 => {
            checks.push(Check::eq("topological degree", 3, r.deg_top));
            checks.push(Check::eq("dynamical degree", "2", lambda(&r)));
            checks.push(Check::eq("degree sequence", "2, 4, 8, 16, 32", sequence(&r)));
            checks.push(Check::eq("stable up to", 5, r.sequence.stable_up_to));
            checks.push(Check::eq("regularity", "(false, false, true)", regularity(&r)));
            checks.push(Check::eq("entropy bound", "1.09861228866811", &r.entropy_bound));
        }
        Entry::Ex42 => {
            checks.push(Check::eq("topological degree", 4, r.deg_top));
            checks.push(Check::eq("dynamical degree", "3", lambda(&r)));
            checks.push(Check::eq("lambda^2 vs deg", "9 > 4", lambda_sq(&r)));
            checks.push(Check::eq("entropy bound", "1.38629436111989", &r.entropy_bound));
        }
        Entry::Ex44 => {
            checks.push(Check::eq("pullback matrix", "[[2, 2], [2, 2]]", format!("{:?}", r.pullback_matrix)));
            checks.push(Check::eq("spectral radius", "4", radius(&r)));
            checks.push(Check::eq("perron vector", "(1, 1) cone-certified", perron(&r)));
            checks.push(Check::eq("perron square", "2", perron_square(&r)));
            checks.push(Check::eq("dynamical degree", "4", lambda(&r)));
            checks.push(Check::eq("topological degree", 8, r.deg_top));
            checks.push(Check::eq("rank one", "(true, true)", rank_one(&r)));
            checks.push(Check::eq("entropy bound", "2.07944154167984", &r.entropy_bound));
        }
        Entry::Power(d) => {
            let d = *d;
            checks.push(Check::eq(
                "pullback matrix",
                format!("[[{d}, 0], [0, 1]]"),
                format!("{:?}", r.pullback_matrix),
            ));
            checks.push(Check::eq("spectral radius", d, radius(&r)));
            checks.push(Check::eq("perron vector", "(1, 0) cone-certified", perron(&r)));
            checks.push(Check::eq("perron square", "0", perron_square(&r)));
            checks.push(Check::eq("regular", true, r.regularity.is_regular_geometric));
            checks.push(Check::eq("topological degree", d, r.deg_top));
            let projection = r.projection.as_ref().map(|p| p.holds);
            checks.push(Check::eq("projection formula", "Some(true)", format!("{projection:?}")));
            // regular, yet lambda^2 = d^2 differs from deg = d
            checks.push(Check::eq(
                "criterion consistent",
                "Some(false)",
                format!("{:?}", r.regularity.criterion_consistent),
            ));
        }
        Entry::Feps(_) => unreachable!("handled above"),
    }
    Ok(Outcome { entry: entry.clone(), checks, report: Some(r) })
}

fn feps_checks(f: &RationalSelfMap, eps: &Rational) -> Result<Vec<Check>, GalleryError> {
    let mut checks = vec![Check::eq("pullback matrix", "[[2, 2], [2, 2]]", format!("{:?}", f.pullback_matrix()))];
    let scan = family_scan(
        |e| load_map(&feps_file().with_parameter("eps", e)).map_err(core_error),
        std::slice::from_ref(eps),
        None,
    )?;
    let row = &scan.rows[0];
    checks.push(Check::eq("base scheme length", "Some(16)", format!("{:?}", row.base_scheme_length)));
    let candidates = [
        InvolutionCandidate::Reciprocal(rat(1)),
        InvolutionCandidate::Reciprocal(rat(2)),
        InvolutionCandidate::Reciprocal(rat(-1)),
        InvolutionCandidate::Reciprocal(ratio(1, 2)),
        InvolutionCandidate::IdentitySwap,
    ];
    for row in involution_invariance_scan(f, &candidates)? {
        checks.push(Check::eq(
            &format!("invariant under {}", row.candidate.label()),
            "Some(false)",
            format!("{:?}", row.invariant),
        ));
    }
    Ok(checks)
}

/// Map-file errors surface as input errors inside core callbacks.
pub fn core_error(e: MapIoError) -> surfdyn_core::Error {
    match e {
        MapIoError::Core(c) => c,
        other => surfdyn_core::Error::Input(other.to_string()),
    }
}

fn lambda(r: &AnalysisReport) -> String {
    let dd = &r.dynamical;
    match &dd.lambda_exact {
        Some(l) => format_rational(l),
        None => format!(
            "[{}, {}] ({})",
            crate::report::decimal(&dd.lo, surfdyn_core::number::Rounding::Down),
            crate::report::decimal(&dd.hi, surfdyn_core::number::Rounding::Up),
            crate::report::method_name(dd.method)
        ),
    }
}

fn lambda_sq(r: &AnalysisReport) -> String {
    let ls = &r.lambda_sq;
    let value = match &ls.lambda_sq_exact {
        Some(v) => format_rational(v),
        None => format!(
            "[{}, {}]",
            crate::report::decimal(&ls.lambda_sq_lo, surfdyn_core::number::Rounding::Down),
            crate::report::decimal(&ls.lambda_sq_hi, surfdyn_core::number::Rounding::Up)
        ),
    };
    format!("{value} {} {}", ls.comparison.symbol(), ls.deg_top)
}

fn sequence(r: &AnalysisReport) -> String {
    r.sequence.matrices.iter().map(|m| m[0][0].to_string()).collect::<Vec<_>>().join(", ")
}

fn regularity(r: &AnalysisReport) -> String {
    let g = r.regularity;
    let show = |b: Option<bool>| b.map_or("indeterminate".to_string(), |b| b.to_string());
    format!("({}, {}, {})", g.is_regular_geometric, show(g.lambda_sq_equals_deg), show(g.criterion_consistent))
}

fn radius(r: &AnalysisReport) -> String {
    let rad = &r.spectrum().radius;
    match &rad.rho_exact {
        Some(q) => format_rational(q),
        None => format!("[{}, {}]", format_rational(&rad.lo), format_rational(&rad.hi)),
    }
}

/// The exact Perron vector scaled so that its first nonzero entry is 1.
fn normalized_perron(r: &AnalysisReport) -> Option<Vec<Rational>> {
    let PerronEntries::Exact(v) = &r.spectrum().perron.entries else {
        return None;
    };
    let lead = v.iter().find(|x| **x != rat(0))?.clone();
    Some(v.iter().map(|x| x / &lead).collect())
}

fn perron(r: &AnalysisReport) -> String {
    let cert = if r.spectrum().perron.cone_certified { "cone-certified" } else { "not certified" };
    match normalized_perron(r) {
        Some(v) => format!("({}) {cert}", v.iter().map(format_rational).collect::<Vec<_>>().join(", ")),
        None => format!("interval entries {cert}"),
    }
}

fn perron_square(r: &AnalysisReport) -> String {
    match normalized_perron(r) {
        Some(v) => format_rational(&lattice_of(r.surface).pairing(&v, &v)),
        None => "-".into(),
    }
}

fn rank_one(r: &AnalysisReport) -> String {
    let show = r.rank_one.trace_identity_holds.map_or("n/a".to_string(), |b| b.to_string());
    format!("({}, {show})", r.rank_one.is_rank_one)
}

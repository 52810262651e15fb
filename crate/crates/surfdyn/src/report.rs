//! Report serialization: JSON, a plain ASCII table, and degree-sequence CSV.
//!
//! Decimals are written with 15 significant digits. Lower ends of intervals
//! round down and upper ends round up, so a printed interval still contains
//! the exact one.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use surfdyn_core::dynamics::{AnalysisReport, DegreeMethod, DegreeSequence};
use surfdyn_core::number::{format_rational, nth_root_upper, to_significant, Rounding};
use surfdyn_core::spectral::PerronEntries;
use surfdyn_core::spectral::SpectralResult;
use surfdyn_core::{Rational, Surface};

const DIGITS: u32 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
    Csv,
}

pub fn decimal(q: &Rational, mode: Rounding) -> String {
    to_significant(q, DIGITS, mode)
}

fn interval(lo: &Rational, hi: &Rational) -> [String; 2] {
    [decimal(lo, Rounding::Down), decimal(hi, Rounding::Up)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusJson {
    pub exact: Option<String>,
    pub interval: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerronJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<Vec<[String; 2]>>,
    pub cone_certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaSquaredJson {
    pub lambda_sq_exact: Option<String>,
    pub lambda_sq_interval: [String; 2],
    pub deg_top: u64,
    pub comparison: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub pullback_square: String,
    pub degree_times_h_square: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
}

/// The serialized form of an [`AnalysisReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub surface: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebraic_degree: Option<u32>,
    /// Row `i` is the bidegree of factor `i`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidegree_matrix: Option<Vec<Vec<u32>>>,
    pub pullback_matrix: Vec<Vec<i64>>,
    /// Ascending coefficients.
    pub char_poly: Vec<i64>,
    pub spectral_radius: RadiusJson,
    pub perron_vector: PerronJson,
    pub lambda_exact: Option<String>,
    pub lambda_interval: [String; 2],
    pub lambda_method: String,
    pub lambda_point_estimate: String,
    pub empirical_c: Option<String>,
    pub deg_top: u64,
    pub lambda_sq_vs_deg: LambdaSquaredJson,
    pub is_regular_geometric: bool,
    pub lambda_sq_equals_deg: Option<bool>,
    #[serde(rename = "thm13_consistent")]
    pub criterion_consistent: Option<bool>,
    pub rank_f_star: usize,
    pub trace_f_star: i64,
    pub rank_one_trace_identity: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection_formula: Option<ProjectionJson>,
    pub entropy_upper_bound_log: String,
    pub degree_sequence: Vec<SequenceEntry>,
    pub stability_verified_up_to: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated: Option<String>,
}

fn perron_json(s: &SpectralResult) -> PerronJson {
    let (exact, interval_entries) = match &s.perron.entries {
        PerronEntries::Exact(v) => (Some(v.iter().map(format_rational).collect()), None),
        PerronEntries::Interval(v) => (None, Some(v.iter().map(|(lo, hi)| interval(lo, hi)).collect())),
    };
    PerronJson { exact, interval: interval_entries, cone_certified: s.perron.cone_certified }
}

fn small(i: &surfdyn_core::Integer) -> i64 {
    i64::try_from(i).expect("pullback data fits in i64")
}

impl ReportJson {
    pub fn from_report(r: &AnalysisReport) -> Self {
        let spec = r.spectrum();
        let radius = &spec.radius;
        let dd = &r.dynamical;
        let (algebraic_degree, bidegree_matrix) = match r.surface {
            Surface::P2 => (Some(r.pullback_matrix[0][0] as u32), None),
            Surface::P1xP1 => {
                let m = &r.pullback_matrix;
                (None, Some(vec![vec![m[0][0] as u32, m[1][0] as u32], vec![m[0][1] as u32, m[1][1] as u32]]))
            }
        };
        let ls = &r.lambda_sq;
        ReportJson {
            surface: r.surface.name().into(),
            algebraic_degree,
            bidegree_matrix,
            pullback_matrix: r.pullback_matrix.clone(),
            char_poly: radius.char_poly.iter().map(small).collect(),
            spectral_radius: RadiusJson {
                exact: radius.rho_exact.as_ref().map(format_rational),
                interval: interval(&radius.lo, &radius.hi),
            },
            perron_vector: perron_json(spec),
            lambda_exact: dd.lambda_exact.as_ref().map(format_rational),
            lambda_interval: interval(&dd.lo, &dd.hi),
            lambda_method: method_name(dd.method).into(),
            lambda_point_estimate: decimal(&dd.point_estimate.1, Rounding::Nearest),
            empirical_c: dd.empirical_c.as_ref().map(|c| decimal(c, Rounding::Up)),
            deg_top: r.deg_top,
            lambda_sq_vs_deg: LambdaSquaredJson {
                lambda_sq_exact: ls.lambda_sq_exact.as_ref().map(format_rational),
                lambda_sq_interval: interval(&ls.lambda_sq_lo, &ls.lambda_sq_hi),
                deg_top: ls.deg_top,
                comparison: ls.comparison.symbol().into(),
            },
            is_regular_geometric: r.regularity.is_regular_geometric,
            lambda_sq_equals_deg: r.regularity.lambda_sq_equals_deg,
            criterion_consistent: r.regularity.criterion_consistent,
            rank_f_star: spec.rank,
            trace_f_star: small(&spec.trace),
            rank_one_trace_identity: r.rank_one.trace_identity_holds,
            projection_formula: r.projection.as_ref().map(|p| ProjectionJson {
                pullback_square: format_rational(&p.pullback_square),
                degree_times_h_square: format_rational(&p.degree_times_h_square),
                holds: p.holds,
            }),
            entropy_upper_bound_log: r.entropy_bound.clone(),
            degree_sequence: sequence_entries(&r.sequence),
            stability_verified_up_to: r.sequence.stable_up_to,
            truncated: r.sequence.truncated.as_ref().map(|e| e.to_string()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn method_name(m: DegreeMethod) -> &'static str {
    match m {
        DegreeMethod::SpectralStable => "spectral-stable",
        DegreeMethod::SequenceOnly => "sequence-only",
    }
}

fn sequence_entries(seq: &DegreeSequence) -> Vec<SequenceEntry> {
    seq.matrices
        .iter()
        .enumerate()
        .map(|(i, m)| match seq.surface {
            Surface::P2 => SequenceEntry { n: i + 1, degree: Some(m[0][0]), matrix: None },
            Surface::P1xP1 => SequenceEntry { n: i + 1, degree: None, matrix: Some(m.clone()) },
        })
        .collect()
}

/// Degree-sequence CSV. `lambda_upper_n` is the best certified upper bound
/// `min_(k <= n) s_k^(1/k)` available after `n` iterates.
pub fn sequence_csv(seq: &DegreeSequence) -> String {
    let mut out = String::from("n,d11,d12,d21,d22,lambda_upper_n\n");
    let mut best: Option<Rational> = None;
    for (i, (m, s)) in seq.matrices.iter().zip(seq.intersection_numbers()).enumerate() {
        let bound = nth_root_upper(&s, i as u32 + 1);
        let bound = match best.take() {
            Some(b) if b < bound => b,
            _ => bound,
        };
        let cells = match seq.surface {
            Surface::P2 => format!("{},,,", m[0][0]),
            Surface::P1xP1 => format!("{},{},{},{}", m[0][0], m[0][1], m[1][0], m[1][1]),
        };
        let _ = writeln!(out, "{},{},{}", i + 1, cells, decimal(&bound, Rounding::Up));
        best = Some(bound);
    }
    out
}

fn show_option<T: ToString>(v: &Option<T>, none: &str) -> String {
    v.as_ref().map_or_else(|| none.to_string(), T::to_string)
}

fn show_matrix(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", join(r))).collect();
    format!("[{}]", rows.join(", "))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Fixed-width ASCII table.
pub fn human_table(r: &AnalysisReport) -> String {
    let j = ReportJson::from_report(r);
    let mut rows: Vec<(&str, String)> = vec![("surface", j.surface.clone())];
    if let Some(d) = j.algebraic_degree {
        rows.push(("algebraic degree", d.to_string()));
    }
    if let Some(b) = &j.bidegree_matrix {
        let b: Vec<Vec<i64>> = b.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        rows.push(("bidegrees", show_matrix(&b)));
    }
    rows.push(("pullback matrix", show_matrix(&j.pullback_matrix)));
    rows.push(("char poly (ascending)", format!("[{}]", join(&j.char_poly))));
    let rho = match &j.spectral_radius.exact {
        Some(e) => e.clone(),
        None => format!("[{}, {}]", j.spectral_radius.interval[0], j.spectral_radius.interval[1]),
    };
    rows.push(("spectral radius", rho));
    let v = match (&j.perron_vector.exact, &j.perron_vector.interval) {
        (Some(e), _) => format!("({})", e.join(", ")),
        (None, Some(iv)) => {
            format!("({})", iv.iter().map(|[a, b]| format!("[{a}, {b}]")).collect::<Vec<_>>().join(", "))
        }
        _ => "-".into(),
    };
    let cert = if j.perron_vector.cone_certified { "cone-certified" } else { "not certified" };
    rows.push(("perron vector", format!("{v} {cert}")));
    rows.push(("rank / trace of f*", format!("{} / {}", j.rank_f_star, j.trace_f_star)));
    let lambda = match &j.lambda_exact {
        Some(l) => l.clone(),
        None => format!("[{}, {}]", j.lambda_interval[0], j.lambda_interval[1]),
    };
    rows.push(("dynamical degree", format!("{lambda} ({})", j.lambda_method)));
    rows.push(("last root estimate", j.lambda_point_estimate.clone()));
    rows.push(("empirical C", show_option(&j.empirical_c, "-")));
    rows.push(("topological degree", j.deg_top.to_string()));
    let ls = &j.lambda_sq_vs_deg;
    let sq = match &ls.lambda_sq_exact {
        Some(e) => e.clone(),
        None => format!("[{}, {}]", ls.lambda_sq_interval[0], ls.lambda_sq_interval[1]),
    };
    rows.push(("lambda^2 vs deg", format!("{sq} {} {}", ls.comparison, ls.deg_top)));
    rows.push(("regular (base locus)", j.is_regular_geometric.to_string()));
    rows.push(("lambda^2 = deg", show_option(&j.lambda_sq_equals_deg, "indeterminate")));
    rows.push(("criterion consistent", show_option(&j.criterion_consistent, "indeterminate")));
    if j.is_regular_geometric && j.criterion_consistent == Some(false) {
        rows.push(("note", "regular, but lambda^2 differs from deg".into()));
    }
    rows.push(("rank-one trace identity", show_option(&j.rank_one_trace_identity, "n/a")));
    if let Some(p) = &j.projection_formula {
        rows.push(("projection formula", format!("{} = {}: {}", p.pullback_square, p.degree_times_h_square, p.holds)));
    }
    rows.push(("entropy bound (log)", j.entropy_upper_bound_log.clone()));
    let seq: Vec<String> = j
        .degree_sequence
        .iter()
        .map(|e| match (&e.degree, &e.matrix) {
            (Some(d), _) => d.to_string(),
            (None, Some(m)) => show_matrix(m),
            _ => "?".into(),
        })
        .collect();
    rows.push(("degree sequence", seq.join(", ")));
    rows.push(("stable up to", j.stability_verified_up_to.to_string()));
    if let Some(t) = &j.truncated {
        rows.push(("truncated", t.clone()));
    }
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0) + 2;
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}{v}");
    }
    out
}

pub fn emit_report(r: &AnalysisReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => human_table(r),
        ReportFormat::Json => ReportJson::from_report(r).to_json() + "\n",
        ReportFormat::Csv => sequence_csv(&r.sequence),
    }
}

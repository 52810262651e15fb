//! Degree sequences, dynamical and topological degree, and the reports
//! built on top of them.

mod fiber;
mod scan;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::{ln, nth_root, nth_root_upper, to_significant, Rational, Rounding};
use crate::ratmap::{lattice_of, RationalSelfMap, Surface};
use crate::spectral::{analyze_spectrum, PullbackMatrix, SpectralResult};
use crate::surface::NSLattice;

pub use fiber::{topological_degree, FiberCountConfig};
pub use scan::{
    family_scan, involution_invariance_scan, scaling_family_scan, FamilyRow, FamilyScan, InvarianceRow,
    InvolutionCandidate, ScalingRow,
};

/// Pullback matrices of `f, f^2, ..., f^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    pub surface: Surface,
    /// `matrices[n - 1]` belongs to `f^n`.
    pub matrices: Vec<Vec<Vec<i64>>>,
    /// Requested length.
    pub requested: usize,
    /// Largest `n` such that every `f^k`, `k <= n`, has matrix `M^k`.
    pub stable_up_to: usize,
    /// Set when the sequence stopped early.
    pub truncated: Option<Error>,
}

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Algebraic degrees, for maps of the plane.
    pub fn degrees(&self) -> Option<Vec<i64>> {
        (self.surface == Surface::P2).then(|| self.matrices.iter().map(|m| m[0][0]).collect())
    }

    /// `s_n = H . (f^n)^* H` for `n = 1..len`.
    pub fn intersection_numbers(&self) -> Vec<Rational> {
        let lattice = lattice_of(self.surface);
        let h: Vec<Rational> = lattice.ample().iter().map(|&x| Rational::from_integer(x.into())).collect();
        self.matrices.iter().map(|m| lattice.pairing(&h, &mat_vec(m, &h))).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.truncated.is_none() && self.matrices.len() == self.requested
    }
}

fn mat_vec(m: &[Vec<i64>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(v).map(|(&a, b)| Rational::from_integer(a.into()) * b).sum()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n).map(|j| (0..n).try_fold(0i64, |acc, k| acc.checked_add(a[i][k].checked_mul(b[k][j])?))).collect()
        })
        .collect()
}

pub fn degree_sequence(f: &RationalSelfMap, n: usize, budget: u32) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::input("sequence length must be at least 1"));
    }
    let (iterates, err) = f.iterate_partial(n, budget);
    let matrices: Vec<Vec<Vec<i64>>> = iterates.iter().map(|g| g.pullback_matrix()).collect();
    let mut stable_up_to = 0;
    if let Some(m1) = matrices.first() {
        let mut power = m1.clone();
        stable_up_to = 1;
        for m in &matrices[1..] {
            match mat_mul(&power, m1) {
                Some(p) if &p == m => {
                    power = p;
                    stable_up_to += 1;
                }
                _ => break,
            }
        }
    }
    Ok(DegreeSequence { surface: f.surface(), matrices, requested: n, stable_up_to, truncated: err })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeMethod {
    /// Stability verified over the whole sequence; the value is the
    /// spectral radius of the pullback matrix.
    SpectralStable,
    /// Only the certified upper bound `min_n s_n^(1/n)` is available.
    SequenceOnly,
}

#[derive(Clone, Debug)]
pub struct DynamicalDegree {
    pub lambda_exact: Option<Rational>,
    pub lo: Rational,
    pub hi: Rational,
    pub method: DegreeMethod,
    /// Bracket of `s_N^(1/N)` for the last computed `N`.
    pub point_estimate: (Rational, Rational),
    /// `max_n max(s_n / rho^n, rho^n / s_n)` over the computed `n`.
    pub empirical_c: Option<Rational>,
    /// Spectral data of the pullback matrix of `f`.
    pub spectrum: SpectralResult,
}

pub fn pullback_of(surface: Surface, m: &[Vec<i64>]) -> Result<PullbackMatrix> {
    PullbackMatrix::from_i64(m, lattice_of(surface))
}

pub fn dynamical_degree(seq: &DegreeSequence, tol: &Rational) -> Result<DynamicalDegree> {
    let Some(m1) = seq.matrices.first() else {
        return Err(Error::Precondition("empty degree sequence".into()));
    };
    let spectrum = analyze_spectrum(&pullback_of(seq.surface, m1)?, tol)?;
    let s = seq.intersection_numbers();
    let n_last = s.len() as u32;
    let point_estimate = nth_root(&s[s.len() - 1], n_last);

    let radius = &spectrum.radius;
    let (rho_lo, rho_hi) = (radius.lo.clone(), radius.hi.clone());
    let empirical_c = (rho_lo > Rational::zero() && s.iter().all(|sn| !sn.is_zero())).then(|| {
        s.iter().enumerate().fold(Rational::one(), |c, (i, sn)| {
            let up = sn / num_traits::pow(rho_lo.clone(), i + 1);
            let down = num_traits::pow(rho_hi.clone(), i + 1) / sn;
            c.max(up).max(down)
        })
    });

    if seq.is_complete() && seq.stable_up_to == seq.len() {
        return Ok(DynamicalDegree {
            lambda_exact: radius.rho_exact.clone(),
            lo: rho_lo,
            hi: rho_hi,
            method: DegreeMethod::SpectralStable,
            point_estimate,
            empirical_c,
            spectrum,
        });
    }
    // submultiplicativity: lambda <= s_n^(1/n) for every n
    let hi = s.iter().enumerate().map(|(i, sn)| nth_root_upper(sn, i as u32 + 1)).min().expect("nonempty");
    Ok(DynamicalDegree {
        lambda_exact: None,
        lo: Rational::one(),
        hi,
        method: DegreeMethod::SequenceOnly,
        point_estimate,
        empirical_c,
        spectrum,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Indeterminate,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Less => "<",
            Comparison::Equal => "=",
            Comparison::Greater => ">",
            Comparison::Indeterminate => "?",
        }
    }
}

/// `lambda^2` against the topological degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSquared {
    pub lambda_sq_exact: Option<Rational>,
    pub lambda_sq_lo: Rational,
    pub lambda_sq_hi: Rational,
    pub deg_top: u64,
    pub comparison: Comparison,
}

impl LambdaSquared {
    /// A `<` result contradicts the inequality for surjective maps.
    pub fn is_anomalous(&self) -> bool {
        self.comparison == Comparison::Less
    }
}

pub fn log_concavity_check(dd: &DynamicalDegree, deg_top: u64) -> LambdaSquared {
    let d = Rational::from_integer(deg_top.into());
    let sq = |x: &Rational| x * x;
    let (lo, hi) = (sq(&dd.lo), sq(&dd.hi));
    let comparison = if let Some(l) = &dd.lambda_exact {
        match sq(l).cmp(&d) {
            core::cmp::Ordering::Less => Comparison::Less,
            core::cmp::Ordering::Equal => Comparison::Equal,
            core::cmp::Ordering::Greater => Comparison::Greater,
        }
    } else if lo > d {
        Comparison::Greater
    } else if hi < d {
        Comparison::Less
    } else {
        Comparison::Indeterminate
    };
    LambdaSquared {
        lambda_sq_exact: dd.lambda_exact.as_ref().map(sq),
        lambda_sq_lo: lo,
        lambda_sq_hi: hi,
        deg_top,
        comparison,
    }
}

/// The geometric side (empty base locus) next to the numeric side
/// (`lambda^2 = deg`), computed independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub is_regular_geometric: bool,
    pub lambda_sq_equals_deg: Option<bool>,
    /// `is_regular_geometric` iff `lambda_sq_equals_deg`.
    pub criterion_consistent: Option<bool>,
}

pub fn regularity_report(f: &RationalSelfMap, cmp: &LambdaSquared) -> Result<RegularityReport> {
    let geometric = f.is_regular()?;
    let numeric = match cmp.comparison {
        Comparison::Equal => Some(true),
        Comparison::Less | Comparison::Greater => Some(false),
        Comparison::Indeterminate => None,
    };
    Ok(RegularityReport {
        is_regular_geometric: geometric,
        lambda_sq_equals_deg: numeric,
        criterion_consistent: numeric.map(|n| n == geometric),
    })
}

/// `max(log lambda, log deg)` to 15 significant digits. An irrational or
/// bracketed `lambda` enters through its upper bound, rounded up.
pub fn entropy_bound(dd: &DynamicalDegree, deg_top: u64) -> String {
    let d = Rational::from_integer(deg_top.max(1).into());
    match &dd.lambda_exact {
        Some(l) => to_significant(&ln(&l.clone().max(d)), 15, Rounding::Nearest),
        None => {
            // enough digits of lambda for 15 digits of its logarithm
            let mut radius = dd.spectrum.radius.clone();
            let hi = if dd.method == DegreeMethod::SpectralStable {
                radius.refine(&Rational::new(1.into(), crate::number::pow10(24)));
                radius.hi
            } else {
                dd.hi.clone()
            };
            let arg = hi.clone().max(d);
            let mode = if arg == hi { Rounding::Up } else { Rounding::Nearest };
            to_significant(&ln(&arg), 15, mode)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOneReport {
    pub is_rank_one: bool,
    /// `lambda = trace`, decided only for rank one with exact `lambda`.
    pub trace_identity_holds: Option<bool>,
}

pub fn rank_one_report(dd: &DynamicalDegree) -> RankOneReport {
    let is_rank_one = dd.spectrum.rank == 1;
    let trace = Rational::from_integer(dd.spectrum.trace.clone());
    let trace_identity_holds = match (&dd.lambda_exact, is_rank_one) {
        (Some(l), true) => Some(l == &trace),
        _ => None,
    };
    RankOneReport { is_rank_one, trace_identity_holds }
}

/// `(f^* H)^2` against `deg_top * H^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionCheck {
    pub pullback_square: Rational,
    pub degree_times_h_square: Rational,
    pub holds: bool,
}

pub fn projection_formula_check(f: &RationalSelfMap, deg_top: u64) -> ProjectionCheck {
    let lattice: Arc<NSLattice> = lattice_of(f.surface());
    let h: Vec<Rational> = lattice.ample().iter().map(|&x| Rational::from_integer(x.into())).collect();
    let fh = mat_vec(&f.pullback_matrix(), &h);
    let lhs = lattice.pairing(&fh, &fh);
    let rhs = Rational::from_integer(deg_top.into()) * lattice.pairing(&h, &h);
    ProjectionCheck { holds: lhs == rhs, pullback_square: lhs, degree_times_h_square: rhs }
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub iterations: usize,
    pub budget: u32,
    pub tolerance: Rational,
    pub fiber: FiberCountConfig,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            iterations: 5,
            budget: crate::ratmap::DEFAULT_DEGREE_BUDGET,
            tolerance: crate::spectral::default_tolerance(),
            fiber: FiberCountConfig::default(),
        }
    }
}

/// Everything computed for one map.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub surface: Surface,
    pub pullback_matrix: Vec<Vec<i64>>,
    pub sequence: DegreeSequence,
    pub dynamical: DynamicalDegree,
    pub deg_top: u64,
    pub lambda_sq: LambdaSquared,
    pub regularity: RegularityReport,
    pub rank_one: RankOneReport,
    /// Present for maps without base points.
    pub projection: Option<ProjectionCheck>,
    pub entropy_bound: String,
}

impl AnalysisReport {
    pub fn spectrum(&self) -> &SpectralResult {
        &self.dynamical.spectrum
    }
}

pub fn analyze(f: &RationalSelfMap, cfg: &AnalysisConfig) -> Result<AnalysisReport> {
    let sequence = degree_sequence(f, cfg.iterations, cfg.budget)?;
    let dynamical = dynamical_degree(&sequence, &cfg.tolerance)?;
    let deg_top = topological_degree(f, &cfg.fiber)?;
    let lambda_sq = log_concavity_check(&dynamical, deg_top);
    let regularity = regularity_report(f, &lambda_sq)?;
    let rank_one = rank_one_report(&dynamical);
    let projection = regularity.is_regular_geometric.then(|| projection_formula_check(f, deg_top));
    let entropy_bound = entropy_bound(&dynamical, deg_top);
    Ok(AnalysisReport {
        surface: f.surface(),
        pullback_matrix: f.pullback_matrix(),
        sequence,
        dynamical,
        deg_top,
        lambda_sq,
        regularity,
        rank_one,
        projection,
        entropy_bound,
    })
}

#[cfg(test)]
mod tests;

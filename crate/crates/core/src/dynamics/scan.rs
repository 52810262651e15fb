//! Scans over a one-parameter family and over candidate involutions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::number::{format_rational, Rational};
use crate::ratmap::{MoebiusInvolution, RationalSelfMap, Surface};

use super::{topological_degree, FiberCountConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRow {
    pub value: Rational,
    pub base_scheme_length: Option<u64>,
    pub pullback_matrix: Option<Vec<Vec<i64>>>,
    pub deg_top: Option<u64>,
    /// Some factor lost a common component at this value.
    pub degenerate: bool,
    pub error: Option<Error>,
}

impl FamilyRow {
    fn counts(&self) -> bool {
        !self.degenerate && self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyScan {
    pub rows: Vec<FamilyRow>,
    /// Over the rows that are neither degenerate nor failed.
    pub length_constant: bool,
    pub matrix_constant: bool,
}

pub fn family_scan<F>(build: F, values: &[Rational], fiber: Option<&FiberCountConfig>) -> Result<FamilyScan>
where
    F: Fn(&Rational) -> Result<RationalSelfMap>,
{
    if values.is_empty() {
        return Err(Error::input("no parameter values given"));
    }
    let rows: Vec<FamilyRow> = values.iter().map(|v| family_row(&build, v, fiber)).collect();
    let good: Vec<&FamilyRow> = rows.iter().filter(|r| r.counts()).collect();
    let all_same = |key: &dyn Fn(&FamilyRow) -> String| good.windows(2).all(|w| key(w[0]) == key(w[1]));
    let length_constant = all_same(&|r| format!("{:?}", r.base_scheme_length));
    let matrix_constant = all_same(&|r| format!("{:?}", r.pullback_matrix));
    Ok(FamilyScan { rows, length_constant, matrix_constant })
}

fn family_row<F>(build: &F, value: &Rational, fiber: Option<&FiberCountConfig>) -> FamilyRow
where
    F: Fn(&Rational) -> Result<RationalSelfMap>,
{
    let mut row = FamilyRow {
        value: value.clone(),
        base_scheme_length: None,
        pullback_matrix: None,
        deg_top: None,
        degenerate: false,
        error: None,
    };
    let f = match build(value) {
        Ok(f) => f,
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    };
    row.degenerate = f.cancelled_degrees().iter().any(|&d| d > 0);
    row.pullback_matrix = Some(f.pullback_matrix());
    let result = (|| -> Result<()> {
        if f.surface() == Surface::P1xP1 {
            row.base_scheme_length = Some(f.base_scheme_length_p1xp1()?);
        }
        if let Some(cfg) = fiber {
            row.deg_top = Some(topological_degree(&f, cfg)?);
        }
        Ok(())
    })();
    row.error = result.err();
    row
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvolutionCandidate {
    /// `A(w) = K / w`.
    Reciprocal(Rational),
    /// `A(w) = L w`.
    Scaling(Rational),
    /// `A` the identity, so the involution swaps the two factors.
    IdentitySwap,
}

impl InvolutionCandidate {
    pub fn involution(&self) -> Result<MoebiusInvolution> {
        match self {
            InvolutionCandidate::Reciprocal(k) => MoebiusInvolution::reciprocal(k.clone()),
            InvolutionCandidate::Scaling(l) => MoebiusInvolution::scaling(l.clone()),
            InvolutionCandidate::IdentitySwap => Ok(MoebiusInvolution::swap()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            InvolutionCandidate::Reciprocal(k) => format!("A(w) = {}/w", grouped(k)),
            InvolutionCandidate::Scaling(l) => format!("A(w) = {}*w", grouped(l)),
            InvolutionCandidate::IdentitySwap => "A(w) = w".into(),
        }
    }
}

fn grouped(q: &Rational) -> String {
    if q.is_integer() {
        format_rational(q)
    } else {
        format!("({})", format_rational(q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceRow {
    pub candidate: InvolutionCandidate,
    /// `None` when the candidate is singular.
    pub invariant: Option<bool>,
    pub note: Option<String>,
}

/// Whether `f` commutes with each candidate involution.
pub fn involution_invariance_scan(
    f: &RationalSelfMap,
    candidates: &[InvolutionCandidate],
) -> Result<Vec<InvarianceRow>> {
    if f.surface() != Surface::P1xP1 {
        return Err(Error::SurfaceMismatch);
    }
    candidates
        .iter()
        .map(|c| match c.involution() {
            Err(Error::SingularMatrix) => Ok(InvarianceRow {
                candidate: c.clone(),
                invariant: None,
                note: Some("singular candidate skipped".into()),
            }),
            Err(e) => Err(e),
            Ok(iota) => {
                let twisted = f.twist_by_involution(&iota)?;
                Ok(InvarianceRow { candidate: c.clone(), invariant: Some(twisted.maps_equal(f)?), note: None })
            }
        })
        .collect()
}

/// Scaling candidates `A(w) = L w` on a family `f_eps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingRow {
    pub l: Rational,
    /// `L^2 + eps`; invariance needs this to vanish.
    pub obstruction: Rational,
    /// Invariance of `f_eps` itself.
    pub invariant_at_eps: Option<bool>,
    /// Invariance of `f_(-L^2)`.
    pub invariant_at_minus_l_sq: Option<bool>,
    pub note: Option<String>,
}

pub fn scaling_family_scan<F>(build: F, eps: &Rational, ls: &[Rational]) -> Result<Vec<ScalingRow>>
where
    F: Fn(&Rational) -> Result<RationalSelfMap>,
{
    if ls.is_empty() {
        return Err(Error::input("no scaling values given"));
    }
    let f = build(eps)?;
    ls.iter()
        .map(|l| {
            let cand = [InvolutionCandidate::Scaling(l.clone())];
            let at_eps = involution_invariance_scan(&f, &cand)?.remove(0);
            let special = -(l * l);
            let at_special = involution_invariance_scan(&build(&special)?, &cand)?.remove(0);
            Ok(ScalingRow {
                l: l.clone(),
                obstruction: l * l + eps,
                invariant_at_eps: at_eps.invariant,
                invariant_at_minus_l_sq: at_special.invariant,
                note: at_eps.note,
            })
        })
        .collect()
}

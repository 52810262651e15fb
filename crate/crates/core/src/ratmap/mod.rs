//! Rational self-maps of `P2` and `P1 x P1`.

mod regular;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{gcd_of_numerators, lcm_of_denominators, Integer, Rational};
use crate::poly::{parse_expression, poly_gcd_many, Grading, SparsePoly, Variables};
use crate::surface::NSLattice;

pub use regular::has_common_zero;

/// Default cap on the total degree of any factor of an iterate.
pub const DEFAULT_DEGREE_BUDGET: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Surface {
    P2,
    P1xP1,
}

impl Surface {
    /// `x, y, z` or `t0, t1, w0, w1`.
    pub fn variables(self) -> Variables {
        match self {
            Surface::P2 => Variables::new(["x", "y", "z"]),
            Surface::P1xP1 => Variables::new(["t0", "t1", "w0", "w1"]),
        }
    }

    pub fn lattice(self) -> NSLattice {
        match self {
            Surface::P2 => NSLattice::p2(),
            Surface::P1xP1 => NSLattice::p1xp1(),
        }
    }

    /// Number of factors and components per factor.
    pub fn shape(self) -> &'static [usize] {
        match self {
            Surface::P2 => &[3],
            Surface::P1xP1 => &[2, 2],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Surface::P2 => "P2",
            Surface::P1xP1 => "P1xP1",
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Degree data of one factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorDegree {
    Homogeneous(u32),
    Bihomogeneous(u32, u32),
}

impl FactorDegree {
    pub fn total(self) -> u32 {
        match self {
            FactorDegree::Homogeneous(d) => d,
            FactorDegree::Bihomogeneous(a, b) => a + b,
        }
    }

    fn grading(self) -> Grading {
        match self {
            FactorDegree::Homogeneous(d) => Grading::Homogeneous(d),
            FactorDegree::Bihomogeneous(a, b) => Grading::Bihomogeneous { split: 2, degrees: (a, b) },
        }
    }
}

/// A map in normalized form: per factor the components have no common
/// nonconstant factor, integer coprime coefficients, and the first nonzero
/// component has a positive leading coefficient.
#[derive(Clone)]
pub struct RationalSelfMap {
    surface: Surface,
    factors: Vec<Vec<SparsePoly>>,
    degrees: Vec<FactorDegree>,
    cancelled: Vec<u32>,
}

impl fmt::Debug for RationalSelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.surface)?;
        let mut l = f.debug_list();
        for factor in &self.factors {
            l.entry(&factor.iter().map(|p| p.to_string()).collect::<Vec<_>>());
        }
        l.finish()
    }
}

impl PartialEq for RationalSelfMap {
    /// Equality of normalized representatives.
    fn eq(&self, other: &Self) -> bool {
        self.surface == other.surface && self.factors == other.factors
    }
}

impl RationalSelfMap {
    /// Checks gradings, cancels the common factor of each factor's
    /// components and fixes scaling and sign.
    pub fn normalize(surface: Surface, raw: Vec<Vec<SparsePoly>>) -> Result<Self> {
        let shape = surface.shape();
        if raw.len() != shape.len() || raw.iter().zip(shape).any(|(f, &k)| f.len() != k) {
            return Err(Error::input("wrong number of components for the surface"));
        }
        let vars = surface.variables();
        let mut factors = Vec::with_capacity(raw.len());
        let mut degrees = Vec::with_capacity(raw.len());
        let mut cancelled = Vec::with_capacity(raw.len());
        let mut index = 0;
        for (fi, comps) in raw.into_iter().enumerate() {
            let mut comps: Vec<SparsePoly> = comps
                .into_iter()
                .map(|p| {
                    if p.vars() == &vars {
                        p.rename(&vars)
                    } else {
                        Err(Error::input("components use the wrong variables"))
                    }
                })
                .collect::<Result<_>>()?;
            if comps.iter().all(|p| p.is_zero()) {
                return Err(Error::ZeroFactor(fi));
            }
            let deg = common_degree(surface, &comps, index)?;
            index += comps.len();
            let nonzero: Vec<&SparsePoly> = comps.iter().filter(|p| !p.is_zero()).collect();
            let g = poly_gcd_many(&nonzero)?;
            let mut deg = deg;
            let gdeg = g.total_degree().unwrap_or(0);
            if gdeg > 0 {
                for p in comps.iter_mut() {
                    *p = p.div_exact(&g).expect("gcd divides every component");
                }
                deg = match (surface, deg) {
                    (Surface::P2, FactorDegree::Homogeneous(d)) => FactorDegree::Homogeneous(d - gdeg),
                    (_, FactorDegree::Bihomogeneous(a, b)) => {
                        let (ga, gb) = g.bihomogeneous_degrees(2).expect("factor of a bihomogeneous form");
                        FactorDegree::Bihomogeneous(a - ga, b - gb)
                    }
                    _ => unreachable!(),
                };
            }
            scale_to_primitive(&mut comps);
            for p in comps.iter_mut() {
                let owned = core::mem::replace(p, SparsePoly::zero(&vars));
                *p = owned.with_grading(deg.grading())?;
            }
            factors.push(comps);
            degrees.push(deg);
            cancelled.push(gdeg);
        }
        Ok(RationalSelfMap { surface, factors, degrees, cancelled })
    }

    /// Parses and normalizes expression strings, one slice per factor.
    pub fn from_expressions<S: AsRef<str>>(
        surface: Surface,
        factors: &[&[S]],
        params: &BTreeMap<String, Rational>,
    ) -> Result<Self> {
        let vars = surface.variables();
        let raw = factors
            .iter()
            .map(|f| f.iter().map(|s| parse_expression(s.as_ref(), &vars, params)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::normalize(surface, raw)
    }

    pub fn identity(surface: Surface) -> Self {
        let vars = surface.variables();
        let v = |i| SparsePoly::var(&vars, i);
        let raw = match surface {
            Surface::P2 => vec![vec![v(0), v(1), v(2)]],
            Surface::P1xP1 => vec![vec![v(0), v(1)], vec![v(2), v(3)]],
        };
        Self::normalize(surface, raw).expect("identity is well formed")
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn factors(&self) -> &[Vec<SparsePoly>] {
        &self.factors
    }

    pub fn factor_degrees(&self) -> &[FactorDegree] {
        &self.degrees
    }

    /// Total degree of the common factor removed from each factor by the
    /// last normalization.
    pub fn cancelled_degrees(&self) -> &[u32] {
        &self.cancelled
    }

    /// Algebraic degree of a map of `P2`.
    pub fn degree(&self) -> Option<u32> {
        match self.degrees[0] {
            FactorDegree::Homogeneous(d) => Some(d),
            FactorDegree::Bihomogeneous(..) => None,
        }
    }

    /// Largest total degree over the factors.
    pub fn max_factor_degree(&self) -> u32 {
        self.degrees.iter().map(|d| d.total()).max().unwrap_or(0)
    }

    /// Matrix of `f*` on the Néron–Severi group. For `P1 x P1` the column
    /// `j` is the bidegree of factor `j`.
    pub fn pullback_matrix(&self) -> Vec<Vec<i64>> {
        match self.surface {
            Surface::P2 => vec![vec![self.degrees[0].total() as i64]],
            Surface::P1xP1 => {
                let (a1, b1) = bideg(self.degrees[0]);
                let (a2, b2) = bideg(self.degrees[1]);
                vec![vec![a1 as i64, a2 as i64], vec![b1 as i64, b2 as i64]]
            }
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RationalSelfMap) -> Result<Self> {
        if self.surface != g.surface {
            return Err(Error::SurfaceMismatch);
        }
        let images: Vec<SparsePoly> = g.factors.iter().flatten().cloned().collect();
        let mut raw = Vec::with_capacity(self.factors.len());
        for (i, comps) in self.factors.iter().enumerate() {
            let refs: Vec<&SparsePoly> = comps.iter().collect();
            let out = crate::poly::substitute_many(&refs, &images)?;
            if out.iter().all(|p| p.is_zero()) {
                return Err(Error::DegenerateComposition(i));
            }
            raw.push(out);
        }
        Self::normalize(self.surface, raw)
    }

    /// Pullback matrix the composite `self ∘ g` has when nothing cancels.
    fn predicted_degrees(&self, g: &RationalSelfMap) -> Vec<u32> {
        let mf = self.pullback_matrix();
        let mg = g.pullback_matrix();
        let n = mf.len();
        let m: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| mg[i][k] * mf[k][j]).sum()).collect()).collect();
        (0..n).map(|j| (0..n).map(|i| m[i][j] as u32).sum()).collect()
    }

    /// `[f, f^2, ..., f^n]` computed as `f^k = f ∘ f^(k-1)`. On budget
    /// exhaustion the completed prefix is returned together with the error.
    pub fn iterate_partial(&self, n: usize, budget: u32) -> (Vec<RationalSelfMap>, Option<Error>) {
        let mut out: Vec<RationalSelfMap> = Vec::with_capacity(n);
        if n == 0 {
            return (out, Some(Error::input("iteration count must be at least 1")));
        }
        if self.max_factor_degree() > budget {
            return (out, Some(Error::BudgetExceeded { completed: 0, budget }));
        }
        out.push(self.clone());
        while out.len() < n {
            let prev = out.last().expect("nonempty");
            if self.predicted_degrees(prev).iter().any(|&d| d > budget) {
                let completed = out.len();
                return (out, Some(Error::BudgetExceeded { completed, budget }));
            }
            match self.compose(prev) {
                Ok(next) => out.push(next),
                Err(e) => return (out, Some(e)),
            }
        }
        (out, None)
    }

    pub fn iterate(&self, n: usize, budget: u32) -> Result<Vec<RationalSelfMap>> {
        match self.iterate_partial(n, budget) {
            (v, None) => Ok(v),
            (_, Some(e)) => Err(e),
        }
    }

    /// Per factor, the gcd of the components is constant, so the common
    /// zero set is finite.
    pub fn base_points_finite(&self) -> Result<bool> {
        for comps in &self.factors {
            let nonzero: Vec<&SparsePoly> = comps.iter().filter(|p| !p.is_zero()).collect();
            if !poly_gcd_many(&nonzero)?.is_constant() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Total length of the base scheme of a map of `P1 x P1`: the two
    /// components of a factor of bidegree `(a, b)` meet in `2ab` points.
    pub fn base_scheme_length_p1xp1(&self) -> Result<u64> {
        if self.surface != Surface::P1xP1 {
            return Err(Error::Precondition("base scheme length is defined for P1xP1 maps".to_string()));
        }
        if !self.base_points_finite()? {
            return Err(Error::Precondition("infinite base scheme".to_string()));
        }
        Ok(self
            .degrees
            .iter()
            .map(|&d| {
                let (a, b) = bideg(d);
                2 * a as u64 * b as u64
            })
            .sum())
    }

    /// Empty base locus, decided exactly.
    pub fn is_regular(&self) -> Result<bool> {
        for comps in &self.factors {
            let common = match self.surface {
                Surface::P2 => regular::p2_common_zero(comps)?,
                Surface::P1xP1 => regular::p1xp1_common_zero(comps)?,
            };
            if common {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Projective equality of the component tuples, factor by factor.
    pub fn maps_equal(&self, other: &RationalSelfMap) -> Result<bool> {
        if self.surface != other.surface {
            return Err(Error::SurfaceMismatch);
        }
        for (f, g) in self.factors.iter().zip(&other.factors) {
            for i in 0..f.len() {
                for j in i + 1..f.len() {
                    if &f[i] * &g[j] != &f[j] * &g[i] {
                        return Ok(false);
                    }
                }
            }
            // cross products vanish for a zero tuple too; rule that out
            if g.iter().all(|p| p.is_zero()) != f.iter().all(|p| p.is_zero()) {
                return Ok(false);
            }
            for (a, b) in f.iter().zip(g) {
                if a.is_zero() != b.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `self ∘ ι`.
    pub fn twist_by_involution(&self, iota: &MoebiusInvolution) -> Result<Self> {
        if self.surface != Surface::P1xP1 {
            return Err(Error::SurfaceMismatch);
        }
        self.compose(&iota.to_map())
    }

    /// Values of each factor at a point, `None` for a factor whose
    /// components all vanish there.
    pub fn eval_at(&self, point: &[Rational]) -> Result<Vec<Option<Vec<Rational>>>> {
        self.factors
            .iter()
            .map(|comps| {
                let v: Vec<Rational> = comps.iter().map(|p| p.eval(point)).collect::<Result<_>>()?;
                Ok((!v.iter().all(|x| x.is_zero())).then_some(v))
            })
            .collect()
    }

    /// Factor images flattened to a point of the ambient space, or `None` on
    /// the base locus.
    pub fn apply(&self, point: &[Rational]) -> Result<Option<Vec<Rational>>> {
        let parts = self.eval_at(point)?;
        let mut out = Vec::new();
        for p in parts {
            match p {
                Some(v) => out.extend(v),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }
}

/// Projective equality of two points given factor by factor.
pub fn same_point(surface: Surface, a: &[Rational], b: &[Rational]) -> bool {
    let mut start = 0;
    for &k in surface.shape() {
        let (u, v) = (&a[start..start + k], &b[start..start + k]);
        for i in 0..k {
            for j in i + 1..k {
                if &u[i] * &v[j] != &u[j] * &v[i] {
                    return false;
                }
            }
        }
        start += k;
    }
    true
}

fn bideg(d: FactorDegree) -> (u32, u32) {
    match d {
        FactorDegree::Bihomogeneous(a, b) => (a, b),
        FactorDegree::Homogeneous(d) => (d, 0),
    }
}

fn common_degree(surface: Surface, comps: &[SparsePoly], first_index: usize) -> Result<FactorDegree> {
    let mut deg: Option<FactorDegree> = None;
    for (k, p) in comps.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let index = first_index + k;
        let this = match surface {
            Surface::P2 => p
                .homogeneous_degree()
                .map(FactorDegree::Homogeneous)
                .ok_or(Error::Grading { index, expected: "homogeneous".to_string() })?,
            Surface::P1xP1 => p
                .bihomogeneous_degrees(2)
                .map(|(a, b)| FactorDegree::Bihomogeneous(a, b))
                .ok_or(Error::Grading { index, expected: "bihomogeneous in (t0, t1 | w0, w1)".to_string() })?,
        };
        match deg {
            None => deg = Some(this),
            Some(d) if d == this => {}
            Some(_) => {
                return Err(Error::Grading {
                    index,
                    expected: "of the same degree as the other components".to_string(),
                })
            }
        }
    }
    Ok(deg.expect("at least one nonzero component"))
}

fn scale_to_primitive(comps: &mut [SparsePoly]) {
    let all: Vec<Rational> = comps.iter().flat_map(|p| p.terms().map(|(_, c)| c.clone())).collect();
    let l = lcm_of_denominators(all.iter());
    let scaled: Vec<Rational> = all.iter().map(|c| c * Rational::from_integer(l.clone())).collect();
    let g: Integer = gcd_of_numerators(scaled.iter());
    let mut factor = Rational::new(l, g);
    let first = comps.iter().find(|p| !p.is_zero()).expect("nonzero factor");
    if first.leading_coefficient().is_negative() {
        factor = -factor;
    }
    if !factor.is_one() {
        for p in comps.iter_mut() {
            *p = p.scale(&factor);
        }
    }
}

/// The involution `(t, w) -> (A w, A^-1 t)` of `P1 x P1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusInvolution {
    a: [[Rational; 2]; 2],
}

impl MoebiusInvolution {
    pub fn new(a: [[Rational; 2]; 2]) -> Result<Self> {
        if (&a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(MoebiusInvolution { a })
    }

    /// `A(w) = K / w`.
    pub fn reciprocal(k: Rational) -> Result<Self> {
        Self::new([[Rational::zero(), k], [Rational::one(), Rational::zero()]])
    }

    /// `A(w) = L w`.
    pub fn scaling(l: Rational) -> Result<Self> {
        Self::new([[l, Rational::zero()], [Rational::zero(), Rational::one()]])
    }

    /// `(t, w) -> (w, t)`.
    pub fn swap() -> Self {
        Self::scaling(Rational::one()).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &[[Rational; 2]; 2] {
        &self.a
    }

    /// The involution as a map; `A^-1` is replaced by the adjugate, which
    /// is the same projective transformation.
    pub fn to_map(&self) -> RationalSelfMap {
        let vars = Surface::P1xP1.variables();
        let lin = |c0: &Rational, i0: usize, c1: &Rational, i1: usize| {
            &SparsePoly::var(&vars, i0).scale(c0) + &SparsePoly::var(&vars, i1).scale(c1)
        };
        let a = &self.a;
        let t_block = vec![lin(&a[0][0], 2, &a[0][1], 3), lin(&a[1][0], 2, &a[1][1], 3)];
        let w_block = vec![lin(&a[1][1], 0, &-a[0][1].clone(), 1), lin(&-a[1][0].clone(), 0, &a[0][0], 1)];
        RationalSelfMap::normalize(Surface::P1xP1, vec![t_block, w_block]).expect("invertible linear map")
    }
}

/// Shared lattice for a surface.
pub fn lattice_of(surface: Surface) -> Arc<NSLattice> {
    Arc::new(surface.lattice())
}

#[cfg(test)]
mod tests;

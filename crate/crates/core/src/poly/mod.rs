//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms are kept in a map ordered by the graded lexicographic order on
//! exponent vectors (earlier variables dominate), so the last entry is the
//! leading term. Zero coefficients are never stored.
//!
//! Each polynomial also carries a [`Grading`] tag. Tags are propagated by the
//! arithmetic (degrees add under multiplication, survive addition only when
//! they agree) and can be checked against the terms with
//! [`SparsePoly::satisfies`].

mod certify;
mod gcd;
mod heugcd;
mod linear;
mod modgcd;
mod parse;
mod render;
mod resultant;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{gcd_of_numerators, lcm_of_denominators, Integer, Rational};
use crate::upoly::UPoly;

pub use certify::certify_trivial_gcd;
pub use parse::parse_expression;

/// Ordered list of variable names shared between polynomials.
#[derive(Clone)]
pub struct Variables(Arc<[String]>);

impl Variables {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Variables(names.into_iter().map(Into::into).collect::<Vec<String>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

impl PartialEq for Variables {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Variables {}

impl fmt::Debug for Variables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e.into_boxed_slice())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree_in_range(&self, range: core::ops::Range<usize>) -> u32 {
        self.0[range].iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Declared grading of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grading {
    Ungraded,
    Homogeneous(u32),
    /// Degrees in the variable blocks `[0, split)` and `[split, n)`.
    Bihomogeneous {
        split: usize,
        degrees: (u32, u32),
    },
}

impl Grading {
    fn add(self, other: Grading) -> Grading {
        if self == other {
            self
        } else {
            Grading::Ungraded
        }
    }

    fn mul(self, other: Grading) -> Grading {
        match (self, other) {
            (Grading::Homogeneous(a), Grading::Homogeneous(b)) => Grading::Homogeneous(a + b),
            (
                Grading::Bihomogeneous { split: s, degrees: (a1, b1) },
                Grading::Bihomogeneous { split: t, degrees: (a2, b2) },
            ) if s == t => Grading::Bihomogeneous { split: s, degrees: (a1 + a2, b1 + b2) },
            _ => Grading::Ungraded,
        }
    }

    fn pow(self, e: u32) -> Grading {
        match self {
            Grading::Homogeneous(d) => Grading::Homogeneous(d * e),
            Grading::Bihomogeneous { split, degrees: (a, b) } => {
                Grading::Bihomogeneous { split, degrees: (a * e, b * e) }
            }
            Grading::Ungraded => Grading::Ungraded,
        }
    }

    /// Total degree implied by the tag.
    pub fn total(&self) -> Option<u32> {
        match *self {
            Grading::Ungraded => None,
            Grading::Homogeneous(d) => Some(d),
            Grading::Bihomogeneous { degrees: (a, b), .. } => Some(a + b),
        }
    }
}

#[derive(Clone)]
pub struct SparsePoly {
    vars: Variables,
    terms: BTreeMap<Monomial, Rational>,
    grading: Grading,
}

impl PartialEq for SparsePoly {
    /// Equality of the polynomials; grading tags are metadata and ignored.
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({} ; {:?})", self, self.grading)
    }
}

impl SparsePoly {
    pub fn zero(vars: &Variables) -> Self {
        SparsePoly { vars: vars.clone(), terms: BTreeMap::new(), grading: Grading::Ungraded }
    }

    pub fn constant(vars: &Variables, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p.grading = Grading::Homogeneous(0);
        p
    }

    pub fn one(vars: &Variables) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Variables, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial::unit(vars.len(), i), Rational::one());
        p.grading = Grading::Homogeneous(1);
        p
    }

    pub fn monomial(vars: &Variables, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        let m = Monomial::new(exps);
        let d = m.degree();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p.grading = Grading::Homogeneous(d);
        p
    }

    /// Sums the given terms (duplicates allowed); ungraded.
    pub fn from_terms<I>(vars: &Variables, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::input("exponent vector length does not match variable count"));
            }
            accumulate(&mut map, Monomial::new(exps), c);
        }
        Ok(SparsePoly { vars: vars.clone(), terms: map, grading: Grading::Ungraded })
    }

    pub(crate) fn from_map(vars: &Variables, terms: BTreeMap<Monomial, Rational>, grading: Grading) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        SparsePoly { vars: vars.clone(), terms, grading }
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(&Monomial(exps.into())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Leading term in the graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub(crate) fn set_grading(&mut self, g: Grading) {
        self.grading = g;
    }

    /// Every term satisfies the tag.
    pub fn satisfies(&self, g: Grading) -> bool {
        match g {
            Grading::Ungraded => true,
            Grading::Homogeneous(d) => self.terms.keys().all(|m| m.degree() == d),
            Grading::Bihomogeneous { split, degrees: (a, b) } => {
                split <= self.nvars()
                    && self
                        .terms
                        .keys()
                        .all(|m| m.degree_in_range(0..split) == a && m.degree_in_range(split..self.nvars()) == b)
            }
        }
    }

    /// Re-tags after checking the terms.
    pub fn with_grading(mut self, g: Grading) -> Result<Self> {
        if !self.satisfies(g) {
            return Err(Error::Grading { index: 0, expected: alloc::format!("{:?}", g) });
        }
        self.grading = g;
        Ok(self)
    }

    /// Degree if all terms share one total degree (zero: `None`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.total_degree()?;
        self.satisfies(Grading::Homogeneous(d)).then_some(d)
    }

    pub fn bihomogeneous_degrees(&self, split: usize) -> Option<(u32, u32)> {
        let m = self.terms.keys().next()?;
        let degrees = (m.degree_in_range(0..split), m.degree_in_range(split..self.nvars()));
        self.satisfies(Grading::Bihomogeneous { split, degrees }).then_some(degrees)
    }

    /// Tags the polynomial with the finest grading of the same kind as `like`
    /// that its terms satisfy.
    pub(crate) fn regrade_like(&mut self, like: Grading) {
        self.grading = match like {
            Grading::Ungraded => Grading::Ungraded,
            Grading::Homogeneous(_) => self.homogeneous_degree().map_or(Grading::Ungraded, Grading::Homogeneous),
            Grading::Bihomogeneous { split, .. } => self
                .bihomogeneous_degrees(split)
                .map_or(Grading::Ungraded, |degrees| Grading::Bihomogeneous { split, degrees }),
        };
        if self.is_zero() {
            self.grading = like;
        }
    }

    fn check_vars(&self, other: &SparsePoly) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::input("variable lists differ"));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_vars(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_vars(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &SparsePoly, negate: bool) -> SparsePoly {
        let grading = if self.is_zero() {
            other.grading
        } else if other.is_zero() {
            self.grading
        } else {
            self.grading.add(other.grading)
        };
        let (mut terms, rest, flip_rest) = if self.terms.len() >= other.terms.len() || negate {
            (self.terms.clone(), &other.terms, negate)
        } else {
            (other.terms.clone(), &self.terms, false)
        };
        for (m, c) in rest {
            let c = if flip_rest { -c.clone() } else { c.clone() };
            accumulate(&mut terms, m.clone(), c);
        }
        SparsePoly { vars: self.vars.clone(), terms, grading }
    }

    fn mul_unchecked(&self, other: &SparsePoly) -> SparsePoly {
        let grading = self.grading.mul(other.grading);
        let terms = mul_terms(self, other);
        SparsePoly { vars: self.vars.clone(), terms, grading }
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            let mut z = SparsePoly::zero(&self.vars);
            z.grading = self.grading;
            return z;
        }
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
            grading: self.grading,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(&self.vars);
        }
        let mut g = self.grading;
        if let Grading::Homogeneous(d) = g {
            g = Grading::Homogeneous(d + m.degree());
        } else if let Grading::Bihomogeneous { split, degrees: (a, b) } = g {
            g = Grading::Bihomogeneous {
                split,
                degrees: (a + m.degree_in_range(0..split), b + m.degree_in_range(split..self.nvars())),
            };
        }
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
            grading: g,
        }
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut result = SparsePoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(Error::input("evaluation point has wrong arity"));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replaces variable `var` by the constant `value`; the variable list is kept.
    pub fn specialize(&self, var: usize, value: &Rational) -> SparsePoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut k = m.clone();
            k.0[var] = 0;
            let v = if e == 0 { c.clone() } else { c * num_traits::pow(value.clone(), e as usize) };
            accumulate(&mut terms, k, v);
        }
        SparsePoly { vars: self.vars.clone(), terms, grading: Grading::Ungraded }
    }

    /// Coefficients with respect to `var`: entry `i` multiplies `var^i` and
    /// does not involve `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<SparsePoly> {
        let deg = self.degree_in(var) as usize;
        let mut out: Vec<BTreeMap<Monomial, Rational>> =
            vec![BTreeMap::new(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut k = m.clone();
            k.0[var] = 0;
            out[e].insert(k, c.clone());
        }
        out.into_iter().map(|terms| SparsePoly { vars: self.vars.clone(), terms, grading: Grading::Ungraded }).collect()
    }

    /// Coefficient of `var^i`, free of `var`.
    pub fn coefficient_in(&self, var: usize, i: u32) -> SparsePoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[var] == i {
                let mut k = m.clone();
                k.0[var] = 0;
                terms.insert(k, c.clone());
            }
        }
        SparsePoly { vars: self.vars.clone(), terms, grading: Grading::Ungraded }
    }

    pub fn derivative(&self, var: usize) -> SparsePoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut k = m.clone();
                k.0[var] -= 1;
                terms.insert(k, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        SparsePoly { vars: self.vars.clone(), terms, grading: Grading::Ungraded }
    }

    /// Rational content `c > 0` with `self = c * primitive`.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let l = lcm_of_denominators(self.terms.values());
        let scaled: Vec<Rational> = self.terms.values().map(|c| c * Rational::from_integer(l.clone())).collect();
        let g = gcd_of_numerators(scaled.iter());
        Rational::new(g, l)
    }

    /// Integer coefficients with gcd 1, sign preserved.
    pub fn primitive_part(&self) -> SparsePoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Primitive with positive leading coefficient.
    pub fn normalized(&self) -> SparsePoly {
        let p = self.primitive_part();
        if p.leading_coefficient().is_negative() {
            -p
        } else {
            p
        }
    }

    /// Quotient if `d` divides `self` exactly.
    pub fn div_exact(&self, d: &SparsePoly) -> Option<SparsePoly> {
        assert!(self.vars == d.vars);
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        if self.is_zero() {
            return Some(SparsePoly::zero(&self.vars));
        }
        if d.is_constant() {
            let mut q = self.scale(&dc.recip());
            q.grading = self.grading;
            return Some(q);
        }
        if let Some(q) = self.div_exact_integral(d) {
            return q;
        }
        let mut rem = self.terms.clone();
        let mut quotient: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.last_key_value() {
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.quotient_of(rm);
            let qc = rc / &dc;
            for (k, a) in &d.terms {
                accumulate(&mut rem, k.mul(&qm), -(a * &qc));
            }
            quotient.insert(qm, qc);
        }
        let mut q = SparsePoly { vars: self.vars.clone(), terms: quotient, grading: Grading::Ungraded };
        q.regrade_like(self.grading);
        Some(q)
    }

    /// Division in integer arithmetic when both sides have integer
    /// coefficients; `None` when some quotient coefficient is not integral.
    fn div_exact_integral(&self, d: &SparsePoly) -> Option<Option<SparsePoly>> {
        let integral = |p: &SparsePoly| p.terms.values().all(|c| c.is_integer());
        if !integral(self) || !integral(d) {
            return None;
        }
        let dterms: Vec<(&Monomial, Integer)> = d.terms.iter().map(|(m, c)| (m, c.to_integer())).collect();
        let (dm, dc) = dterms.last().expect("nonzero divisor");
        let mut rem: BTreeMap<Monomial, Integer> =
            self.terms.iter().map(|(m, c)| (m.clone(), c.to_integer())).collect();
        let mut quotient: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.last_key_value() {
            if !dm.divides(rm) {
                return Some(None);
            }
            let (qc, r) = num_integer::Integer::div_rem(rc, dc);
            if !r.is_zero() {
                return None;
            }
            let qm = dm.quotient_of(rm);
            for (k, a) in &dterms {
                use alloc::collections::btree_map::Entry;
                match rem.entry(k.mul(&qm)) {
                    Entry::Vacant(v) => {
                        v.insert(-(a * &qc));
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() -= a * &qc;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quotient.insert(qm, Rational::from_integer(qc));
        }
        let mut q = SparsePoly { vars: self.vars.clone(), terms: quotient, grading: Grading::Ungraded };
        q.regrade_like(self.grading);
        Some(Some(q))
    }

    /// Converts a polynomial in `var` alone.
    pub fn to_upoly(&self, var: usize) -> Result<UPoly> {
        let mut coeffs = vec![Rational::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return Err(Error::input("polynomial involves more than one variable"));
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        Ok(UPoly::new(coeffs))
    }

    pub fn from_upoly(vars: &Variables, var: usize, p: &UPoly) -> SparsePoly {
        let n = vars.len();
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut e = vec![0; n];
                e[var] = i as u32;
                (Monomial::new(e), c.clone())
            })
            .collect();
        SparsePoly { vars: vars.clone(), terms, grading: Grading::Ungraded }
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, images: &[SparsePoly]) -> Result<SparsePoly> {
        Ok(substitute_many(&[self], images)?.pop().expect("one result"))
    }

    /// Same polynomial over a different variable list of equal length.
    pub fn rename(&self, vars: &Variables) -> Result<SparsePoly> {
        if vars.len() != self.nvars() {
            return Err(Error::input("variable count mismatch in rename"));
        }
        let mut p = self.clone();
        p.vars = vars.clone();
        Ok(p)
    }
}

fn accumulate(map: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    use alloc::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Common denominator and the integer numerators over it.
fn integer_terms(p: &SparsePoly) -> (Integer, Vec<(&Monomial, Integer)>) {
    let l = lcm_of_denominators(p.terms.values());
    let terms = p
        .terms
        .iter()
        .map(|(m, c)| {
            let n = if c.denom().is_one() { c.numer() * &l } else { c.numer() * (&l / c.denom()) };
            (m, n)
        })
        .collect();
    (l, terms)
}

const PACK_BITS: u32 = 16;

fn pack(m: &Monomial) -> u128 {
    m.0.iter().enumerate().fold(0u128, |acc, (i, &e)| acc | ((e as u128) << (PACK_BITS * i as u32)))
}

fn unpack(key: u128, nvars: usize) -> Monomial {
    let mask = (1u128 << PACK_BITS) - 1;
    Monomial((0..nvars).map(|i| ((key >> (PACK_BITS * i as u32)) & mask) as u32).collect())
}

fn mul_terms(a: &SparsePoly, b: &SparsePoly) -> BTreeMap<Monomial, Rational> {
    let mut out = BTreeMap::new();
    if a.is_zero() || b.is_zero() {
        return out;
    }
    let n = a.nvars();
    let (da, ta) = integer_terms(a);
    let (db, tb) = integer_terms(b);
    let max_a = (0..n).map(|i| a.degree_in(i)).max().unwrap_or(0);
    let max_b = (0..n).map(|i| b.degree_in(i)).max().unwrap_or(0);
    let den = da * db;
    let make = |v: BigInt| -> Rational {
        if den.is_one() {
            Rational::from_integer(v)
        } else {
            Rational::new(v, den.clone())
        }
    };
    if n as u32 * PACK_BITS <= 128 && ((max_a + max_b) as u64) < (1u64 << PACK_BITS) {
        let pb: Vec<(u128, &BigInt)> = tb.iter().map(|(m, c)| (pack(m), c)).collect();
        let mut acc: HashMap<u128, BigInt> = HashMap::with_capacity(ta.len().max(tb.len()) * 2);
        for (ma, ca) in &ta {
            let ka = pack(ma);
            for (kb, cb) in &pb {
                let prod = ca * *cb;
                acc.entry(ka + kb).and_modify(|v| *v += &prod).or_insert(prod);
            }
        }
        for (k, v) in acc {
            if !v.is_zero() {
                out.insert(unpack(k, n), make(v));
            }
        }
    } else {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (ma, ca) in &ta {
            for (mb, cb) in &tb {
                let prod = ca * cb;
                acc.entry(ma.mul(mb)).and_modify(|v| *v += &prod).or_insert(prod);
            }
        }
        for (k, v) in acc {
            if !v.is_zero() {
                out.insert(k, make(v));
            }
        }
    }
    out
}

fn substitution_grading(p: Grading, images: &[SparsePoly]) -> Grading {
    let common = |imgs: &[SparsePoly]| -> Option<Grading> {
        let mut g: Option<Grading> = None;
        for im in imgs.iter().filter(|im| !im.is_zero()) {
            match g {
                None => g = Some(im.grading),
                Some(h) if h == im.grading => {}
                _ => return None,
            }
        }
        g.filter(|g| *g != Grading::Ungraded)
    };
    let scale = |g: Grading, k: u32| g.pow(k);
    match p {
        Grading::Ungraded => Grading::Ungraded,
        Grading::Homogeneous(d) => common(images).map_or(Grading::Ungraded, |g| scale(g, d)),
        Grading::Bihomogeneous { split, degrees: (a, b) } => {
            if split > images.len() {
                return Grading::Ungraded;
            }
            match (common(&images[..split]), common(&images[split..])) {
                (Some(g1), Some(g2)) => {
                    let left = scale(g1, a);
                    let right = scale(g2, b);
                    match (left, right) {
                        (Grading::Homogeneous(x), Grading::Homogeneous(y)) => Grading::Homogeneous(x + y),
                        (
                            Grading::Bihomogeneous { split: s, degrees: (x1, y1) },
                            Grading::Bihomogeneous { split: t, degrees: (x2, y2) },
                        ) if s == t => Grading::Bihomogeneous { split: s, degrees: (x1 + x2, y1 + y2) },
                        _ => Grading::Ungraded,
                    }
                }
                (Some(g1), None) if b == 0 => scale(g1, a),
                (None, Some(g2)) if a == 0 => scale(g2, b),
                _ => Grading::Ungraded,
            }
        }
    }
}

/// Substitutes the same images into several polynomials, sharing the
/// products of images across all of them.
pub fn substitute_many(polys: &[&SparsePoly], images: &[SparsePoly]) -> Result<Vec<SparsePoly>> {
    let Some(first) = polys.first() else {
        return Ok(Vec::new());
    };
    let n = first.nvars();
    if polys.iter().any(|p| p.vars != first.vars) {
        return Err(Error::input("polynomials to substitute into have different variable lists"));
    }
    if images.len() != n {
        return Err(Error::input("number of images does not match the number of variables"));
    }
    let target = images.first().map(|im| im.vars.clone()).ok_or_else(|| Error::input("no images given"))?;
    if images.iter().any(|im| im.vars != target) {
        return Err(Error::input("images use different variable lists"));
    }
    let mut cache: HashMap<Monomial, SparsePoly> = HashMap::new();
    cache.insert(Monomial::one(n), SparsePoly::one(&target));
    let mut out = Vec::with_capacity(polys.len());
    for p in polys {
        let mut acc = SparsePoly::zero(&target);
        for (m, c) in &p.terms {
            let prod = power_product(&mut cache, m, images);
            acc = &acc + &prod.scale(c);
        }
        acc.grading = substitution_grading(p.grading, images);
        if acc.is_zero() && acc.grading == Grading::Ungraded {
            acc.grading = p.grading;
        }
        out.push(acc);
    }
    Ok(out)
}

fn power_product(cache: &mut HashMap<Monomial, SparsePoly>, m: &Monomial, images: &[SparsePoly]) -> SparsePoly {
    if let Some(p) = cache.get(m) {
        return p.clone();
    }
    // peel one variable at a time until a cached prefix is found
    let mut chain: Vec<(Monomial, usize)> = Vec::new();
    let mut cur = m.clone();
    while !cache.contains_key(&cur) {
        let i = cur.0.iter().rposition(|&e| e > 0).expect("the unit monomial is cached");
        let mut prev = cur.clone();
        prev.0[i] -= 1;
        chain.push((cur, i));
        cur = prev;
    }
    let mut value = cache[&cur].clone();
    for (mono, i) in chain.into_iter().rev() {
        value = &value * &images[i];
        cache.insert(mono, value.clone());
    }
    value
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    /// Panics on mismatched variable lists; use [`SparsePoly::try_add`] for input data.
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert!(self.vars == rhs.vars, "variable lists differ");
        self.add_unchecked(rhs, false)
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        assert!(self.vars == rhs.vars, "variable lists differ");
        self.add_unchecked(rhs, true)
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert!(self.vars == rhs.vars, "variable lists differ");
        self.mul_unchecked(rhs)
    }
}

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(mut self) -> SparsePoly {
        for c in self.terms.values_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -self.clone()
    }
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(op: ArithOp, p: &SparsePoly, q: &SparsePoly) -> Result<SparsePoly> {
    match op {
        ArithOp::Add => p.try_add(q),
        ArithOp::Sub => p.try_sub(q),
        ArithOp::Mul => p.try_mul(q),
    }
}

pub use gcd::{poly_gcd, poly_gcd_many};
pub use linear::{poly_linear_change, poly_linear_change_block};
pub use resultant::{poly_resultant, poly_squarefree, rational_determinant};

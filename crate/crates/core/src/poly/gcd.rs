//! Multivariate gcd over the rationals.
//!
//! [`certify_trivial_gcd`] first tries to prove coprimality cheaply, the
//! common case when normalizing iterates. Graded input is dehomogenized so
//! that maps of the plane and of P1 x P1 reach the bivariate modular gcd.
//! The evaluation heuristic and recursive primitive remainder sequences
//! cover everything else.

use alloc::vec::Vec;

use num_traits::One;

use super::heugcd::heu_gcd;
use super::modgcd::modular_gcd;
use super::{certify_trivial_gcd, Grading, Monomial, SparsePoly};
use crate::error::{Error, Result};
use crate::number::Rational;

/// Greatest common divisor, primitive with positive leading coefficient.
/// `gcd(p, 0)` is `p` normalized.
pub fn poly_gcd(p: &SparsePoly, q: &SparsePoly) -> Result<SparsePoly> {
    poly_gcd_many(&[p, q])
}

/// Gcd of several polynomials over one variable list; zero entries are ignored.
pub fn poly_gcd_many(polys: &[&SparsePoly]) -> Result<SparsePoly> {
    let Some(first) = polys.first() else {
        return Err(Error::input("gcd of an empty list"));
    };
    if polys.iter().any(|p| p.vars() != first.vars()) {
        return Err(Error::input("variable lists differ"));
    }
    let vars = first.vars().clone();
    let nonzero: Vec<&SparsePoly> = polys.iter().copied().filter(|p| !p.is_zero()).collect();
    let mut g = match nonzero.len() {
        0 => return Ok(SparsePoly::zero(&vars)),
        1 => nonzero[0].normalized(),
        _ if nonzero.iter().any(|p| p.terms().len() == 1) => monomial_gcd(&nonzero),
        _ if certify_trivial_gcd(&nonzero) => SparsePoly::one(&vars),
        _ => graded_gcd(&nonzero, common_kind(&nonzero)).normalized(),
    };
    let like = common_kind(&nonzero);
    g.regrade_like(like);
    Ok(g)
}

/// When some input is a single term the gcd is the monomial of the
/// smallest exponents.
fn monomial_gcd(polys: &[&SparsePoly]) -> SparsePoly {
    let mut exps = alloc::vec![u32::MAX; polys[0].nvars()];
    for (m, _) in polys.iter().flat_map(|p| p.terms()) {
        for (e, &x) in exps.iter_mut().zip(m.exps()) {
            *e = (*e).min(x);
        }
    }
    let terms = [(Monomial::new(exps), Rational::one())].into_iter().collect();
    SparsePoly::from_map(polys[0].vars(), terms, Grading::Ungraded)
}

fn common_kind(polys: &[&SparsePoly]) -> Grading {
    let mut kind: Option<Grading> = None;
    for p in polys {
        let k = match p.grading() {
            Grading::Ungraded => return Grading::Ungraded,
            Grading::Homogeneous(_) => Grading::Homogeneous(0),
            Grading::Bihomogeneous { split, .. } => Grading::Bihomogeneous { split, degrees: (0, 0) },
        };
        match kind {
            None => kind = Some(k),
            Some(h) if h == k => {}
            _ => return Grading::Ungraded,
        }
    }
    kind.unwrap_or(Grading::Ungraded)
}

/// For graded input, sets the last variable of each block to 1, takes the
/// gcd of the affine parts and rehomogenizes; the powers of those variables
/// are tracked separately.
fn graded_gcd(polys: &[&SparsePoly], kind: Grading) -> SparsePoly {
    let n = polys[0].nvars();
    let blocks: Vec<core::ops::Range<usize>> = match kind {
        Grading::Homogeneous(_) => alloc::vec![0..n],
        Grading::Bihomogeneous { split, .. } if split > 0 && split < n => alloc::vec![0..split, split..n],
        _ => return gcd_chain(polys.iter().map(|p| (*p).clone()).collect()),
    };
    let one = Rational::one();
    let lasts: Vec<usize> = blocks.iter().map(|b| b.end - 1).collect();
    let affine: Vec<SparsePoly> =
        polys.iter().map(|p| lasts.iter().fold((*p).clone(), |q, &v| q.specialize(v, &one))).collect();
    let g = gcd_chain(affine);
    let exps_of_lasts: Vec<u32> = lasts
        .iter()
        .map(|&v| polys.iter().map(|p| p.terms().map(|(m, _)| m.exps()[v]).min().unwrap_or(0)).min().unwrap_or(0))
        .collect();
    let tops: Vec<u32> =
        blocks.iter().map(|b| g.terms().map(|(m, _)| m.degree_in_range(b.clone())).max().unwrap_or(0)).collect();
    let terms = g.terms().map(|(m, c)| {
        let mut e = m.exps().to_vec();
        for (i, b) in blocks.iter().enumerate() {
            e[lasts[i]] = tops[i] - m.degree_in_range(b.clone()) + exps_of_lasts[i];
        }
        (Monomial::new(e), c.clone())
    });
    SparsePoly::from_map(g.vars(), terms.collect(), Grading::Ungraded)
}

/// Pairwise gcd: modular in two variables or fewer, then the heuristic,
/// then remainder sequences.
fn gcd_chain(polys: Vec<SparsePoly>) -> SparsePoly {
    let mut it = polys.into_iter();
    let mut acc = it.next().expect("nonempty").primitive_part();
    for p in it {
        let p = p.primitive_part();
        acc = modular_gcd(&acc, &p).or_else(|| heu_gcd(&acc, &p)).unwrap_or_else(|| gcd_rec(&acc, &p)).primitive_part();
        if acc.is_constant() {
            break;
        }
    }
    acc
}

/// A gcd up to a nonzero rational factor.
pub(crate) fn gcd_rec(p: &SparsePoly, q: &SparsePoly) -> SparsePoly {
    let vars = p.vars().clone();
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        return SparsePoly::one(&vars);
    }
    let n = p.nvars();
    for v in 0..n {
        match (p.involves(v), q.involves(v)) {
            (true, false) => return gcd_rec(&content_in(p, v), q),
            (false, true) => return gcd_rec(p, &content_in(q, v)),
            _ => {}
        }
    }
    let v = (0..n)
        .filter(|&v| p.involves(v))
        .min_by_key(|&v| p.degree_in(v).max(q.degree_in(v)))
        .expect("non-constant polynomial involves a variable");
    let cp = content_in(p, v);
    let cq = content_in(q, v);
    let c = gcd_rec(&cp, &cq).primitive_part();
    let mut a = p.div_exact(&cp).expect("content divides");
    let mut b = q.div_exact(&cq).expect("content divides");
    if a.degree_in(v) < b.degree_in(v) {
        core::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            break;
        }
        if !r.involves(v) {
            b = SparsePoly::one(&vars);
            break;
        }
        a = b;
        b = primitive_in(&r, v);
    }
    &c * &b.primitive_part()
}

/// Gcd of the coefficients with respect to `v`.
fn content_in(p: &SparsePoly, v: usize) -> SparsePoly {
    let mut coeffs: Vec<SparsePoly> = p.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(SparsePoly::num_terms);
    let mut g = SparsePoly::zero(p.vars());
    for c in coeffs {
        g = gcd_rec(&g, &c).primitive_part();
        if g.is_constant() {
            return SparsePoly::one(p.vars());
        }
    }
    g
}

fn primitive_in(p: &SparsePoly, v: usize) -> SparsePoly {
    let c = content_in(p, v);
    if c.is_constant() {
        return p.primitive_part();
    }
    p.div_exact(&c).expect("content divides").primitive_part()
}

/// Pseudo-remainder of `a` by `b` in variable `v`, up to a rational factor.
fn pseudo_remainder(a: &SparsePoly, b: &SparsePoly, v: usize) -> SparsePoly {
    let n = b.degree_in(v);
    let lb = b.coefficient_in(v, n);
    let mut r = a.clone();
    let nv = a.nvars();
    while !r.is_zero() && r.involves(v) && r.degree_in(v) >= n {
        let dr = r.degree_in(v);
        let lr = r.coefficient_in(v, dr);
        let mut shift = alloc::vec![0u32; nv];
        shift[v] = dr - n;
        let shifted = (&lr * b).mul_monomial(&Monomial::new(shift), &Rational::one());
        r = (&(&lb * &r) - &shifted).primitive_part();
    }
    r
}

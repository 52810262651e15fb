//! Exact test for a common zero of the components of a factor.
//!
//! The projective space is covered by an affine chart and lines at
//! infinity. On a line the test is a gcd of binary forms. In the affine
//! chart the candidate `x`-coordinates are the roots of a squarefree
//! eliminant `B(x)`, and the common root in `y` is searched by a gcd over
//! `Q[x]/(B)`, splitting `B` whenever a leading coefficient turns out to be
//! a zero divisor.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::number::Rational;
use crate::poly::{poly_gcd, poly_gcd_many, poly_resultant, SparsePoly};
use crate::upoly::UPoly;

pub(crate) fn p2_common_zero(comps: &[SparsePoly]) -> Result<bool> {
    let zero = Rational::zero();
    let one = Rational::one();
    let line: Vec<SparsePoly> = comps.iter().map(|p| p.specialize(2, &zero)).collect();
    if common_factor(&line)? {
        return Ok(true);
    }
    let chart: Vec<SparsePoly> = comps.iter().map(|p| p.specialize(2, &one)).collect();
    has_common_zero(&chart, 0, 1)
}

pub(crate) fn p1xp1_common_zero(comps: &[SparsePoly]) -> Result<bool> {
    let zero = Rational::zero();
    let one = Rational::one();
    // t = (1 : 0)
    let t_inf: Vec<SparsePoly> = comps.iter().map(|p| p.specialize(1, &zero).specialize(0, &one)).collect();
    if common_factor(&t_inf)? {
        return Ok(true);
    }
    // w = (1 : 0), t affine
    let w_inf: Vec<SparsePoly> =
        comps.iter().map(|p| p.specialize(3, &zero).specialize(2, &one).specialize(1, &one)).collect();
    if common_factor(&w_inf)? {
        return Ok(true);
    }
    let chart: Vec<SparsePoly> = comps.iter().map(|p| p.specialize(1, &one).specialize(3, &one)).collect();
    has_common_zero(&chart, 0, 2)
}

/// For binary forms or univariate polynomials: a common zero exists iff
/// all vanish or the gcd has positive degree.
fn common_factor(polys: &[SparsePoly]) -> Result<bool> {
    let nonzero: Vec<&SparsePoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(true);
    }
    Ok(!poly_gcd_many(&nonzero)?.is_constant())
}

/// Whether polynomials in the variables `x` and `y` (no others) have a
/// common zero over the algebraic closure.
pub fn has_common_zero(polys: &[SparsePoly], x: usize, y: usize) -> Result<bool> {
    let nonzero: Vec<&SparsePoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(true);
    }
    if nonzero.iter().any(|p| p.is_constant()) {
        return Ok(false);
    }
    if nonzero.len() == 1 || !poly_gcd_many(&nonzero)?.is_constant() {
        return Ok(true);
    }
    let p = nonzero[0];
    let rest = &nonzero[1..];
    // Q = sum c^k r_k with c chosen so that gcd(P, Q) is constant
    let tries = rest.len() as u32 * p.total_degree().unwrap_or(0) + 2;
    let mut q = None;
    for c in 1..=tries as i64 {
        let c = Rational::from_integer(c.into());
        let mut acc = SparsePoly::zero(p.vars());
        let mut ck = Rational::one();
        for r in rest {
            acc = &acc + &r.scale(&ck);
            ck *= &c;
        }
        if !acc.is_zero() && poly_gcd(p, &acc)?.is_constant() {
            q = Some(acc);
            break;
        }
    }
    let q = q.expect("some combination is coprime to the first polynomial");
    if p.degree_in(y) == 0 && q.degree_in(y) == 0 {
        return Ok(false);
    }
    let r = poly_resultant(p, &q, y)?;
    let r = r.to_upoly(x)?;
    if r.is_constant() {
        return Ok(false);
    }
    let b = r.squarefree();
    let system: Vec<Vec<UPoly>> = nonzero
        .iter()
        .map(|f| f.coefficients_in(y).iter().map(|c| c.to_upoly(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(common_root_mod(&b, &system))
}

enum Step<T> {
    Done(T),
    Split(UPoly),
}

/// Some root of squarefree `b` admits a common root in `y` of all the
/// polynomials (coefficient lists in `y`, each coefficient a polynomial in `x`).
fn common_root_mod(b: &UPoly, system: &[Vec<UPoly>]) -> bool {
    if b.is_constant() {
        return false;
    }
    match gcd_all(b, system) {
        Step::Done(g) => g.is_empty() || g.len() >= 2,
        Step::Split(g) => {
            let other = b.div_exact(&g);
            common_root_mod(&g, system) || common_root_mod(&other, system)
        }
    }
}

fn reduce(p: &[UPoly], b: &UPoly) -> Vec<UPoly> {
    let mut v: Vec<UPoly> = p.iter().map(|c| c.rem(b)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Makes the leading coefficient a unit mod `b` and the polynomial monic.
fn make_monic(p: Vec<UPoly>, b: &UPoly) -> Step<Vec<UPoly>> {
    let Some(lc) = p.last() else {
        return Step::Done(p);
    };
    let g = lc.gcd(b);
    if !g.is_constant() {
        return Step::Split(g);
    }
    let inv = lc.inverse_mod(b).expect("unit modulo b");
    Step::Done(p.iter().map(|c| (c * &inv).rem(b)).collect())
}

fn rem_mod(a: &[UPoly], m: &[UPoly], b: &UPoly) -> Vec<UPoly> {
    let mut a = a.to_vec();
    let dm = m.len() - 1;
    while a.len() > dm {
        let c = a.last().expect("nonempty").clone();
        let shift = a.len() - 1 - dm;
        for (i, mi) in m.iter().enumerate() {
            a[shift + i] = (&a[shift + i] - &(&c * mi)).rem(b);
        }
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
    }
    a
}

fn gcd_all(b: &UPoly, system: &[Vec<UPoly>]) -> Step<Vec<UPoly>> {
    let mut g: Vec<UPoly> = Vec::new();
    for p in system {
        let mut u = g;
        let mut v = reduce(p, b);
        if u.len() < v.len() {
            core::mem::swap(&mut u, &mut v);
        }
        // Euclid in (Q[x]/b)[y]
        loop {
            if v.is_empty() {
                g = match make_monic(u, b) {
                    Step::Done(m) => m,
                    split => return split,
                };
                break;
            }
            let vm = match make_monic(v, b) {
                Step::Done(m) => m,
                split => return split,
            };
            let r = rem_mod(&u, &vm, b);
            u = vm;
            v = r;
        }
    }
    Step::Done(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_expression, Variables};

    fn polys(src: &[&str]) -> Vec<SparsePoly> {
        let vars = Variables::new(["x", "y"]);
        src.iter().map(|s| parse_expression(s, &vars, &Default::default()).unwrap()).collect()
    }

    #[test]
    fn circle_and_line() {
        assert!(has_common_zero(&polys(&["x^2 + y^2 - 1", "x - y"]), 0, 1).unwrap());
        assert!(has_common_zero(&polys(&["x^2 + y^2 + 1", "x - y"]), 0, 1).unwrap());
        assert!(!has_common_zero(&polys(&["x^2 + y^2 - 1", "x - y", "x + y - 1"]), 0, 1).unwrap());
    }

    #[test]
    fn splitting_needed() {
        // x = 0 or x = 1; only x = 1 carries a common root in y
        let p = polys(&["x^2 - x", "x*y - 1", "y - 1"]);
        assert!(has_common_zero(&p, 0, 1).unwrap());
        let q = polys(&["x^2 - x", "x*y - 1", "y - 2"]);
        assert!(!has_common_zero(&q, 0, 1).unwrap());
    }

    #[test]
    fn parallel_lines() {
        assert!(!has_common_zero(&polys(&["x", "x - 1"]), 0, 1).unwrap());
        assert!(!has_common_zero(&polys(&["y", "y - 1"]), 0, 1).unwrap());
        assert!(has_common_zero(&polys(&["x*y", "x*(y - 1)"]), 0, 1).unwrap());
    }

    #[test]
    fn vanishing_leading_coefficient() {
        // at x = 0 the first drops degree in y
        assert!(has_common_zero(&polys(&["x*y^2 + y - 1", "y - 1 + x"]), 0, 1).unwrap());
        assert!(!has_common_zero(&polys(&["x*y + 1", "x"]), 0, 1).unwrap());
    }
}

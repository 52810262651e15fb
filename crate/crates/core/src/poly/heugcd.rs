//! Heuristic gcd by evaluation at a large integer.
//!
//! The main variable is evaluated at an integer `xi` exceeding twice the
//! smaller coefficient norm, the gcd of the images is computed recursively,
//! and a candidate is rebuilt from its symmetric `xi`-adic expansion. The
//! candidate is the gcd as soon as its primitive part divides both inputs.
//! A few growing values of `xi` are tried before giving up.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use super::{Grading, Monomial, SparsePoly};
use crate::number::{Integer, Rational};

const ATTEMPTS: usize = 6;

/// Gcd of polynomials with integer coefficients, integer content included,
/// up to sign; `None` when the heuristic gives up.
pub(crate) fn heu_gcd(f: &SparsePoly, g: &SparsePoly) -> Option<SparsePoly> {
    if f.is_zero() {
        return Some(g.clone());
    }
    if g.is_zero() {
        return Some(f.clone());
    }
    let n = f.nvars();
    let Some(v) = (0..n).rev().find(|&v| f.involves(v) || g.involves(v)) else {
        let a = f.constant_value()?.to_integer();
        let b = g.constant_value()?.to_integer();
        return Some(SparsePoly::constant(f.vars(), Rational::from_integer(a.gcd(&b))));
    };
    let (cf, cg) = (f.content().to_integer(), g.content().to_integer());
    let c = Rational::from_integer(cf.gcd(&cg));
    let (f, g) = (&f.primitive_part(), &g.primitive_part());
    let bound = norm(f).min(norm(g));
    let mut xi: Integer = bound * 2 + 29;
    for _ in 0..ATTEMPTS {
        let x = Rational::from_integer(xi.clone());
        let (ff, gg) = (f.specialize(v, &x), g.specialize(v, &x));
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(h) = heu_gcd(&ff, &gg) {
                let h = expand(&h, v, &xi).primitive_part();
                if f.div_exact(&h).is_some() && g.div_exact(&h).is_some() {
                    return Some(h.scale(&c));
                }
            }
        }
        let root = xi.sqrt().sqrt();
        xi = &xi * BigInt::from(73794) * root / BigInt::from(27011);
    }
    None
}

fn norm(p: &SparsePoly) -> Integer {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_else(Integer::zero)
}

/// Rebuilds a polynomial in `v` from the symmetric `xi`-adic digits of the
/// coefficients of `h`.
fn expand(h: &SparsePoly, v: usize, xi: &Integer) -> SparsePoly {
    let half = xi / 2;
    let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for (m, c) in h.terms() {
        let mut c = c.to_integer();
        let mut i = 0u32;
        while !c.is_zero() {
            let mut r = c.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            if !r.is_zero() {
                let mut e: Vec<u32> = m.exps().to_vec();
                e[v] += i;
                terms.insert(Monomial::new(e), Rational::from_integer(r.clone()));
            }
            c = (c - r) / xi;
            i += 1;
        }
    }
    SparsePoly::from_map(h.vars(), terms, Grading::Ungraded)
}

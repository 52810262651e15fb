#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use surfdyn_core::{RationalSelfMap, SparsePoly, Surface, Variables};

pub fn config(cases: u32, seed: u64) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn vars(names: &[&str]) -> Variables {
    Variables::new(names.iter().copied())
}

pub fn small_rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

/// Up to `max_terms` terms with exponents at most `max_exp` in `n` variables.
pub fn poly(v: Variables, max_terms: usize, max_exp: u32) -> impl Strategy<Value = SparsePoly> {
    let n = v.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), small_rational()), 0..=max_terms)
        .prop_map(move |terms| SparsePoly::from_terms(&v, terms).unwrap())
}

/// Homogeneous of degree `d` in three variables.
pub fn homogeneous(v: Variables, d: u32, max_terms: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(((0..=d), (0..=d), -4i64..=4), 1..=max_terms).prop_map(move |terms| {
        let t = terms.into_iter().map(|(a, b, c)| {
            let a = a.min(d);
            let b = b.min(d - a);
            (vec![a, b, d - a - b], qi(c))
        });
        SparsePoly::from_terms(&v, t).unwrap()
    })
}

/// A map of the plane by quadrics or cubics with small coefficients; `None`
/// when the draw is not a valid map.
pub fn small_p2_map() -> impl Strategy<Value = Option<RationalSelfMap>> {
    let v = vars(&["x", "y", "z"]);
    (1u32..=2).prop_flat_map(move |d| prop::collection::vec(homogeneous(v.clone(), d, 4), 3)).prop_map(|comps| {
        if comps.iter().all(|p| p.is_zero()) {
            return None;
        }
        RationalSelfMap::normalize(Surface::P2, vec![comps]).ok()
    })
}

pub fn params() -> BTreeMap<String, BigRational> {
    BTreeMap::new()
}

/// Bihomogeneous of bidegree `(a, b)` in `t0, t1 | w0, w1`.
pub fn bihomogeneous(v: Variables, a: u32, b: u32, max_terms: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(((0..=a), (0..=b), -3i64..=3), 1..=max_terms).prop_map(move |terms| {
        let t = terms.into_iter().map(|(i, j, c)| (vec![i, a - i, j, b - j], qi(c)));
        SparsePoly::from_terms(&v, t).unwrap()
    })
}

pub fn small_p1xp1_map() -> impl Strategy<Value = Option<RationalSelfMap>> {
    let v = vars(&["t0", "t1", "w0", "w1"]);
    (0u32..=2, 0u32..=2, 0u32..=2, 0u32..=2)
        .prop_filter("nonconstant factors", |&(a1, b1, a2, b2)| a1 + b1 > 0 && a2 + b2 > 0)
        .prop_flat_map(move |(a1, b1, a2, b2)| {
            (
                prop::collection::vec(bihomogeneous(v.clone(), a1, b1, 3), 2),
                prop::collection::vec(bihomogeneous(v.clone(), a2, b2, 3), 2),
            )
        })
        .prop_map(|(f, g)| RationalSelfMap::normalize(Surface::P1xP1, vec![f, g]).ok())
}

pub fn xy() -> Variables {
    vars(&["x", "y"])
}

pub fn tw() -> Variables {
    vars(&["t0", "t1", "w0", "w1"])
}

pub fn xyz() -> Variables {
    vars(&["x", "y", "z"])
}

/// Coefficients of a univariate specialization, highest degree first.
pub fn coeffs_desc(p: &SparsePoly, var: usize, deg: u32, point: &[BigRational]) -> Vec<BigRational> {
    (0..=deg)
        .rev()
        .map(|i| {
            let c = p.coefficient_in(var, i);
            if c.is_zero() {
                BigRational::zero()
            } else {
                c.eval(point).unwrap()
            }
        })
        .collect()
}

pub fn det(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let s = &f * &a[c][j];
                a[i][j] -= s;
            }
        }
    }
    d
}

/// Sylvester determinant of two univariate polynomials given by
/// descending coefficient lists.
pub fn sylvester(p: &[BigRational], q: &[BigRational]) -> BigRational {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigRational::one();
    }
    let mut rows = Vec::new();
    for i in 0..n {
        let mut r = vec![BigRational::zero(); size];
        r[i..i + m + 1].clone_from_slice(p);
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigRational::zero(); size];
        r[i..i + n + 1].clone_from_slice(q);
        rows.push(r);
    }
    det(rows)
}

/// Forces a positive degree in `y`.
pub fn with_y(p: SparsePoly) -> SparsePoly {
    if p.degree_in(1) > 0 {
        p
    } else {
        &p + &SparsePoly::var(p.vars(), 1)
    }
}

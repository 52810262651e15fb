//! Modular certificate that homogeneous polynomials have no common factor.
//!
//! A common factor `G` of homogeneous polynomials is homogeneous. Restrict
//! every input to a projective line `x = a*u + b*s`: `G` restricts to a
//! binary form of degree `deg G` dividing every restriction, and this
//! survives reduction modulo a prime not dividing any denominator. So if the
//! restricted binary forms are coprime modulo `p`, the inputs are coprime
//! over the rationals. The converse can fail, in which case the caller falls
//! back to the exact gcd.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::SparsePoly;

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce(n: &BigInt) -> u64 {
    let m = BigInt::from(P);
    let r = ((n % &m) + &m) % &m;
    r.to_u64().expect("residue fits")
}

/// splitmix64, for the deterministic line coefficients.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Reduced {
    degree: u32,
    terms: Vec<(Vec<u32>, u64)>,
    max_exp: Vec<u32>,
}

fn reduce_poly(p: &SparsePoly) -> Option<Reduced> {
    let degree = p.homogeneous_degree()?;
    let n = p.nvars();
    let mut terms = Vec::with_capacity(p.num_terms());
    let mut max_exp = vec![0u32; n];
    for (m, c) in p.terms() {
        let den = reduce(c.denom());
        if den == 0 {
            return None;
        }
        let v = mul(reduce(c.numer()), inv(den));
        for (slot, &e) in max_exp.iter_mut().zip(m.exps()) {
            *slot = (*slot).max(e);
        }
        if v != 0 {
            terms.push((m.exps().to_vec(), v));
        }
    }
    Some(Reduced { degree, terms, max_exp })
}

fn eval_at(r: &Reduced, point: &[u64]) -> u64 {
    let tables: Vec<Vec<u64>> = point
        .iter()
        .zip(&r.max_exp)
        .map(|(&x, &m)| {
            let mut t = Vec::with_capacity(m as usize + 1);
            let mut acc = 1u64;
            t.push(acc);
            for _ in 0..m {
                acc = mul(acc, x);
                t.push(acc);
            }
            t
        })
        .collect();
    let mut sum = 0u64;
    for (exps, c) in &r.terms {
        let mut t = *c;
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                t = mul(t, tables[i][e as usize]);
            }
        }
        sum = add(sum, t);
    }
    sum
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Coefficients (ascending) of the polynomial through `(xs[i], ys[i])`.
fn interpolate(xs: &[u64], ys: &[u64]) -> Vec<u64> {
    let n = xs.len();
    // Newton divided differences
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = sub(dd[i], dd[i - 1]);
            let den = sub(xs[i], xs[i - j]);
            dd[i] = mul(num, inv(den));
        }
    }
    let mut coeffs = vec![0u64; n];
    for k in (0..n).rev() {
        // coeffs = coeffs * (x - xs[k]) + dd[k]
        let mut next = vec![0u64; n];
        for i in 0..n - 1 {
            next[i + 1] = add(next[i + 1], coeffs[i]);
            next[i] = sub(next[i], mul(coeffs[i], xs[k]));
        }
        next[0] = add(next[0], dd[k]);
        coeffs = next;
    }
    trim(coeffs)
}

fn rem(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let lb = inv(*b.last().expect("nonzero divisor"));
    while r.len() >= b.len() {
        let c = mul(*r.last().unwrap(), lb);
        let shift = r.len() - b.len();
        for (j, &bc) in b.iter().enumerate() {
            r[shift + j] = sub(r[shift + j], mul(c, bc));
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn gcd_mod(a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    let (mut a, mut b) = (a, b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// `true` only if the polynomials provably have no common factor of
/// positive degree. All inputs must share one variable list.
pub fn certify_trivial_gcd(polys: &[&SparsePoly]) -> bool {
    let nonzero: Vec<&SparsePoly> = polys.iter().copied().filter(|p| !p.is_zero()).collect();
    if nonzero.iter().any(|p| p.is_constant()) {
        return true;
    }
    if nonzero.len() < 2 {
        return false;
    }
    let Some(reduced) = nonzero.iter().map(|p| reduce_poly(p)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let n = nonzero[0].nvars();
    for attempt in 0..2u64 {
        let a: Vec<u64> = (0..n).map(|i| mix(attempt * 1000 + 2 * i as u64) % P).collect();
        let b: Vec<u64> = (0..n).map(|i| mix(attempt * 1000 + 2 * i as u64 + 1) % P).collect();
        let mut g: Option<Vec<u64>> = None;
        let mut all_vanish_at_infinity = true;
        let mut any = false;
        for r in &reduced {
            let xs: Vec<u64> = (1..=r.degree as u64 + 1).collect();
            let ys: Vec<u64> = xs
                .iter()
                .map(|&s| {
                    let point: Vec<u64> = a.iter().zip(&b).map(|(&ai, &bi)| add(ai, mul(bi, s))).collect();
                    eval_at(r, &point)
                })
                .collect();
            let f = interpolate(&xs, &ys);
            if f.is_empty() {
                continue;
            }
            any = true;
            if eval_at(r, &b) != 0 {
                all_vanish_at_infinity = false;
            }
            g = Some(match g {
                None => f,
                Some(h) => gcd_mod(h, f),
            });
        }
        if let (true, Some(g)) = (any, g) {
            if g.len() == 1 && !all_vanish_at_infinity {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_expression, Variables};

    fn p(s: &str) -> SparsePoly {
        parse_expression(s, &Variables::new(["x", "y", "z"]), &Default::default()).unwrap()
    }

    #[test]
    fn interpolation_recovers_coefficients() {
        let xs = [1, 2, 3, 4];
        let ys: Vec<u64> = xs.iter().map(|&x| add(mul(3, mul(x, x)), 5)).collect();
        assert_eq!(interpolate(&xs, &ys), vec![5, 0, 3]);
    }

    #[test]
    fn certifies_coprime_forms() {
        assert!(certify_trivial_gcd(&[&p("x*z + y^2"), &p("y*z + x^2"), &p("x^2 + y^2")]));
        assert!(certify_trivial_gcd(&[&p("x"), &p("y")]));
    }

    #[test]
    fn never_certifies_a_shared_factor() {
        let g = p("x + 2*y - z");
        assert!(!certify_trivial_gcd(&[&(&g * &p("x")), &(&g * &p("y^2 - z^2"))]));
        // common factor that only shows at the point at infinity of the line
        assert!(!certify_trivial_gcd(&[&p("x*y"), &p("x*z")]));
    }

    #[test]
    fn inhomogeneous_input_is_not_certified() {
        assert!(!certify_trivial_gcd(&[&p("x + 1"), &p("y")]));
    }
}

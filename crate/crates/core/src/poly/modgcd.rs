//! Modular gcd for polynomials in at most two variables.
//!
//! For each word-size prime the second variable is evaluated at points of
//! Z/p, univariate gcds are taken there and interpolated back. Images for
//! several primes are combined by Chinese remaindering until the candidate
//! stops changing; it is accepted once it divides both inputs over Z.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

use super::{Grading, Monomial, SparsePoly, Variables};
use crate::number::{Integer, Rational};

/// Coefficients indexed by `[x degree][y degree]`.
type Dense = Vec<Vec<Integer>>;
/// A polynomial in one variable over Z, lowest degree first, trimmed.
type Uz = Vec<Integer>;
/// Same layout over Z/p.
type Up = Vec<u64>;

const MAX_PRIMES: usize = 400;

/// Primitive gcd up to sign, or `None` when more than two variables occur
/// or the prime budget runs out.
pub(crate) fn modular_gcd(f: &SparsePoly, g: &SparsePoly) -> Option<SparsePoly> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let used: Vec<usize> = (0..f.nvars()).filter(|&v| f.involves(v) || g.involves(v)).collect();
    if used.is_empty() || used.len() > 2 {
        return None;
    }
    let (x, y) = (used[0], used.get(1).copied());
    let a = to_dense(&f.primitive_part(), x, y);
    let b = to_dense(&g.primitive_part(), x, y);
    let h = gcd_dense(&a, &b)?;
    Some(from_dense(f.vars(), &h, x, y))
}

fn to_dense(p: &SparsePoly, x: usize, y: Option<usize>) -> Dense {
    let dy = y.map_or(0, |y| p.degree_in(y) as usize);
    let mut out = vec![vec![Integer::zero(); dy + 1]; p.degree_in(x) as usize + 1];
    for (m, c) in p.terms() {
        let j = y.map_or(0, |y| m.exps()[y] as usize);
        out[m.exps()[x] as usize][j] = c.to_integer();
    }
    out
}

fn from_dense(vars: &Variables, h: &Dense, x: usize, y: Option<usize>) -> SparsePoly {
    let mut terms = BTreeMap::new();
    for (i, row) in h.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0u32; vars.len()];
            e[x] = i as u32;
            if let Some(y) = y {
                e[y] = j as u32;
            }
            terms.insert(Monomial::new(e), Rational::from_integer(c.clone()));
        }
    }
    SparsePoly::from_map(vars, terms, Grading::Ungraded)
}

fn trim(mut p: Uz) -> Uz {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Integer::zero());
    }
    p
}

fn trim_rows(mut a: Dense) -> Dense {
    while a.len() > 1 && a.last().is_some_and(|r| r.iter().all(Zero::is_zero)) {
        a.pop();
    }
    a
}

fn is_zero_uz(p: &[Integer]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn int_content(p: &[Integer]) -> Integer {
    p.iter().fold(Integer::zero(), |g, c| g.gcd(c))
}

/// Gcd in Z[y], integer content included.
fn uz_gcd(p: &Uz, q: &Uz) -> Option<Uz> {
    if is_zero_uz(p) {
        return Some(q.clone());
    }
    if is_zero_uz(q) {
        return Some(p.clone());
    }
    if p.len() == 1 || q.len() == 1 {
        return Some(vec![int_content(p).gcd(&int_content(q))]);
    }
    let as_x = |u: &Uz| u.iter().map(|c| vec![c.clone()]).collect::<Dense>();
    let d = gcd_dense(&as_x(p), &as_x(q))?;
    Some(trim(d.into_iter().map(|r| r[0].clone()).collect()))
}

fn content_y(a: &Dense) -> Option<Uz> {
    let mut c: Uz = vec![Integer::zero()];
    for row in a {
        let row = trim(row.clone());
        if is_zero_uz(&row) {
            continue;
        }
        c = uz_gcd(&c, &row)?;
        if c.len() == 1 && c[0].is_one() {
            break;
        }
    }
    Some(c)
}

fn uz_mul(p: &[Integer], q: &[Integer]) -> Uz {
    let mut out = vec![Integer::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    trim(out)
}

/// `p / d` when the quotient lies in Z[y].
fn uz_div_exact(p: &[Integer], d: &[Integer]) -> Option<Uz> {
    let p = trim(p.to_vec());
    if is_zero_uz(&p) {
        return Some(p);
    }
    let d = trim(d.to_vec());
    if p.len() < d.len() {
        return None;
    }
    let lc = d.last().expect("nonempty");
    let mut r = p;
    let mut q = vec![Integer::zero(); r.len() - d.len() + 1];
    for k in (0..q.len()).rev() {
        let top = &r[k + d.len() - 1];
        let (c, rem) = top.div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (i, di) in d.iter().enumerate() {
            r[k + i] -= &c * di;
        }
        q[k] = c;
    }
    is_zero_uz(&r).then(|| trim(q))
}

fn divide_rows(a: &Dense, c: &Uz) -> Option<Dense> {
    a.iter().map(|r| uz_div_exact(r, c)).collect()
}

/// Whether `d` divides `a` in Z[x, y]; `d` primitive.
fn divides(a: &Dense, d: &Dense) -> bool {
    let d = trim_rows(d.clone());
    let lc = trim(d.last().expect("nonempty").clone());
    let mut r: Vec<Uz> = a.iter().map(|row| trim(row.clone())).collect();
    loop {
        while r.len() > 1 && r.last().is_some_and(|x| is_zero_uz(x)) {
            r.pop();
        }
        if r.len() < d.len() || (r.len() == 1 && is_zero_uz(&r[0])) {
            break;
        }
        let top = r.len() - 1;
        let Some(q) = uz_div_exact(&r[top], &lc) else {
            return false;
        };
        let shift = top + 1 - d.len();
        for (i, di) in d.iter().enumerate() {
            let prod = uz_mul(&q, di);
            let row = &mut r[i + shift];
            if row.len() < prod.len() {
                row.resize(prod.len(), Integer::zero());
            }
            for (k, c) in prod.into_iter().enumerate() {
                row[k] -= c;
            }
            *row = trim(core::mem::take(row));
        }
    }
    r.iter().all(|x| is_zero_uz(x))
}

/// Gcd over Z of two bivariate polynomials, content included, up to sign.
fn gcd_dense(a: &Dense, b: &Dense) -> Option<Dense> {
    let (a, b) = (trim_rows(a.clone()), trim_rows(b.clone()));
    let (ca, cb) = (content_y(&a)?, content_y(&b)?);
    let c = uz_gcd(&ca, &cb)?;
    let a = divide_rows(&a, &ca)?;
    let b = divide_rows(&b, &cb)?;
    if a.len() == 1 || b.len() == 1 {
        return Some(vec![c]);
    }
    let lca = trim(a.last().expect("nonempty").clone());
    let lcb = trim(b.last().expect("nonempty").clone());
    let gamma = uz_gcd(&lca, &lcb)?;
    let deg_y = |m: &Dense| m.iter().map(|r| trim(r.clone()).len() - 1).max().unwrap_or(0);
    let bound = gamma.len() - 1 + deg_y(&a).min(deg_y(&b));

    let mut modulus = Integer::one();
    let mut acc: Option<Dense> = None;
    let mut primes = Primes::new();
    for _ in 0..MAX_PRIMES {
        let p = primes.next_prime();
        if [&lca, &lcb, &gamma].iter().any(|u| reduce(u, p).iter().all(|&c| c == 0)) {
            continue;
        }
        let Some(img) = image_mod(&a, &b, &gamma, bound, p) else {
            continue;
        };
        if img.len() == 1 {
            return Some(vec![c]);
        }
        match &acc {
            Some(h) if img.len() > h.len() => continue,
            Some(h) if img.len() < h.len() => {
                acc = None;
                modulus = Integer::one();
            }
            _ => {}
        }
        let (h, changed) = match acc.take() {
            None => (lift(&img, p), true),
            Some(h) => crt(&h, &modulus, &img, p),
        };
        modulus *= BigInt::from(p);
        if !changed {
            let ch = content_y(&h)?;
            let cand = divide_rows(&h, &ch)?;
            if divides(&a, &cand) && divides(&b, &cand) {
                let out: Dense = cand.iter().map(|r| uz_mul(r, &c)).collect();
                return Some(out);
            }
        }
        acc = Some(h);
    }
    None
}

struct Primes(u64);

impl Primes {
    fn new() -> Self {
        Primes(1 << 31)
    }

    fn next_prime(&mut self) -> u64 {
        loop {
            self.0 -= 1;
            let n = self.0;
            if n % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d)) {
                return n;
            }
        }
    }
}

fn to_mod(c: &Integer, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn reduce(u: &[Integer], p: u64) -> Up {
    u.iter().map(|c| to_mod(c, p)).collect()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn eval_mod(u: &[u64], x: u64, p: u64) -> u64 {
    u.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

fn trim_p(mut u: Up) -> Up {
    while u.last() == Some(&0) {
        u.pop();
    }
    u
}

/// Remainder of `a` by `b` in Z/p[x]; `b` nonzero and trimmed.
fn rem_mod(mut a: Up, b: &[u64], p: u64) -> Up {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while a.len() > db {
        let top = a.len() - 1;
        let c = a[top] * inv % p;
        if c != 0 {
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - c * bi % p) % p;
            }
        }
        a.pop();
        a = trim_p(a);
    }
    a
}

/// Monic gcd in Z/p[x] of two nonzero polynomials.
fn gcd_mod(a: Up, b: Up, p: u64) -> Up {
    let (mut a, mut b) = (trim_p(a), trim_p(b));
    while !b.is_empty() {
        let r = rem_mod(a, &b, p);
        a = b;
        b = r;
    }
    let inv = inv_mod(*a.last().expect("nonzero gcd"), p);
    a.iter().map(|&c| c * inv % p).collect()
}

/// Image mod `p` of `gamma * G / lc_x(G)` with `G` the gcd of the
/// primitive parts `a`, `b`; rows are x degrees, entries y coefficients.
fn image_mod(a: &Dense, b: &Dense, gamma: &Uz, bound: usize, p: u64) -> Option<Vec<Up>> {
    let ap: Vec<Up> = a.iter().map(|r| reduce(r, p)).collect();
    let bp: Vec<Up> = b.iter().map(|r| reduce(r, p)).collect();
    let gp = reduce(gamma, p);
    let (lca, lcb) = (ap.last()?, bp.last()?);
    let mut e = usize::MAX;
    let mut interp: Vec<Up> = Vec::new();
    let mut q: Up = vec![1];
    let mut count = 0;
    let mut rejected = 0;
    for pt in 1..p {
        if eval_mod(lca, pt, p) == 0 || eval_mod(lcb, pt, p) == 0 {
            continue;
        }
        let ua: Up = ap.iter().map(|r| eval_mod(r, pt, p)).collect();
        let ub: Up = bp.iter().map(|r| eval_mod(r, pt, p)).collect();
        let g = gcd_mod(ua, ub, p);
        let d = g.len() - 1;
        if d == 0 {
            return Some(vec![vec![1]]);
        }
        if d > e {
            rejected += 1;
            if rejected > bound + 16 {
                return None;
            }
            continue;
        }
        if d < e {
            e = d;
            interp = vec![Vec::new(); d + 1];
            q = vec![1];
            count = 0;
        }
        let scale = eval_mod(&gp, pt, p);
        let qinv = inv_mod(eval_mod(&q, pt, p), p);
        for (row, gi) in interp.iter_mut().zip(&g) {
            let target = gi * scale % p;
            let delta = (target + p - eval_mod(row, pt, p)) * qinv % p;
            if delta != 0 {
                if row.len() < q.len() {
                    row.resize(q.len(), 0);
                }
                for (k, &qk) in q.iter().enumerate() {
                    row[k] = (row[k] + delta * qk) % p;
                }
            }
        }
        // q <- q * (y - pt)
        let mut next = vec![0; q.len() + 1];
        for (k, &qk) in q.iter().enumerate() {
            next[k + 1] = (next[k + 1] + qk) % p;
            next[k] = (next[k] + p - qk * pt % p) % p;
        }
        q = next;
        count += 1;
        if count == bound + 1 {
            return Some(interp);
        }
    }
    None
}

fn symmetric(c: Integer, m: &Integer) -> Integer {
    let half: Integer = m >> 1;
    if c > half {
        c - m
    } else {
        c
    }
}

fn lift(img: &[Up], p: u64) -> Dense {
    let m = BigInt::from(p);
    img.iter().map(|r| r.iter().map(|&c| symmetric(BigInt::from(c), &m)).collect()).collect()
}

/// Combines `h` (mod `m`, symmetric) with `img` (mod `p`); reports whether
/// any coefficient changed.
fn crt(h: &Dense, m: &Integer, img: &[Up], p: u64) -> (Dense, bool) {
    let mp = to_mod(m, p);
    let minv = inv_mod(mp, p);
    let mm = m * BigInt::from(p);
    let mut changed = false;
    let out = img
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let width = row.len().max(h.get(i).map_or(0, Vec::len));
            (0..width)
                .map(|j| {
                    let old = h.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(Integer::zero);
                    let r = row.get(j).copied().unwrap_or(0);
                    let t = (r + p - to_mod(&old, p)) % p * minv % p;
                    if t == 0 {
                        return old;
                    }
                    changed = true;
                    let v = (&old + m * BigInt::from(t)).mod_floor(&mm);
                    symmetric(v, &mm)
                })
                .collect()
        })
        .collect();
    (out, changed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_expression;

    fn p(s: &str) -> SparsePoly {
        parse_expression(s, &Variables::new(["x", "y", "z"]), &BTreeMap::new()).unwrap()
    }

    fn same_up_to_sign(a: &SparsePoly, b: &SparsePoly) -> bool {
        a == b || *a == -b.clone()
    }

    #[test]
    fn bivariate_common_factor() {
        let g = p("3*x^2*y - y^3 + 7*x - 2");
        let a = &g * &p("x*y - 2*y^3 + 1");
        let b = &g * &p("y^2 + x^4 - 5*x");
        assert!(same_up_to_sign(&modular_gcd(&a, &b).unwrap(), &g));
    }

    #[test]
    fn contents_in_y_and_integers() {
        let a = p("6*(y^2 + 1)*(x - y)*(x + 2)");
        let b = p("4*(y^2 + 1)*(y + 3)*(x + 2)");
        let h = modular_gcd(&a, &b).unwrap();
        assert!(same_up_to_sign(&h, &p("(y^2 + 1)*(x + 2)")), "{h:?}");
    }

    #[test]
    fn univariate_and_coprime() {
        let a = p("(x - 1)^3*(x + 4)");
        let b = p("(x - 1)^2*(2*x + 3)");
        assert!(same_up_to_sign(&modular_gcd(&a, &b).unwrap(), &p("(x - 1)^2")));
        assert!(modular_gcd(&p("x + y"), &p("x - y")).unwrap().is_constant());
        assert!(modular_gcd(&p("x*y*z"), &p("x")).is_none());
    }
}

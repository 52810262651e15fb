use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::SparsePoly;
use crate::error::{Error, Result};
use crate::number::Rational;

/// Sylvester resultant with respect to `var`.
///
/// The matrix has `deg q` rows of `p`'s coefficients (highest first) on top
/// of `deg p` rows of `q`'s. If either input is zero (but not both) the
/// result is zero; if both have degree 0 in `var` it is 1.
pub fn poly_resultant(p: &SparsePoly, q: &SparsePoly, var: usize) -> Result<SparsePoly> {
    if p.vars() != q.vars() {
        return Err(Error::input("variable lists differ"));
    }
    if var >= p.nvars() {
        return Err(Error::input("resultant variable out of range"));
    }
    if p.is_zero() && q.is_zero() {
        return Err(Error::input("resultant of two zero polynomials"));
    }
    let vars = p.vars().clone();
    if p.is_zero() || q.is_zero() {
        return Ok(SparsePoly::zero(&vars));
    }
    let cp = p.coefficients_in(var);
    let cq = q.coefficients_in(var);
    let m = cp.len() - 1;
    let n = cq.len() - 1;
    let size = m + n;
    let zero = SparsePoly::zero(&vars);
    let mut matrix = vec![vec![zero; size]; size];
    for r in 0..n {
        for (i, c) in cp.iter().enumerate() {
            matrix[r][r + m - i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in cq.iter().enumerate() {
            matrix[n + r][r + n - i] = c.clone();
        }
    }
    Ok(bareiss_determinant(matrix, &vars))
}

/// Fraction-free determinant over the polynomial ring.
fn bareiss_determinant(mut m: Vec<Vec<SparsePoly>>, vars: &super::Variables) -> SparsePoly {
    let n = m.len();
    if n == 0 {
        return SparsePoly::one(vars);
    }
    let mut negate = false;
    let mut prev = SparsePoly::one(vars);
    for k in 0..n - 1 {
        // prefer the sparsest available pivot
        let pivot = (k..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].num_terms());
        let Some(pivot) = pivot else {
            return SparsePoly::zero(vars);
        };
        if pivot != k {
            m.swap(pivot, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss step divides exactly");
            }
            m[i][k] = SparsePoly::zero(vars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// `p / gcd(p, dp/dvar)` for `p` in `var` alone, primitive with positive
/// leading coefficient.
pub fn poly_squarefree(p: &SparsePoly, var: usize) -> Result<SparsePoly> {
    if p.is_zero() {
        return Err(Error::input("squarefree part of zero"));
    }
    if var >= p.nvars() {
        return Err(Error::input("variable out of range"));
    }
    let u = p.to_upoly(var)?;
    Ok(SparsePoly::from_upoly(p.vars(), var, &u.squarefree()))
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn rational_determinant(matrix: &[Vec<Rational>]) -> Result<Rational> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(Error::input("matrix is not square"));
    }
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut det = Rational::from_integer(1.into());
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    Ok(det)
}

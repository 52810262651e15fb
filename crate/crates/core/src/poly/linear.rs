use alloc::vec::Vec;

use num_traits::Zero;

use super::{resultant::rational_determinant, Grading, Monomial, SparsePoly};
use crate::error::{Error, Result};
use crate::number::Rational;

fn linear_form(p: &SparsePoly, row: &[Rational], offset: usize, grading: Grading) -> SparsePoly {
    let n = p.nvars();
    let terms = row
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (Monomial::unit(n, offset + j), c.clone()))
        .collect();
    SparsePoly::from_map(p.vars(), terms, grading)
}

/// Substitutes `x_i -> sum_j matrix[i][j] * x_j`.
///
/// Changing by `A` and then by `B` equals changing by `A * B`.
pub fn poly_linear_change(p: &SparsePoly, matrix: &[Vec<Rational>]) -> Result<SparsePoly> {
    poly_linear_change_block(p, 0, matrix)
}

/// Linear change on the variables `start .. start + k` only, `k` the size of
/// `matrix`; bihomogeneous tags survive when the block sits inside one side.
pub fn poly_linear_change_block(p: &SparsePoly, start: usize, matrix: &[Vec<Rational>]) -> Result<SparsePoly> {
    let k = matrix.len();
    let n = p.nvars();
    if matrix.iter().any(|r| r.len() != k) || start + k > n || k == 0 {
        return Err(Error::input("linear change matrix has the wrong shape"));
    }
    if rational_determinant(matrix)?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let block_grading = |i: usize| match p.grading() {
        Grading::Bihomogeneous { split, .. } => {
            let left = Grading::Bihomogeneous { split, degrees: (1, 0) };
            let right = Grading::Bihomogeneous { split, degrees: (0, 1) };
            let inside_left = start + k <= split;
            let inside_right = start >= split;
            if inside_left || inside_right || !(start..start + k).contains(&i) {
                if i < split {
                    left
                } else {
                    right
                }
            } else {
                Grading::Homogeneous(1)
            }
        }
        _ => Grading::Homogeneous(1),
    };
    let images: Vec<SparsePoly> = (0..n)
        .map(|i| {
            if (start..start + k).contains(&i) {
                linear_form(p, &matrix[i - start], start, block_grading(i))
            } else {
                let mut v = SparsePoly::var(p.vars(), i);
                v.set_grading(block_grading(i));
                v
            }
        })
        .collect();
    let mut out = p.substitute(&images)?;
    if !out.satisfies(out.grading()) {
        out.set_grading(Grading::Ungraded);
    }
    Ok(out)
}

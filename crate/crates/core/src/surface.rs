//! Néron–Severi lattices with their intersection form and nef cone.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::number::Rational;

/// Intersection lattice with a polyhedral nef cone and an ample class.
#[derive(Clone, PartialEq, Eq)]
pub struct NSLattice {
    form: Vec<Vec<i64>>,
    nef_generators: Vec<Vec<i64>>,
    ample: Vec<i64>,
}

impl fmt::Debug for NSLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NSLattice")
            .field("form", &self.form)
            .field("nef_generators", &self.nef_generators)
            .field("ample", &self.ample)
            .finish()
    }
}

impl NSLattice {
    /// Validates shapes, symmetry and that the ample class lies in the nef cone.
    pub fn new(form: Vec<Vec<i64>>, nef_generators: Vec<Vec<i64>>, ample: Vec<i64>) -> Result<Self> {
        let r = form.len();
        if r == 0 {
            return Err(Error::input("lattice rank must be positive"));
        }
        if form.iter().any(|row| row.len() != r) {
            return Err(Error::input("intersection form is not square"));
        }
        for i in 0..r {
            for j in 0..i {
                if form[i][j] != form[j][i] {
                    return Err(Error::input("intersection form is not symmetric"));
                }
            }
        }
        if nef_generators.is_empty() || nef_generators.iter().any(|g| g.len() != r) || ample.len() != r {
            return Err(Error::input("nef generators and ample class must have length equal to the rank"));
        }
        let lattice = NSLattice { form, nef_generators, ample };
        let h = lattice.ample_class();
        if !lattice.is_nef(&h)? {
            return Err(Error::input("ample class is not in the nef cone"));
        }
        Ok(lattice)
    }

    pub fn p2() -> Self {
        NSLattice { form: vec_of(&[&[1]]), nef_generators: vec_of(&[&[1]]), ample: alloc::vec![1] }
    }

    /// Basis `e1 = {t = const}`, `e2 = {w = const}`; a curve of bidegree
    /// `(a, b)` has class `a e1 + b e2`.
    pub fn p1xp1() -> Self {
        NSLattice {
            form: vec_of(&[&[0, 1], &[1, 0]]),
            nef_generators: vec_of(&[&[1, 0], &[0, 1]]),
            ample: alloc::vec![1, 1],
        }
    }

    /// Rank `n` with the standard form and the nonnegative orthant as nef
    /// cone; a container for matrix-level experiments.
    pub fn orthant(n: usize) -> Self {
        let unit = |i: usize| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>();
        NSLattice {
            form: (0..n).map(unit).collect(),
            nef_generators: (0..n).map(unit).collect(),
            ample: alloc::vec![1; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.form.len()
    }

    pub fn intersection_form(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn nef_generators(&self) -> &[Vec<i64>] {
        &self.nef_generators
    }

    pub fn ample(&self) -> &[i64] {
        &self.ample
    }

    pub fn class(self: &Arc<Self>, coords: Vec<Rational>) -> Result<DivisorClass> {
        if coords.len() != self.rank() {
            return Err(Error::input("class length does not match the lattice rank"));
        }
        Ok(DivisorClass { lattice: self.clone(), coords })
    }

    fn ample_class(&self) -> Vec<Rational> {
        self.ample.iter().map(|&c| Rational::from_integer(c.into())).collect()
    }

    /// `a^T Q b`.
    pub fn pairing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let q = self.form[i][j];
                if q != 0 {
                    acc += ai * bj * Rational::from_integer(q.into());
                }
            }
        }
        acc
    }

    /// Coefficients of `v` in the nef generators, when the generators are
    /// linearly independent. `Ok(None)` means `v` is outside their span.
    pub fn cone_coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        let r = self.rank();
        let k = self.nef_generators.len();
        if v.len() != r {
            return Err(Error::LatticeMismatch);
        }
        if k > r {
            return Err(Error::UnsupportedCone);
        }
        // augmented system G c = v, G has the generators as columns
        let mut m: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                let mut row: Vec<Rational> =
                    self.nef_generators.iter().map(|g| Rational::from_integer(g[i].into())).collect();
                row.push(v[i].clone());
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..k {
            let Some(p) = (row..r).find(|&i| !m[i][col].is_zero()) else {
                return Err(Error::UnsupportedCone);
            };
            m.swap(p, row);
            let pivot = m[row][col].clone();
            for x in m[row].iter_mut() {
                *x /= &pivot;
            }
            for i in 0..r {
                if i != row && !m[i][col].is_zero() {
                    let f = m[i][col].clone();
                    for j in col..=k {
                        let t = &f * &m[row][j];
                        m[i][j] -= t;
                    }
                }
            }
            pivots.push(row);
            row += 1;
        }
        if (row..r).any(|i| !m[i][k].is_zero()) {
            return Ok(None);
        }
        Ok(Some(pivots.iter().map(|&i| m[i][k].clone()).collect()))
    }

    /// Nonnegative combination of the generators.
    pub fn is_nef(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.cone_coordinates(v)?.is_some_and(|c| c.iter().all(|x| !x.is_negative())))
    }
}

fn vec_of(rows: &[&[i64]]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

/// Class with rational coordinates in a lattice basis.
#[derive(Clone, PartialEq, Eq)]
pub struct DivisorClass {
    lattice: Arc<NSLattice>,
    coords: Vec<Rational>,
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter().map(crate::number::format_rational)).finish()
    }
}

impl DivisorClass {
    pub fn lattice(&self) -> &Arc<NSLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The ample reference class `H`.
    pub fn ample(lattice: &Arc<NSLattice>) -> Self {
        DivisorClass { lattice: lattice.clone(), coords: lattice.ample_class() }
    }

    pub fn intersect(&self, other: &DivisorClass) -> Result<Rational> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.lattice.pairing(&self.coords, &other.coords))
    }

    pub fn self_intersection(&self) -> Rational {
        self.lattice.pairing(&self.coords, &self.coords)
    }

    pub fn is_nef(&self) -> Result<bool> {
        self.lattice.is_nef(&self.coords)
    }

    /// `(a.b)^2 >= (a^2)(b^2)`.
    pub fn hodge_index_check(&self, other: &DivisorClass) -> Result<bool> {
        let ab = self.intersect(other)?;
        Ok(&ab * &ab >= self.self_intersection() * other.self_intersection())
    }
}

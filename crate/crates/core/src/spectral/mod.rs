//! Spectral data of integer matrices that preserve a polyhedral cone.

mod perron;
mod sturm;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::{pow10, Integer, Rational};
use crate::surface::NSLattice;
use crate::upoly::UPoly;

pub use perron::{perron_vector, Interval, PerronEntries, PerronVector};
pub use sturm::{cauchy_bound, Isolated, Sturm};

/// `10^-12`.
pub fn default_tolerance() -> Rational {
    Rational::new(Integer::one(), pow10(12))
}

/// Matrix of a pullback in the lattice basis. Cone preservation is checked
/// on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackMatrix {
    entries: Vec<Vec<Integer>>,
    lattice: Arc<NSLattice>,
}

impl PullbackMatrix {
    pub fn new(entries: Vec<Vec<Integer>>, lattice: Arc<NSLattice>) -> Result<Self> {
        let m = Self::unchecked(entries, lattice)?;
        m.check_cone()?;
        Ok(m)
    }

    /// Shape checks only; cone preservation is checked by the spectral
    /// operations that need it.
    pub fn unchecked(entries: Vec<Vec<Integer>>, lattice: Arc<NSLattice>) -> Result<Self> {
        let n = lattice.rank();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::input(format!("matrix must be {n}x{n} to match the lattice rank")));
        }
        Ok(PullbackMatrix { entries, lattice })
    }

    pub fn from_i64(rows: &[Vec<i64>], lattice: Arc<NSLattice>) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), lattice)
    }

    pub fn entries(&self) -> &[Vec<Integer>] {
        &self.entries
    }

    pub fn lattice(&self) -> &Arc<NSLattice> {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| Rational::from_integer(a.clone()) * b).sum())
            .collect()
    }

    /// The image of every nef generator is nef.
    pub fn check_cone(&self) -> Result<()> {
        for g in self.lattice.nef_generators() {
            let v: Vec<Rational> = g.iter().map(|&x| Rational::from_integer(x.into())).collect();
            let image = self.apply(&v);
            if !self.lattice.is_nef(&image)? {
                return Err(Error::ConeViolation(format!("image of generator {g:?} is not nef")));
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &PullbackMatrix) -> PullbackMatrix {
        let n = self.size();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| &self.entries[i][k] * &other.entries[k][j]).sum()).collect())
            .collect();
        PullbackMatrix { entries, lattice: self.lattice.clone() }
    }

    pub fn pow(&self, e: u32) -> PullbackMatrix {
        let n = self.size();
        let mut acc = PullbackMatrix {
            entries: (0..n).map(|i| (0..n).map(|j| Integer::from(i32::from(i == j))).collect()).collect(),
            lattice: self.lattice.clone(),
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> Integer {
        (0..self.size()).map(|i| self.entries[i][i].clone()).sum()
    }
}

/// `det(xI - T)` with coefficients in ascending order, by the
/// Faddeev–LeVerrier recursion (all divisions are exact).
pub fn char_poly(t: &PullbackMatrix) -> Vec<Integer> {
    let n = t.size();
    let a = &t.entries;
    let mut coeffs = vec![Integer::zero(); n + 1];
    coeffs[n] = Integer::one();
    let mut m = vec![vec![Integer::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Integer::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Integer::zero();
                for l in 0..n {
                    s += &a[i][l] * &m[l][j];
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = Integer::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -(tr / Integer::from(k));
    }
    coeffs
}

pub fn char_upoly(t: &PullbackMatrix) -> UPoly {
    UPoly::new(char_poly(t).into_iter().map(Rational::from_integer).collect())
}

/// Exact rank and trace.
pub fn rank_and_trace(t: &PullbackMatrix) -> (usize, Integer) {
    let mut a: Vec<Vec<Rational>> =
        t.entries.iter().map(|r| r.iter().cloned().map(Rational::from_integer).collect()).collect();
    (rational_rank(&mut a), t.trace())
}

pub(crate) fn rational_rank(a: &mut [Vec<Rational>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        for i in rank + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[rank][c];
            for j in c..cols {
                let s = &f * &a[rank][j];
                a[i][j] -= s;
            }
        }
        rank += 1;
    }
    rank
}

/// Largest real root of the characteristic polynomial.
#[derive(Clone, Debug)]
pub struct SpectralRadius {
    pub char_poly: Vec<Integer>,
    pub rho_exact: Option<Rational>,
    pub lo: Rational,
    pub hi: Rational,
    pub(crate) isolated: Option<Isolated>,
}

impl SpectralRadius {
    /// Refines the interval of an irrational radius to width at most `tol`.
    pub fn refine(&mut self, tol: &Rational) {
        if let Some(iso) = self.isolated.as_mut() {
            iso.refine_to(tol);
            self.lo = iso.lo.clone();
            self.hi = iso.hi.clone();
        }
    }
}

/// `rho_exact` when the radius is an integer; otherwise an interval of
/// width at most `tol` around the largest real root.
pub fn spectral_radius(t: &PullbackMatrix, tol: &Rational) -> Result<SpectralRadius> {
    t.check_cone()?;
    let cp = char_poly(t);
    let p = UPoly::new(cp.iter().cloned().map(Rational::from_integer).collect());
    let q = p.squarefree();
    let mut iso = Isolated::largest(&q)
        .ok_or_else(|| Error::Precondition("characteristic polynomial has no real root".into()))?;
    if let Some(r) = iso.integer_root() {
        return Ok(SpectralRadius { char_poly: cp, rho_exact: Some(r.clone()), lo: r.clone(), hi: r, isolated: None });
    }
    iso.refine_to(tol);
    Ok(SpectralRadius { char_poly: cp, rho_exact: None, lo: iso.lo.clone(), hi: iso.hi.clone(), isolated: Some(iso) })
}

/// Full spectral summary.
#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub radius: SpectralRadius,
    pub perron: PerronVector,
    pub rank: usize,
    pub trace: Integer,
}

pub fn analyze_spectrum(t: &PullbackMatrix, tol: &Rational) -> Result<SpectralResult> {
    let mut radius = spectral_radius(t, tol)?;
    let perron = perron_vector(t, &mut radius, tol)?;
    let (rank, trace) = rank_and_trace(t);
    Ok(SpectralResult { radius, perron, rank, trace })
}

/// `rho` is a real root inside the reported interval with no real root
/// above it, and the Perron vector is in the cone or flagged indeterminate.
pub fn krein_rutman_check(t: &PullbackMatrix) -> Result<bool> {
    let tol = default_tolerance();
    let mut radius = spectral_radius(t, &tol)?;
    let p = char_upoly(t).squarefree();
    let sturm = Sturm::new(&p);
    let root_inside = match &radius.rho_exact {
        Some(r) => p.eval(r).is_zero(),
        None => sturm.count(&radius.lo, &radius.hi) == 1,
    };
    let none_above = sturm.count_above(&radius.hi) == 0;
    let perron = perron_vector(t, &mut radius, &tol)?;
    Ok(root_inside && none_above && (perron.cone_certified || perron.indeterminate))
}

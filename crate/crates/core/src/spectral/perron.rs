//! Eigenvectors for the spectral radius.
//!
//! The kernel of `T - x I` is computed over `Q[x]/(m)` where `m` is a
//! squarefree polynomial having the radius as a root: `x - rho` when the
//! radius is rational, otherwise the squarefree characteristic polynomial.
//! A pivot that is a zero divisor splits `m`, and the factor that keeps the
//! radius as a root is retained. Entries of the kernel vector are then
//! polynomials in `x`, evaluated on the isolating interval of the radius.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::{PullbackMatrix, SpectralRadius, Sturm};
use crate::error::Result;
use crate::number::Rational;
use crate::upoly::UPoly;

pub type Interval = (Rational, Rational);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PerronEntries {
    Exact(Vec<Rational>),
    Interval(Vec<Interval>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerronVector {
    pub entries: PerronEntries,
    /// The vector is certified to lie in the nef cone.
    pub cone_certified: bool,
    /// Cone membership could not be decided at the working precision.
    pub indeterminate: bool,
}

impl PerronVector {
    pub fn exact(&self) -> Option<&[Rational]> {
        match &self.entries {
            PerronEntries::Exact(v) => Some(v),
            PerronEntries::Interval(_) => None,
        }
    }
}

const MAX_EXTRA_BISECTIONS: usize = 256;

pub fn perron_vector(t: &PullbackMatrix, radius: &mut SpectralRadius, tol: &Rational) -> Result<PerronVector> {
    match radius.rho_exact.clone() {
        Some(rho) => exact_vector(t, &rho),
        None => interval_vector(t, radius, tol),
    }
}

fn exact_vector(t: &PullbackMatrix, rho: &Rational) -> Result<PerronVector> {
    let m = UPoly::linear_root(rho.clone());
    let (_, basis) = kernel_mod(t, m, &|_, _| unreachable!("a linear modulus never splits"));
    let basis: Vec<Vec<Rational>> = basis.into_iter().map(|v| v.iter().map(|e| e.coeff(0)).collect()).collect();
    let lattice = t.lattice();
    let mut v = if basis.len() == 1 {
        basis[0].clone()
    } else {
        // degenerate eigenspace: first nef generator in declared order
        lattice
            .nef_generators()
            .iter()
            .map(|g| g.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>())
            .find(|g| t.apply(g).iter().zip(g).all(|(a, b)| a == &(rho * b)))
            .unwrap_or_else(|| basis[0].clone())
    };
    if let Some(first) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x /= &first;
        }
    }
    let neg: Vec<Rational> = v.iter().map(|x| -x.clone()).collect();
    let (certified, indeterminate) = match lattice.is_nef(&v) {
        Ok(true) => (true, false),
        Ok(false) => {
            if lattice.is_nef(&neg)? {
                v = neg;
                (true, false)
            } else {
                (false, false)
            }
        }
        Err(_) => (false, true),
    };
    Ok(PerronVector { entries: PerronEntries::Exact(v), cone_certified: certified, indeterminate })
}

fn interval_vector(t: &PullbackMatrix, radius: &mut SpectralRadius, tol: &Rational) -> Result<PerronVector> {
    let q = UPoly::new(radius.char_poly.iter().cloned().map(Rational::from_integer).collect()).squarefree();
    let (lo, hi) = (radius.lo.clone(), radius.hi.clone());
    let keeps_root = move |a: &UPoly, b: &UPoly| {
        if Sturm::new(a).count(&lo, &hi) == 1 {
            a.clone()
        } else {
            b.clone()
        }
    };
    let (m, basis) = kernel_mod(t, q, &keeps_root);
    let mut v = basis.into_iter().next().expect("the radius is an eigenvalue");
    let n = v.len();
    let lattice = t.lattice().clone();

    // cone coordinates c = G^-1 v when the generators form a basis
    let gens = lattice.nef_generators();
    let ginv = (gens.len() == n).then(|| inverse_columns(gens)).flatten();
    let coords = |v: &[UPoly]| -> Option<Vec<UPoly>> {
        let gi = ginv.as_ref()?;
        Some(
            (0..n)
                .map(|i| {
                    let mut acc = UPoly::zero();
                    for (j, e) in v.iter().enumerate() {
                        acc = &acc + &e.scale(&gi[i][j]);
                    }
                    acc.rem(&m)
                })
                .collect(),
        )
    };

    let vanishes = |e: &UPoly, r: &SpectralRadius| -> bool {
        if e.is_zero() {
            return true;
        }
        let g = e.gcd(&m);
        !g.is_constant() && Sturm::new(&g).count(&r.lo, &r.hi) == 1
    };

    let indeterminate;
    let mut certified = false;
    let cone = coords(&v);
    match cone {
        None => indeterminate = true,
        Some(c) => {
            let zero_at: Vec<bool> = c.iter().map(|e| vanishes(e, radius)).collect();
            let mut decided = false;
            for _ in 0..MAX_EXTRA_BISECTIONS {
                let ci: Vec<Interval> = c.iter().map(|e| eval_interval(e, &radius.lo, &radius.hi)).collect();
                let signs: Vec<Option<i32>> = ci
                    .iter()
                    .zip(&zero_at)
                    .map(|((l, h), &z)| {
                        if z {
                            Some(0)
                        } else if l.is_positive() {
                            Some(1)
                        } else if h.is_negative() {
                            Some(-1)
                        } else {
                            None
                        }
                    })
                    .collect();
                if signs.iter().all(|s| s.is_some()) {
                    let s: Vec<i32> = signs.into_iter().map(|s| s.unwrap()).collect();
                    if s.iter().all(|&x| x <= 0) && s.iter().any(|&x| x < 0) {
                        v = v.iter().map(|e| -e.clone()).collect();
                        certified = true;
                    } else {
                        certified = s.iter().all(|&x| x >= 0) && s.iter().any(|&x| x > 0);
                    }
                    decided = true;
                    break;
                }
                let w = radius.hi.clone() - radius.lo.clone();
                radius.refine(&(w / Rational::from_integer(2.into())));
            }
            indeterminate = !decided;
        }
    }

    // entry intervals at the requested width
    let zero_entry: Vec<bool> = v.iter().map(|e| vanishes(e, radius)).collect();
    let mut entries;
    let mut rounds = 0;
    loop {
        entries = v
            .iter()
            .zip(&zero_entry)
            .map(
                |(e, &z)| {
                    if z {
                        (Rational::zero(), Rational::zero())
                    } else {
                        eval_interval(e, &radius.lo, &radius.hi)
                    }
                },
            )
            .collect::<Vec<_>>();
        if entries.iter().all(|(l, h)| &(h - l) <= tol) || rounds >= MAX_EXTRA_BISECTIONS {
            break;
        }
        let w = radius.hi.clone() - radius.lo.clone();
        radius.refine(&(w / Rational::from_integer(2.into())));
        rounds += 1;
    }
    Ok(PerronVector { entries: PerronEntries::Interval(entries), cone_certified: certified, indeterminate })
}

/// Inverse of the matrix whose columns are the generators.
fn inverse_columns(gens: &[Vec<i64>]) -> Option<Vec<Vec<Rational>>> {
    let n = gens.len();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = gens.iter().map(|g| Rational::from_integer(g[i].into())).collect();
            row.extend((0..n).map(|j| Rational::from_integer(i64::from(i == j).into())));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let s = &f * &a[c][j];
                    a[i][j] -= s;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Kernel basis of `T - x I` over `Q[x]/(m)`; `choose` picks the factor
/// to keep when a pivot splits the modulus.
fn kernel_mod(t: &PullbackMatrix, mut m: UPoly, choose: &dyn Fn(&UPoly, &UPoly) -> UPoly) -> (UPoly, Vec<Vec<UPoly>>) {
    let n = t.size();
    'restart: loop {
        let mut a: Vec<Vec<UPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = UPoly::constant(Rational::from_integer(t.entries()[i][j].clone()));
                        let e = if i == j { &c - &UPoly::linear_root(Rational::zero()) } else { c };
                        e.rem(&m)
                    })
                    .collect()
            })
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0;
        for c in 0..n {
            let Some(r) = (row..n).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            let g = a[r][c].gcd(&m);
            if !g.is_constant() {
                let other = m.div_exact(&g);
                m = choose(&g, &other);
                continue 'restart;
            }
            a.swap(r, row);
            let inv = a[row][c].inverse_mod(&m).expect("unit");
            for j in 0..n {
                a[row][j] = (&a[row][j] * &inv).rem(&m);
            }
            for i in 0..n {
                if i != row && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..n {
                        a[i][j] = (&a[i][j] - &(&f * &a[row][j])).rem(&m);
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![UPoly::zero(); n];
                v[f] = UPoly::one();
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a[k][f].clone();
                }
                v
            })
            .collect();
        return (m, basis);
    }
}

/// Range of `p` over `[lo, hi]` by interval Horner evaluation.
pub(crate) fn eval_interval(p: &UPoly, lo: &Rational, hi: &Rational) -> Interval {
    let mut acc = (Rational::zero(), Rational::zero());
    for c in p.coeffs().iter().rev() {
        let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = prods.iter().min().expect("four products").clone();
        let mx = prods.iter().max().expect("four products").clone();
        acc = (mn + c, mx + c);
    }
    acc
}

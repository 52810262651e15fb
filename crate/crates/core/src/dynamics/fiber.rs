//! Topological degree by counting the points of a random fiber.
//!
//! Each trial moves the source by a random linear change, picks a random
//! target, and counts the distinct solutions of the fiber equations in an
//! affine chart by elimination. A trial is retried when the randomization
//! lands in a visibly special position (solutions at infinity, a vanishing
//! leading coefficient); all trials must agree.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::number::Rational;
use crate::poly::{
    poly_gcd, poly_gcd_many, poly_linear_change, poly_linear_change_block, poly_resultant, rational_determinant,
    SparsePoly,
};
use crate::ratmap::{RationalSelfMap, Surface};
use crate::upoly::UPoly;

/// Randomization parameters of the fiber count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberCountConfig {
    trials: usize,
    pub seed: u64,
    /// Bound on the absolute value of random shear and target entries.
    pub height: u64,
}

impl Default for FiberCountConfig {
    fn default() -> Self {
        FiberCountConfig { trials: 3, seed: 0, height: 100 }
    }
}

impl FiberCountConfig {
    pub fn new(trials: usize, seed: u64, height: u64) -> Result<Self> {
        if trials < 3 {
            return Err(Error::input("at least 3 fiber-count trials are required"));
        }
        Ok(FiberCountConfig { trials, seed, height })
    }

    pub fn trials(&self) -> usize {
        self.trials
    }
}

/// Attempts per trial before the trial is declared failed.
const MAX_RESAMPLES: usize = 32;

/// Number of preimages of a generic point.
pub fn topological_degree(f: &RationalSelfMap, cfg: &FiberCountConfig) -> Result<u64> {
    if !f.base_points_finite()? {
        return Err(Error::Precondition("base locus is not finite".into()));
    }
    if f.factors()[0].iter().filter(|p| !p.is_zero()).count() < 2 && f.surface() == Surface::P2 {
        return Err(Error::Precondition("map is not dominant".into()));
    }
    let counts: Vec<Option<u64>> = (0..cfg.trials)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            run_trial(f, cfg.height, &mut rng)
        })
        .collect::<Result<_>>()?;
    match counts.first() {
        Some(Some(c)) if counts.iter().all(|x| x == &Some(*c)) => Ok(*c),
        _ => Err(Error::Genericity(counts)),
    }
}

fn run_trial(f: &RationalSelfMap, height: u64, rng: &mut ChaCha8Rng) -> Result<Option<u64>> {
    for _ in 0..MAX_RESAMPLES {
        let attempt = match f.surface() {
            Surface::P2 => p2_attempt(f, height, rng)?,
            Surface::P1xP1 => p1xp1_attempt(f, height, rng)?,
        };
        if attempt.is_some() {
            return Ok(attempt);
        }
    }
    Ok(None)
}

fn random_int(h: u64, rng: &mut ChaCha8Rng) -> Rational {
    let h = h as i64;
    Rational::from_integer(rng.gen_range(-h..=h).into())
}

fn random_invertible(n: usize, h: u64, rng: &mut ChaCha8Rng) -> Result<Option<Vec<Vec<Rational>>>> {
    let m: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| random_int(h, rng)).collect()).collect();
    Ok((!rational_determinant(&m)?.is_zero()).then_some(m))
}

/// Binary forms (or univariate polynomials) with a common zero.
fn share_zero(a: &SparsePoly, b: &SparsePoly) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Ok(true);
    }
    Ok(!poly_gcd(a, b)?.is_constant())
}

/// Distinct roots of `r` that are not roots of `b`.
fn count_new_roots(r: &UPoly, b: &UPoly) -> u64 {
    let s = r.squarefree();
    let common = if b.is_zero() { s.clone() } else { s.gcd(b) };
    (s.deg() - common.deg()) as u64
}

fn p2_attempt(f: &RationalSelfMap, h: u64, rng: &mut ChaCha8Rng) -> Result<Option<u64>> {
    let Some(shear) = random_invertible(3, h, rng)? else {
        return Ok(None);
    };
    let comps: Vec<SparsePoly> = f.factors()[0].iter().map(|p| poly_linear_change(p, &shear)).collect::<Result<_>>()?;
    let (a, b) = (random_int(h, rng), random_int(h, rng));
    let big_f = &comps[0] - &comps[2].scale(&a);
    let big_g = &comps[1] - &comps[2].scale(&b);
    if big_f.is_zero() || big_g.is_zero() {
        return Ok(None);
    }
    let zero = Rational::zero();
    let one = Rational::one();
    // no solutions on the line z = 0
    if share_zero(&big_f.specialize(2, &zero), &big_g.specialize(2, &zero))? {
        return Ok(None);
    }
    let d = big_f.total_degree().unwrap_or(0);
    let e = big_g.total_degree().unwrap_or(0);
    // leading coefficients in y must be nonzero constants
    if big_f.coefficient(&[0, d, 0]).is_zero() || big_g.coefficient(&[0, e, 0]).is_zero() {
        return Ok(None);
    }
    let af = big_f.specialize(2, &one);
    let ag = big_g.specialize(2, &one);
    let r = poly_resultant(&af, &ag, 1)?.to_upoly(0)?;
    if r.is_zero() {
        return Ok(None);
    }
    let base = base_eliminant(&comps.iter().map(|p| p.specialize(2, &one)).collect::<Vec<_>>(), 0, 1, rng)?;
    let Some(base) = base else {
        return Ok(None);
    };
    Ok(Some(count_new_roots(&r, &base)))
}

/// A polynomial in `x` vanishing at the `x`-coordinates of the common
/// zeros of the given polynomials.
fn base_eliminant(polys: &[SparsePoly], x: usize, y: usize, rng: &mut ChaCha8Rng) -> Result<Option<UPoly>> {
    let nonzero: Vec<&SparsePoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    let p = nonzero[0];
    for _ in 0..8 {
        let mut q = SparsePoly::zero(p.vars());
        for r in &nonzero[1..] {
            q = &q + &r.scale(&random_int(1000, rng));
        }
        if q.is_zero() {
            continue;
        }
        if p.degree_in(y) == 0 && q.degree_in(y) == 0 {
            return Ok(Some(poly_gcd(p, &q)?.to_upoly(x)?));
        }
        let r = poly_resultant(p, &q, y)?;
        if !r.is_zero() {
            return Ok(Some(r.to_upoly(x)?));
        }
    }
    Ok(None)
}

fn p1xp1_attempt(f: &RationalSelfMap, h: u64, rng: &mut ChaCha8Rng) -> Result<Option<u64>> {
    let (Some(s1), Some(s2)) = (random_invertible(2, h, rng)?, random_invertible(2, h, rng)?) else {
        return Ok(None);
    };
    let moved: Vec<Vec<SparsePoly>> = f
        .factors()
        .iter()
        .map(|comps| {
            comps
                .iter()
                .map(|p| poly_linear_change_block(&poly_linear_change_block(p, 0, &s1)?, 2, &s2))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let (a, b) = (random_int(h, rng), random_int(h, rng));
    let big_f = &moved[0][0] - &moved[0][1].scale(&a);
    let big_g = &moved[1][0] - &moved[1][1].scale(&b);
    if big_f.is_zero() || big_g.is_zero() {
        return Ok(None);
    }
    let zero = Rational::zero();
    let one = Rational::one();
    // t = (1 : 0)
    let tf = big_f.specialize(1, &zero).specialize(0, &one);
    let tg = big_g.specialize(1, &zero).specialize(0, &one);
    if share_zero(&tf, &tg)? {
        return Ok(None);
    }
    // w = (1 : 0)
    let wf = big_f.specialize(3, &zero).specialize(2, &one);
    let wg = big_g.specialize(3, &zero).specialize(2, &one);
    if share_zero(&wf, &wg)? {
        return Ok(None);
    }
    // affine chart t1 = w1 = 1, then t -> t - c w so that distinct
    // solutions get distinct t-coordinates
    let c = random_int(h, rng);
    if c.is_zero() {
        return Ok(None);
    }
    let vars = big_f.vars().clone();
    let v = |i| SparsePoly::var(&vars, i);
    let images = [&v(0) - &v(2).scale(&c), v(1), v(2), v(3)];
    let chart =
        |p: &SparsePoly| -> Result<SparsePoly> { p.specialize(1, &one).specialize(3, &one).substitute(&images) };
    let (af, ag) = (chart(&big_f)?, chart(&big_g)?);
    let constant_lead = |p: &SparsePoly| p.coefficients_in(2).last().is_some_and(|l| l.is_constant() && !l.is_zero());
    if !constant_lead(&af) || !constant_lead(&ag) {
        return Ok(None);
    }
    let r = poly_resultant(&af, &ag, 2)?.to_upoly(0)?;
    if r.is_zero() {
        return Ok(None);
    }
    // t-coordinates of base points of either factor
    let mut base = UPoly::one();
    for comps in &moved {
        let c: Vec<SparsePoly> = comps.iter().map(chart).collect::<Result<_>>()?;
        let nonzero: Vec<&SparsePoly> = c.iter().filter(|p| !p.is_zero()).collect();
        let e = if nonzero.len() < 2 {
            UPoly::one()
        } else if nonzero.iter().all(|p| p.degree_in(2) == 0) {
            poly_gcd_many(&nonzero)?.to_upoly(0)?
        } else {
            poly_resultant(nonzero[0], nonzero[1], 2)?.to_upoly(0)?
        };
        if e.is_zero() {
            return Err(Error::Precondition(format!("factor components share a factor: {:?}", comps)));
        }
        base = &base * &e;
    }
    Ok(Some(count_new_roots(&r, &base)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    fn p2(f: [&str; 3]) -> RationalSelfMap {
        RationalSelfMap::from_expressions(Surface::P2, &[&f], &BTreeMap::new()).unwrap()
    }

    #[test]
    fn simple_degrees() {
        let cfg = FiberCountConfig::default();
        assert_eq!(topological_degree(&p2(["x^2", "y^2", "z^2"]), &cfg).unwrap(), 4);
        assert_eq!(topological_degree(&RationalSelfMap::identity(Surface::P2), &cfg).unwrap(), 1);
        // the standard quadratic involution is birational
        assert_eq!(topological_degree(&p2(["y*z", "x*z", "x*y"]), &cfg).unwrap(), 1);
        assert_eq!(topological_degree(&RationalSelfMap::identity(Surface::P1xP1), &cfg).unwrap(), 1);
    }

    #[test]
    fn too_few_trials_rejected() {
        assert!(FiberCountConfig::new(2, 0, 100).is_err());
    }

    #[test]
    fn zero_height_cannot_randomize() {
        let cfg = FiberCountConfig::new(3, 0, 0).unwrap();
        assert!(matches!(topological_degree(&p2(["x^2", "y^2", "z^2"]), &cfg), Err(Error::Genericity(_))));
    }
}

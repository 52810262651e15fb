//! Real root isolation with Sturm sequences.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::number::Rational;
use crate::upoly::UPoly;

/// Sturm chain of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    chain: Vec<UPoly>,
}

impl Sturm {
    pub fn new(p: &UPoly) -> Self {
        let mut chain = alloc::vec![p.clone()];
        if p.deg() > 0 {
            chain.push(p.derivative());
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                // positive rescaling keeps the signs
                chain.push(-r.primitive());
            }
        }
        Sturm { chain }
    }

    pub fn poly(&self) -> &UPoly {
        &self.chain[0]
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    fn at_pos_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at_pos_inf()))
    }

    fn at_neg_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let s = p.sign_at_pos_inf();
            if p.deg() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.at(a).saturating_sub(self.at(b))
    }

    /// Distinct real roots greater than `a`.
    pub fn count_above(&self, a: &Rational) -> usize {
        self.at(a).saturating_sub(self.at_pos_inf())
    }

    pub fn count_real(&self) -> usize {
        self.at_neg_inf().saturating_sub(self.at_pos_inf())
    }
}

/// Every root has absolute value below this bound.
pub fn cauchy_bound(p: &UPoly) -> Rational {
    let lc = p.leading().abs();
    let m = p.coeffs()[..p.deg()].iter().map(|c| c.abs() / &lc).fold(Rational::zero(), |a, b| a.max(b));
    m + Rational::from_integer(1.into())
}

/// Half-open interval `(lo, hi]` containing exactly one root of the chain's
/// polynomial, the largest real one.
#[derive(Clone, Debug)]
pub struct Isolated {
    pub sturm: Sturm,
    pub lo: Rational,
    pub hi: Rational,
}

impl Isolated {
    /// `None` when there is no real root.
    pub fn largest(p: &UPoly) -> Option<Self> {
        let sturm = Sturm::new(p);
        if p.deg() == 0 || sturm.count_real() == 0 {
            return None;
        }
        let b = cauchy_bound(p);
        let mut lo = -b.clone();
        let mut hi = b;
        while sturm.count(&lo, &hi) > 1 {
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            if sturm.count(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(Isolated { sturm, lo, hi })
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn bisect(&mut self) {
        let mid = (&self.lo + &self.hi) / Rational::from_integer(2.into());
        if self.sturm.count(&mid, &self.hi) == 1 {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_to(&mut self, tol: &Rational) {
        while &self.width() > tol {
            self.bisect();
        }
    }

    /// Integer root inside the interval, if any; the polynomials handled
    /// here are monic with integer coefficients, so rational roots are
    /// integers.
    pub fn integer_root(&mut self) -> Option<Rational> {
        let one = Rational::from_integer(1.into());
        self.refine_to(&one);
        let mut c = self.lo.floor();
        while c <= self.hi {
            if c > self.lo && self.sturm.poly().eval(&c).is_zero() {
                return Some(c);
            }
            c += &one;
        }
        None
    }
}

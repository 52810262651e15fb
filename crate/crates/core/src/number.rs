//! Exact numbers and their decimal renderings.
//!
//! [`Rational`] is always kept reduced with a positive denominator, zero is
//! `0/1`. Decimal output is produced from exact values with an explicit
//! rounding direction so that interval endpoints can be rounded outward.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Integer {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow10(e: u32) -> Integer {
    num_traits::pow(BigInt::from(10u32), e as usize)
}

/// Parses `int` or `int/posint`, optionally signed, ASCII only.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    if den.starts_with(['-', '+']) {
        return None;
    }
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Nearest,
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

fn round_to_integer(q: &Rational, mode: Rounding) -> Integer {
    match mode {
        Rounding::Down => q.floor().to_integer(),
        Rounding::Up => q.ceil().to_integer(),
        // half away from zero
        Rounding::Nearest => {
            let m = (q.abs() + ratio(1, 2)).floor().to_integer();
            if q.is_negative() {
                -m
            } else {
                m
            }
        }
    }
}

/// Floor of log10 of a positive rational.
fn decimal_exponent(a: &Rational) -> i64 {
    debug_assert!(a.is_positive());
    let bits = a.numer().bits() as i64 - a.denom().bits() as i64;
    let mut e = (bits as f64 * core::f64::consts::LOG10_2) as i64;
    let ten = rat(10);
    let scaled = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(pow10(e as u32))
        } else {
            Rational::new(BigInt::one(), pow10((-e) as u32))
        }
    };
    let mut p = scaled(e);
    while &p > a {
        e -= 1;
        p /= &ten;
    }
    loop {
        let next = &p * &ten;
        if &next <= a {
            e += 1;
            p = next;
        } else {
            break;
        }
    }
    e
}

/// Renders `q` with exactly `digits` significant digits in positional
/// notation, keeping trailing zeros.
pub fn to_significant(q: &Rational, digits: u32, mode: Rounding) -> String {
    assert!(digits > 0);
    if q.is_zero() {
        return "0".to_string();
    }
    let mut e = decimal_exponent(&q.abs());
    let shift = digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        q * Rational::from_integer(pow10(shift as u32))
    } else {
        q / Rational::from_integer(pow10((-shift) as u32))
    };
    let mut m = round_to_integer(&scaled, mode);
    let limit = pow10(digits);
    if m.abs() >= limit {
        e += 1;
        // m is a multiple of 10 after carrying
        m /= 10;
    }
    if m.is_zero() {
        return "0".to_string();
    }
    let negative = m.sign() == Sign::Minus;
    let body = m.abs().to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e < 0 {
        out.push_str("0.");
        for _ in 0..(-e - 1) {
            out.push('0');
        }
        out.push_str(&body);
    } else if (e as usize) + 1 >= body.len() {
        out.push_str(&body);
        for _ in body.len()..(e as usize + 1) {
            out.push('0');
        }
    } else {
        let (int_part, frac) = body.split_at(e as usize + 1);
        out.push_str(int_part);
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// Fixed-point scale used by [`ln`] and [`nth_root`], in decimal digits.
const FIXED_DIGITS: u32 = 40;

/// 2 * atanh(a/b) scaled by `scale`, for 0 <= a/b <= 1/3.
fn two_atanh_fixed(a: &BigInt, b: &BigInt, scale: &BigInt) -> BigInt {
    let mut power = scale * a / b;
    let ratio_num = a * a;
    let ratio_den = b * b;
    let mut sum = BigInt::zero();
    let mut k: u32 = 1;
    while !power.is_zero() {
        sum += &power / BigInt::from(k);
        power = power * &ratio_num / &ratio_den;
        k += 2;
    }
    sum * 2
}

fn ln_positive_integer_fixed(n: &BigInt, scale: &BigInt, ln2: &BigInt) -> BigInt {
    debug_assert!(n.is_positive());
    // n = m * 2^k with m in [1, 2)
    let k = n.bits() - 1;
    let two_k = BigInt::one() << k;
    // ln m = 2 atanh((m - 1)/(m + 1)) with m = n / 2^k
    let num = n - &two_k;
    let den = n + &two_k;
    two_atanh_fixed(&num, &den, scale) + ln2 * BigInt::from(k)
}

/// Natural logarithm of a positive rational, within 1e-35.
pub fn ln(q: &Rational) -> Rational {
    assert!(q.is_positive(), "ln of a non-positive number");
    let scale = pow10(FIXED_DIGITS);
    let ln2 = two_atanh_fixed(&BigInt::one(), &BigInt::from(3), &scale);
    let value = ln_positive_integer_fixed(q.numer(), &scale, &ln2) - ln_positive_integer_fixed(q.denom(), &scale, &ln2);
    Rational::new(value, scale)
}

/// Rational bracket `[lo, hi]` of the real `n`-th root of a non-negative
/// rational, with `hi - lo = 10^-40`.
pub fn nth_root(q: &Rational, n: u32) -> (Rational, Rational) {
    assert!(!q.is_negative() && n > 0);
    if n == 1 {
        return (q.clone(), q.clone());
    }
    let scale = pow10(FIXED_DIGITS);
    // floor((num * scale^n / den)^(1/n))
    let big = q.numer() * num_traits::pow(scale.clone(), n as usize) / q.denom();
    let r = big.nth_root(n);
    let lo = Rational::new(r.clone(), scale.clone());
    let hi = Rational::new(r + 1, scale);
    (lo, hi)
}

/// Upper bound for the real `n`-th root, exact when the root is rational
/// at the working precision.
pub fn nth_root_upper(q: &Rational, n: u32) -> Rational {
    let (lo, hi) = nth_root(q, n);
    if num_traits::pow(lo.clone(), n as usize) == *q {
        lo
    } else {
        hi
    }
}

/// `a^(1/m) <= b^(1/n)` for non-negative rationals, decided exactly.
pub fn root_le(a: &Rational, m: u32, b: &Rational, n: u32) -> bool {
    num_traits::pow(a.clone(), n as usize) <= num_traits::pow(b.clone(), m as usize)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Rational>) -> Integer {
    let mut l = BigInt::one();
    for v in values {
        if !v.denom().is_one() {
            l = l.lcm(v.denom());
        }
    }
    l
}

pub(crate) fn gcd_of_numerators<'a>(values: impl Iterator<Item = &'a Rational>) -> Integer {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v.numer());
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divisors of a non-zero integer, positive only, unsorted.
pub fn positive_divisors(n: &Integer) -> Vec<Integer> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

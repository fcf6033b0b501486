//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `q (q-1) ... (q-k+1)`; zero when `k > q`.
pub fn falling(q: usize, k: usize) -> BigInt {
    if k > q {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(q - i))
}

pub fn falling_rat(q: usize, k: usize) -> Rational {
    Rational::from_integer(falling(q, k))
}

pub fn factorial(n: usize) -> BigInt {
    falling(n, n)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / factorial(k)
}

/// Integer power with `0^0 = 1`.
pub fn pow(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Integer power allowing negative exponents (x must be nonzero then).
pub fn powi(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        pow(x, e as u32)
    } else {
        pow(&x.recip(), (-e) as u32)
    }
}

/// Exact square root of a nonnegative rational, if it is a rational square.
pub fn sqrt_exact(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    // Big numerators and denominators overflow a direct f64 conversion; scale through bit lengths.
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let nb = x.numer().bits() as i64;
            let db = x.denom().bits() as i64;
            let shift_n = (nb - 60).max(0) as usize;
            let shift_d = (db - 60).max(0) as usize;
            let n = (x.numer() >> shift_n).to_f64().unwrap_or(0.0);
            let d = (x.denom() >> shift_d).to_f64().unwrap_or(1.0);
            n / d * 2f64.powi(shift_n as i32 - shift_d as i32)
        }
    }
}

/// Formats as `p/q`, or `p` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    } else if let Ok(n) = s.parse::<BigInt>() {
        Ok(Rational::from_integer(n))
    } else {
        // decimal literal such as 0.5
        let (int, dec) = s.split_once('.').ok_or_else(bad)?;
        let digits = format!("{int}{dec}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), dec.len());
        Ok(Rational::new(n, d))
    }
}

/// Nearest integer to `sqrt(x)` for a nonnegative rational, ties rounded up.
pub fn round_sqrt(x: &Rational) -> BigInt {
    // d = round(sqrt(x)) is the largest d with (d - 1/2)^2 <= x, i.e. (2d-1)^2 <= 4x.
    let four_x = x * rat(4);
    let mut d = BigInt::from(to_f64(x).sqrt().round() as i64);
    let ok = |d: &BigInt| {
        let t = BigInt::from(2) * d - 1;
        Rational::from_integer(&t * &t) <= four_x
    };
    while d > BigInt::zero() && !ok(&d) {
        d -= 1;
    }
    while ok(&(&d + 1)) {
        d += 1;
    }
    d
}

/// Nearest integer to a rational, ties rounded up.
pub fn round_rational(x: &Rational) -> BigInt {
    (x + frac(1, 2)).floor().to_integer()
}

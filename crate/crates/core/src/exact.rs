//! Exact scalars: big rationals and rational multiples of square roots.
//!
//! Normalization constants such as `sqrt(D)` or `r^(-1/2)` never need to be
//! added to each other with different radicands in this crate, so a single
//! surd `a * sqrt(m)` (with `a` rational and `m` a squarefree integer) is
//! enough to keep isometries and their adjoints exact.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n / d` as a big rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fall back on a ratio of floats if the direct conversion overflows.
        q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// Integer power with a possibly negative exponent.
pub fn pow_i(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        Pow::pow(q, e as u64)
    } else {
        Pow::pow(q.recip(), e.unsigned_abs())
    }
}

/// Parses `"3"`, `"-2"`, `"1/3"` or a plain decimal such as `"0.3"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(text.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = Pow::pow(BigInt::from(10u32), frac.len() as u64);
    let q = Rational::new(numer, denom);
    Ok(if negative { -q } else { q })
}

/// Comma-separated list of rationals.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

/// Writes `n = s^2 * m` with `m` squarefree and returns `(s, m)`.
///
/// Trial division runs up to 2^16; a leftover cofactor is folded into the
/// square part when it is a perfect square and treated as squarefree
/// otherwise, which is exact for every cofactor below 2^48.
fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    const LIMIT: u64 = 1 << 16;
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut k: u64 = 2;
    while k < LIMIT {
        let kb = BigUint::from(k);
        if &kb * &kb > rest {
            break;
        }
        let k2 = &kb * &kb;
        while (&rest % &k2).is_zero() {
            rest /= &k2;
            square *= &kb;
        }
        if (&rest % &kb).is_zero() {
            rest /= &kb;
            free *= &kb;
        }
        k += if k == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        square *= root;
    } else {
        free *= rest;
    }
    (square, free)
}

/// A real number `coeff * sqrt(radicand)` with a squarefree radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    coeff: Rational,
    radicand: BigUint,
}

impl Surd {
    pub fn zero() -> Self {
        Surd {
            coeff: Rational::zero(),
            radicand: BigUint::one(),
        }
    }

    pub fn one() -> Self {
        Surd::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Surd {
            coeff: q,
            radicand: BigUint::one(),
        }
    }

    /// The nonnegative square root of a nonnegative rational.
    pub fn sqrt_of(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::Unsupported(format!(
                "square root of negative rational {q}"
            )));
        }
        if q.is_zero() {
            return Ok(Surd::zero());
        }
        // sqrt(p/d) = sqrt(p*d) / d
        let p = q.numer().magnitude().clone();
        let d = q.denom().magnitude().clone();
        let (square, free) = squarefree_decompose(&(&p * &d));
        let coeff = Rational::new(BigInt::from(square), BigInt::from(d));
        Ok(Surd {
            coeff,
            radicand: free,
        })
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.is_zero() || self.radicand.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeff.clone())
    }

    pub fn square(&self) -> Rational {
        &self.coeff * &self.coeff * Rational::from_integer(BigInt::from(self.radicand.clone()))
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        if self.is_zero() || other.is_zero() {
            return Surd::zero();
        }
        let g = self.radicand.gcd(&other.radicand);
        let radicand = (&self.radicand / &g) * (&other.radicand / &g);
        let coeff = &self.coeff * &other.coeff * Rational::from_integer(BigInt::from(g));
        Surd { coeff, radicand }
    }

    pub fn mul_rational(&self, q: &Rational) -> Surd {
        if q.is_zero() {
            return Surd::zero();
        }
        Surd {
            coeff: &self.coeff * q,
            radicand: self.radicand.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        // 1 / (a sqrt(m)) = sqrt(m) / (a m)
        let m = Rational::from_integer(BigInt::from(self.radicand.clone()));
        Some(Surd {
            coeff: (&self.coeff * m).recip(),
            radicand: self.radicand.clone(),
        })
    }

    pub fn pow(&self, e: u32) -> Surd {
        (0..e).fold(Surd::one(), |acc, _| acc.mul(self))
    }

    pub fn add(&self, other: &Surd) -> Result<Surd> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.radicand != other.radicand {
            return Err(Error::IncompatibleSurds(
                self.radicand.to_string(),
                other.radicand.to_string(),
            ));
        }
        let coeff = &self.coeff + &other.coeff;
        if coeff.is_zero() {
            return Ok(Surd::zero());
        }
        Ok(Surd {
            coeff,
            radicand: self.radicand.clone(),
        })
    }

    pub fn neg(&self) -> Surd {
        Surd {
            coeff: -&self.coeff,
            radicand: self.radicand.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}

//! Exact arithmetic in the cyclotomic field `Q(ζ)`, `ζ = ζ₁₆`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ⁷` with the reduction
//! rule `ζ⁸ = −1` (the minimal polynomial is `Φ₁₆ = x⁸ + 1`). Roots of unity of
//! order 8, 4 and 2 are embedded as `ζ²`, `ζ⁴` and `ζ⁸`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::parse::{Cursor, ParseError};
use crate::Rational;

pub const DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("division by zero in Q(zeta_16)")]
    DivisionByZero,
    #[error("zeta -> zeta^{0} is not a field automorphism (exponent must be odd)")]
    InvalidAutomorphism(i64),
    #[error("{0} does not divide 16")]
    InvalidOrder(u32),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An element of `Q(ζ₁₆)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo16 {
    coeffs: [Rational; DEGREE],
}

impl Cyclo16 {
    pub fn zero() -> Self {
        Cyclo16 {
            coeffs: std::array::from_fn(|_| Rational::zero()),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut x = Self::zero();
        x.coeffs[0] = q;
        x
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_coeffs(coeffs: [Rational; DEGREE]) -> Self {
        Cyclo16 { coeffs }
    }

    /// `ζ^e`, with `e` reduced modulo 16.
    pub fn root_power(e: i64) -> Self {
        let e = e.rem_euclid(16) as usize;
        let mut x = Self::zero();
        if e < DEGREE {
            x.coeffs[e] = Rational::one();
        } else {
            x.coeffs[e - DEGREE] = -Rational::one();
        }
        x
    }

    /// The primitive `n`-th root of unity `ζ^(16/n)` raised to `e`.
    pub fn root_of_order(n: u32, e: i64) -> Result<Self, CycloError> {
        if n == 0 || 16 % n != 0 {
            return Err(CycloError::InvalidOrder(n));
        }
        Ok(Self::root_power(i64::from(16 / n) * e))
    }

    pub fn coeffs(&self) -> &[Rational; DEGREE] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if `self` lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then_some(&self.coeffs[0])
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclo16 {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * q),
        }
    }

    /// The ring automorphism `ζ ↦ ζ^t`; `t` must be odd.
    pub fn conjugate_by_galois(&self, t: i64) -> Result<Self, CycloError> {
        if t.rem_euclid(2) == 0 {
            return Err(CycloError::InvalidAutomorphism(t));
        }
        let mut out = Self::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (i as i64 * t).rem_euclid(16) as usize;
            if e < DEGREE {
                out.coeffs[e] += c;
            } else {
                out.coeffs[e - DEGREE] -= c;
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse through the field norm: the product of the seven
    /// non-trivial Galois conjugates times `self` is rational.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let mut cofactor = Self::one();
        for t in (3..16).step_by(2) {
            cofactor = &cofactor * &self.conjugate_by_galois(t)?;
        }
        let norm = (self * &cofactor)
            .as_rational()
            .cloned()
            .expect("field norm of Q(zeta_16) is rational");
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, CycloError> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, CycloError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Smallest `d ≥ 1` with `self^d = 1`, searched among divisors of 16.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        [1u32, 2, 4, 8, 16]
            .into_iter()
            .find(|&d| self.pow(i64::from(d)).map(|p| p.is_one()).unwrap_or(false))
    }
}

/// Sum of the primitive `n`-th roots of unity, i.e. the Möbius value `μ(n)`,
/// evaluated by exact summation inside `Q(ζ₁₆)`.
pub fn primitive_root_trace_sum(n: u32) -> Result<i64, CycloError> {
    if n == 0 || 16 % n != 0 {
        return Err(CycloError::InvalidOrder(n));
    }
    let mut sum = Cyclo16::zero();
    for e in 0..16i64 {
        let order = 16 / num_integer::gcd(e, 16) as u32;
        if order == n {
            sum = &sum + &Cyclo16::root_power(e);
        }
    }
    let q = sum
        .as_rational()
        .expect("trace of a root of unity is rational");
    Ok(q.to_integer().to_i64().expect("small integer"))
}

impl<'a> Add<&'a Cyclo16> for &'a Cyclo16 {
    type Output = Cyclo16;
    fn add(self, rhs: &Cyclo16) -> Cyclo16 {
        Cyclo16 {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &rhs.coeffs[i]),
        }
    }
}

impl<'a> Sub<&'a Cyclo16> for &'a Cyclo16 {
    type Output = Cyclo16;
    fn sub(self, rhs: &Cyclo16) -> Cyclo16 {
        Cyclo16 {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] - &rhs.coeffs[i]),
        }
    }
}

impl<'a> Mul<&'a Cyclo16> for &'a Cyclo16 {
    type Output = Cyclo16;
    fn mul(self, rhs: &Cyclo16) -> Cyclo16 {
        let mut out = Cyclo16::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                if i + j < DEGREE {
                    out.coeffs[i + j] += p;
                } else {
                    out.coeffs[i + j - DEGREE] -= p;
                }
            }
        }
        out
    }
}

impl Neg for &Cyclo16 {
    type Output = Cyclo16;
    fn neg(self) -> Cyclo16 {
        Cyclo16 {
            coeffs: std::array::from_fn(|i| -&self.coeffs[i]),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclo16> for Cyclo16 {
            type Output = Cyclo16;
            fn $m(self, rhs: Cyclo16) -> Cyclo16 {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclo16 {
    type Output = Cyclo16;
    fn neg(self) -> Cyclo16 {
        -&self
    }
}

/// Canonical text form, e.g. `(-1/2) + (3)*z^5`; `z` denotes `ζ₁₆`.
impl fmt::Display for Cyclo16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo16[{self}]")
    }
}

fn parse_rational(cur: &mut Cursor<'_>) -> Result<Rational, ParseError> {
    let negative = cur.eat('-');
    let num = cur.big_uint()?;
    let den = if cur.eat('/') {
        let at = cur.pos();
        let d = cur.big_uint()?;
        if d.is_zero() {
            return Err(ParseError::new(at, "zero denominator"));
        }
        d
    } else {
        BigInt::one()
    };
    let q = Rational::new(num, den);
    Ok(if negative { -q } else { q })
}

fn parse_power(cur: &mut Cursor<'_>) -> Result<i64, ParseError> {
    cur.expect('z')?;
    if cur.eat('^') {
        Ok(i64::from(cur.small_uint()?))
    } else {
        Ok(1)
    }
}

impl FromStr for Cyclo16 {
    type Err = CycloError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        if s.trim() == "0" {
            return Ok(Cyclo16::zero());
        }
        let mut acc = Cyclo16::zero();
        let mut sign_negative = cur.eat('-');
        loop {
            let (coeff, power) = match cur.peek() {
                Some('(') => {
                    cur.bump();
                    let q = parse_rational(&mut cur)?;
                    cur.expect(')')?;
                    let power = if cur.eat('*') { parse_power(&mut cur)? } else { 0 };
                    (q, power)
                }
                Some('z') => (Rational::one(), parse_power(&mut cur)?),
                _ => return Err(cur.error("expected '(' or 'z'").into()),
            };
            let coeff = if sign_negative { -coeff } else { coeff };
            acc = &acc + &Cyclo16::root_power(power).scale(&coeff);
            match cur.peek() {
                None => break,
                Some('+') => {
                    cur.bump();
                    sign_negative = false;
                }
                Some('-') => {
                    cur.bump();
                    sign_negative = true;
                }
                Some(_) => return Err(cur.error("expected '+' or '-'").into()),
            }
        }
        Ok(acc)
    }
}

/// Parse the canonical text form. Exposed as a free function for fuzzing.
pub fn parse_cyclo(s: &str) -> Result<Cyclo16, CycloError> {
    s.parse()
}

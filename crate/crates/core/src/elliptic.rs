//! Weierstrass fibrations `y² = x³ + a(t)x + b(t)` over `P¹`.
//!
//! A K3 surface needs `deg a ≤ 8` and `deg b ≤ 12`; the place at infinity is
//! read off from `s⁸a(1/s)`, `s¹²b(1/s)` and `s²⁴Δ(1/s)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::parse::{Cursor, ParseError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("degree bound exceeded: deg a = {deg_a:?} (max 8), deg b = {deg_b:?} (max 12)")]
    DegreeBound { deg_a: Option<usize>, deg_b: Option<usize> },
    #[error("degenerate model: discriminant is identically zero")]
    Degenerate,
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("vanishing orders ({0:?}, {1:?}, {2}) match no Kodaira type")]
    InconsistentOrders(Option<u32>, Option<u32>, u32),
    #[error("discriminant factor {factor} of multiplicity {multiplicity} has irrational roots")]
    UnresolvedCluster { factor: String, multiplicity: u32 },
    #[error("rational root search exceeded the trial-division limit")]
    RootSearchLimit,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// A univariate polynomial in `t` with rational coefficients, ascending.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// `c·t^e`.
    pub fn monomial(c: Rational, e: usize) -> Self {
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = c;
        RatPoly::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RatPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(RatPoly::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly), EllipticError> {
        let dd = d.degree().ok_or(EllipticError::DivisionByZero)?;
        let lead = d.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return Ok((RatPoly::zero(), self.clone()));
        };
        let mut quot = vec![Rational::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let q = &rem[i + dd] / lead;
            if q.is_zero() {
                continue;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Exact quotient; panics in debug builds if the division is not exact.
    fn div_exact(&self, d: &RatPoly) -> RatPoly {
        let (q, r) = self.div_rem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero());
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).unwrap();
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Yun's squarefree decomposition of a nonzero polynomial: pairwise coprime
    /// monic squarefree factors with their multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let g = f.gcd(&df);
        let mut c = f.div_exact(&g);
        let mut d = &df.div_exact(&g) - &c.derivative();
        let mut i = 1;
        while c.degree().unwrap_or(0) > 0 {
            let a = c.gcd(&d);
            c = c.div_exact(&a);
            d = &d.div_exact(&a) - &c.derivative();
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Multiplicity of the root `x`; `None` for the zero polynomial.
    pub fn order_at(&self, x: &Rational) -> Option<u32> {
        let lin = RatPoly::new(vec![-x.clone(), Rational::one()]);
        self.order_along(&lin)
    }

    /// Largest `e` with `f^e` dividing `self`; `None` for the zero polynomial
    /// or a constant `f`.
    pub fn order_along(&self, f: &RatPoly) -> Option<u32> {
        if self.is_zero() || f.degree().unwrap_or(0) == 0 {
            return None;
        }
        let mut p = self.clone();
        let mut e = 0;
        loop {
            let (q, r) = p.div_rem(f).ok()?;
            if !r.is_zero() {
                return Some(e);
            }
            p = q;
            e += 1;
        }
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Result<Vec<Rational>, EllipticError> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return Ok(roots);
        }
        let ints = self.integer_coefficients();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap();
        if low > 0 {
            roots.push(Rational::zero());
        }
        let ints = &ints[low..];
        if ints.len() > 1 {
            let num = divisors(&ints[0])?;
            let den = divisors(ints.last().unwrap())?;
            // A root p/q in lowest terms has (q - p) | f(1) and (q + p) | f(-1).
            let at_one: BigInt = ints.iter().sum();
            let at_minus_one: BigInt = ints
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
                .sum();
            let divides = |d: BigInt, n: &BigInt| d.is_zero() || (n % d).is_zero();
            for p in &num {
                for q in &den {
                    if !p.gcd(q).is_one() {
                        continue;
                    }
                    for p in [p.clone(), -p] {
                        if !divides(q - &p, &at_one) || !divides(q + &p, &at_minus_one) {
                            continue;
                        }
                        let cand = Rational::new(p, q.clone());
                        if !roots.contains(&cand) && self.eval(&cand).is_zero() {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }

    /// The primitive integer polynomial proportional to `self`.
    fn primitive(&self) -> RatPoly {
        RatPoly::new(self.integer_coefficients().into_iter().map(Rational::from_integer).collect())
    }

    /// Primitive integer multiple.
    fn integer_coefficients(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &content).collect()
    }
}

const TRIAL_DIVISION_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, EllipticError> {
    let n = n.abs().to_u64().filter(|&n| n <= TRIAL_DIVISION_LIMIT).ok_or(EllipticError::RootSearchLimit)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

impl<'a> Add<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Descending degree, e.g. `-1/2*t^3 + t`.
impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let abs = c.abs();
            match e {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    f.write_str("t")?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly[{self}]")
    }
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<RatPoly, ParseError> {
    let coeff = match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
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
            Some(Rational::new(num, den))
        }
        _ => None,
    };
    let has_star = coeff.is_some() && cur.eat('*');
    let exponent = if cur.eat('t') {
        if cur.eat('^') {
            Some(cur.small_uint()? as usize)
        } else {
            Some(1)
        }
    } else if has_star || coeff.is_none() {
        return Err(cur.error("expected 't'"));
    } else {
        None
    };
    if exponent.is_some_and(|e| e > 4096) {
        return Err(cur.error("exponent too large"));
    }
    Ok(RatPoly::monomial(coeff.unwrap_or_else(Rational::one), exponent.unwrap_or(0)))
}

/// Parse `poly := term (('+'|'-') term)*` with an optional leading sign.
pub fn parse_poly(text: &str) -> Result<RatPoly, EllipticError> {
    let mut cur = Cursor::new(text);
    let mut negative = cur.eat('-');
    if !negative {
        cur.eat('+');
    }
    let mut acc = RatPoly::zero();
    loop {
        let term = parse_term(&mut cur)?;
        acc = if negative { &acc - &term } else { &acc + &term };
        match cur.peek() {
            None => return Ok(acc),
            Some('+') => negative = false,
            Some('-') => negative = true,
            Some(_) => return Err(cur.error("expected '+' or '-'").into()),
        }
        cur.bump();
    }
}

impl FromStr for RatPoly {
    type Err = EllipticError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

/// `y² = x³ + a(t)x + b(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassModel {
    a: RatPoly,
    b: RatPoly,
    delta: RatPoly,
}

impl WeierstrassModel {
    pub fn new(a: RatPoly, b: RatPoly) -> Result<Self, EllipticError> {
        let (deg_a, deg_b) = (a.degree(), b.degree());
        if deg_a.is_some_and(|d| d > 8) || deg_b.is_some_and(|d| d > 12) {
            return Err(EllipticError::DegreeBound { deg_a, deg_b });
        }
        let delta = discriminant_of(&a, &b);
        if delta.is_zero() {
            return Err(EllipticError::Degenerate);
        }
        Ok(WeierstrassModel { a, b, delta })
    }

    pub fn parse(a: &str, b: &str) -> Result<Self, EllipticError> {
        WeierstrassModel::new(parse_poly(a)?, parse_poly(b)?)
    }

    pub fn a(&self) -> &RatPoly {
        &self.a
    }

    pub fn b(&self) -> &RatPoly {
        &self.b
    }

    /// `Δ = 4a³ + 27b²`.
    pub fn discriminant(&self) -> &RatPoly {
        &self.delta
    }

    /// Orders of vanishing of `(a, b, Δ)` at a place; `None` means the
    /// coefficient vanishes identically.
    pub fn vanishing_orders(&self, place: &Place) -> Result<(Option<u32>, Option<u32>, u32), EllipticError> {
        match place {
            Place::Finite(x) => {
                if !self.delta.eval(x).is_zero() {
                    return Err(EllipticError::InvalidPlace(format!("t = {x} is not a zero of the discriminant")));
                }
                Ok((self.a.order_at(x), self.b.order_at(x), self.delta.order_at(x).unwrap()))
            }
            Place::Factor(f) => {
                if f.degree().unwrap_or(0) == 0 || !self.delta.div_rem(f)?.1.is_zero() {
                    return Err(EllipticError::InvalidPlace(format!("{f} does not divide the discriminant")));
                }
                Ok((self.a.order_along(f), self.b.order_along(f), self.delta.order_along(f).unwrap()))
            }
            Place::Infinity => {
                let at_inf = |p: &RatPoly, w: usize| p.degree().map(|d| (w - d) as u32);
                Ok((
                    at_inf(&self.a, 8),
                    at_inf(&self.b, 12),
                    at_inf(&self.delta, 24).expect("nonzero discriminant"),
                ))
            }
        }
    }

    /// The model in the coordinate `s = 1/t`: `(s⁸a(1/s), s¹²b(1/s), s²⁴Δ(1/s))`.
    pub fn at_infinity(&self) -> (RatPoly, RatPoly, RatPoly) {
        fn reverse(p: &RatPoly, w: usize) -> RatPoly {
            let mut v = vec![Rational::zero(); w + 1];
            for (i, c) in p.coeffs.iter().enumerate() {
                v[w - i] = c.clone();
            }
            RatPoly::new(v)
        }
        (reverse(&self.a, 8), reverse(&self.b, 12), reverse(&self.delta, 24))
    }
}

fn discriminant_of(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let four = Rational::from_integer(4.into());
    let twenty_seven = Rational::from_integer(27.into());
    &a.pow(3).scale(&four) + &b.pow(2).scale(&twenty_seven)
}

/// `Δ = 4a³ + 27b²` for a model.
pub fn discriminant(w: &WeierstrassModel) -> &RatPoly {
    w.discriminant()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Finite(Rational),
    /// The zeros of a polynomial factor of `Δ`, taken together.
    Factor(RatPoly),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaType {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Topological Euler number of the fiber.
    pub fn euler(&self) -> u32 {
        match *self {
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => 6 + n,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
        }
    }
}

/// Kodaira type from vanishing orders, after removing `(4, 6, 12)` as often as
/// possible. Returns the type and the number of removals.
pub fn kodaira_type(va: Option<u32>, vb: Option<u32>, vd: u32) -> Result<(KodairaType, u32), EllipticError> {
    let inf = u32::MAX / 2;
    let (mut a, mut b, mut d) = (va.unwrap_or(inf), vb.unwrap_or(inf), vd);
    let mut steps = 0;
    while a >= 4 && b >= 6 && d >= 12 {
        a -= 4;
        b -= 6;
        d -= 12;
        steps += 1;
    }
    use KodairaType::*;
    let t = match (a, b, d) {
        (_, _, 0) => I(0),
        (0, 0, n) => I(n),
        (a, 1, 2) if a >= 1 => II,
        (1, b, 3) if b >= 2 => III,
        (a, 2, 4) if a >= 2 => IV,
        (2, b, 6) if b >= 3 => IStar(0),
        (a, 3, 6) if a >= 2 => IStar(0),
        (2, 3, n) if n > 6 => IStar(n - 6),
        (a, 4, 8) if a >= 3 => IVStar,
        (3, b, 9) if b >= 5 => IIIStar,
        (a, 5, 10) if a >= 4 => IIStar,
        _ => return Err(EllipticError::InconsistentOrders(va, vb, vd)),
    };
    Ok((t, steps))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaceLabel {
    Finite(Rational),
    Infinity,
    /// All roots of a squarefree factor of this degree.
    Cluster(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberReport {
    pub place: PlaceLabel,
    pub kodaira: KodairaType,
    /// Euler number, summed over the cluster for [`PlaceLabel::Cluster`].
    pub euler: u32,
    /// Order of vanishing of `Δ` at each point of the place.
    pub multiplicity: u32,
    pub nonminimal_steps: u32,
}

impl Serialize for FiberReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match &self.place {
            PlaceLabel::Finite(x) => m.serialize_entry("place", &x.to_string())?,
            PlaceLabel::Infinity => m.serialize_entry("place", "inf")?,
            PlaceLabel::Cluster(d) => m.serialize_entry("cluster_degree", d)?,
        }
        m.serialize_entry("type", &self.kodaira.to_string())?;
        m.serialize_entry("euler", &self.euler)?;
        if self.nonminimal_steps > 0 {
            m.serialize_entry("nonminimal_steps", &self.nonminimal_steps)?;
        }
        m.end()
    }
}

/// Singular fibers: rational finite places ascending, then infinity (always
/// reported), then clusters of simple irrational zeros.
pub fn fiber_analysis(w: &WeierstrassModel) -> Result<Vec<FiberReport>, EllipticError> {
    let mut finite = Vec::new();
    let mut clusters = Vec::new();
    for (factor, mult) in w.delta.squarefree_decomposition() {
        let roots = factor.rational_roots()?;
        let mut rest = factor.clone();
        for x in roots {
            rest = rest.div_exact(&RatPoly::new(vec![-x.clone(), Rational::one()]));
            let (va, vb, vd) = w.vanishing_orders(&Place::Finite(x.clone()))?;
            let (kodaira, steps) = kodaira_type(va, vb, vd)?;
            finite.push(FiberReport {
                place: PlaceLabel::Finite(x),
                kodaira,
                euler: kodaira.euler(),
                multiplicity: vd,
                nonminimal_steps: steps,
            });
        }
        let Some(deg) = rest.degree().filter(|&d| d > 0) else {
            continue;
        };
        if mult > 1 {
            return Err(EllipticError::UnresolvedCluster {
                factor: rest.to_string(),
                multiplicity: mult,
            });
        }
        let (va, vb, vd) = w.vanishing_orders(&Place::Factor(rest))?;
        let (kodaira, steps) = kodaira_type(va, vb, vd)?;
        clusters.push(FiberReport {
            place: PlaceLabel::Cluster(deg),
            kodaira,
            euler: kodaira.euler() * deg as u32,
            multiplicity: vd,
            nonminimal_steps: steps,
        });
    }
    finite.sort_by(|x, y| match (&x.place, &y.place) {
        (PlaceLabel::Finite(p), PlaceLabel::Finite(q)) => p.cmp(q),
        _ => std::cmp::Ordering::Equal,
    });
    let (va, vb, vd) = w.vanishing_orders(&Place::Infinity)?;
    let (kodaira, steps) = kodaira_type(va, vb, vd)?;
    finite.push(FiberReport {
        place: PlaceLabel::Infinity,
        kodaira,
        euler: kodaira.euler(),
        multiplicity: vd,
        nonminimal_steps: steps,
    });
    finite.extend(clusters);
    Ok(finite)
}

pub fn euler_total(reports: &[FiberReport]) -> u32 {
    reports.iter().map(|r| r.euler).sum()
}

#[derive(Serialize)]
struct ModelJson {
    a: String,
    b: String,
}

#[derive(Serialize)]
struct FiberDocument<'a> {
    model: ModelJson,
    fibers: &'a [FiberReport],
    euler_total: u32,
}

/// The JSON document `{"model":…,"fibers":[…],"euler_total":…}`.
pub fn fiber_json(w: &WeierstrassModel, reports: &[FiberReport]) -> String {
    serde_json::to_string(&FiberDocument {
        model: ModelJson {
            a: w.a.to_string(),
            b: w.b.to_string(),
        },
        fibers: reports,
        euler_total: euler_total(reports),
    })
    .expect("fiber report serialises")
}

/// One line per fiber followed by the Euler total.
pub fn fiber_text(w: &WeierstrassModel, reports: &[FiberReport]) -> String {
    let mut out = format!("a = {}\nb = {}\ndiscriminant = {}\n", w.a, w.b, w.delta);
    for r in reports {
        let place = match &r.place {
            PlaceLabel::Finite(x) => format!("t = {x}"),
            PlaceLabel::Infinity => "t = inf".to_string(),
            PlaceLabel::Cluster(d) => format!("{d} simple zeros"),
        };
        let count = match r.place {
            PlaceLabel::Cluster(d) => format!(" x{d}"),
            _ => String::new(),
        };
        out.push_str(&format!("{place}: {}{count} (euler {})\n", r.kodaira, r.euler));
    }
    out.push_str(&format!("euler total = {}\n", euler_total(reports)));
    out
}

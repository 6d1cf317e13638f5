//! Fixed-point constraints for a purely non-symplectic automorphism `σ` of
//! order 16 and its powers.
//!
//! Local types are written `(j,k)`: at an isolated fixed point of an order-`n`
//! automorphism the linearised action is `diag(ζ_n^j, ζ_n^k)` with
//! `j + k ≡ 1 (mod n)`. Types are unordered and stored with `j ≤ k`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::Cyclo16;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error("order {0} is not one of 4, 8, 16")]
    InvalidOrder(u32),
    #[error("({j},{k}) is not a local type at order {order}")]
    InvalidType { order: u32, j: u32, k: u32 },
    #[error("power {0} must be 2, 4 or 8")]
    InvalidPower(u32),
    #[error("eigenvalue ranks ({r},{l},{m},{m1},{m2}) violate r + l + 2m + 4m1 + 8m2 = 22, r >= 1, m2 in {{1,2}}")]
    InvalidProfile { r: u32, l: u32, m: u32, m1: u32, m2: u32 },
    #[error("fixed curves of an order-16 automorphism are rational")]
    NonRationalCurve,
    #[error("invalid profile JSON: {0}")]
    Json(String),
}

fn check_order(order: u32) -> Result<(), LefschetzError> {
    match order {
        4 | 8 | 16 => Ok(()),
        _ => Err(LefschetzError::InvalidOrder(order)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalType {
    order: u32,
    j: u32,
    k: u32,
}

impl LocalType {
    pub fn new(order: u32, j: u32, k: u32) -> Result<Self, LefschetzError> {
        check_order(order)?;
        let bad = LefschetzError::InvalidType { order, j, k };
        if j == 0 || k == 0 || j >= order || k >= order || (j + k) % order != 1 {
            return Err(bad);
        }
        Ok(LocalType {
            order,
            j: j.min(k),
            k: j.max(k),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponents(&self) -> (u32, u32) {
        (self.j, self.k)
    }

    /// All types at `order`, ascending in `j`.
    pub fn all(order: u32) -> Result<Vec<LocalType>, LefschetzError> {
        check_order(order)?;
        Ok((2..=order / 2)
            .map(|j| LocalType {
                order,
                j,
                k: order + 1 - j,
            })
            .collect())
    }

    /// Parse the `"j,k"` key used in JSON profiles.
    pub fn parse_key(order: u32, key: &str) -> Result<Self, LefschetzError> {
        let bad = || LefschetzError::Json(format!("bad local type key {key:?}"));
        let (a, b) = key.split_once(',').ok_or_else(bad)?;
        let j = a.trim().parse().map_err(|_| bad())?;
        let k = b.trim().parse().map_err(|_| bad())?;
        LocalType::new(order, j, k)
    }
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.k)
    }
}

/// An ordered pair of exponents along a chain of invariant curves. Unlike
/// [`LocalType`] it admits the boundary pairs `(0,1)` and `(1,0)` marking a
/// point on a fixed curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainPoint {
    pub order: u32,
    pub j: u32,
    pub k: u32,
}

impl ChainPoint {
    pub fn new(order: u32, j: u32, k: u32) -> Result<Self, LefschetzError> {
        check_order(order)?;
        if j >= order || k >= order || (j + k) % order != 1 {
            return Err(LefschetzError::InvalidType { order, j, k });
        }
        Ok(ChainPoint { order, j, k })
    }

    pub fn is_boundary(&self) -> bool {
        self.j == 0 || self.k == 0
    }

    pub fn local_type(&self) -> Option<LocalType> {
        (!self.is_boundary()).then(|| LocalType::new(self.order, self.j, self.k).unwrap())
    }
}

impl fmt::Display for ChainPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.k)
    }
}

/// The exponents at the next intersection point of a chain of invariant
/// rational curves.
pub fn chain_next(p: ChainPoint) -> ChainPoint {
    let n = p.order;
    ChainPoint {
        order: n,
        j: (p.j + n - 1) % n,
        k: (p.k + 1) % n,
    }
}

pub fn chain(start: ChainPoint, steps: usize) -> Vec<ChainPoint> {
    std::iter::successors(Some(start), |&p| Some(chain_next(p)))
        .take(steps + 1)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerImage {
    Point(LocalType),
    OnFixedCurve,
}

/// Type of an isolated `σ`-fixed point as a fixed point of `σ^e`.
pub fn type_power_map(t: LocalType, e: u32) -> Result<PowerImage, LefschetzError> {
    if !matches!(e, 2 | 4 | 8) || e >= t.order {
        return Err(LefschetzError::InvalidPower(e));
    }
    let n = t.order / e;
    let (j, k) = (t.j % n, t.k % n);
    if j == 0 || k == 0 {
        return Ok(PowerImage::OnFixedCurve);
    }
    Ok(PowerImage::Point(LocalType::new(n, j, k)?))
}

/// Ranks of the eigenspaces of `σ*` on `H²(X, C)`: `r` for 1, `l` for −1, `m`
/// pairs for ±i, `m1` quadruples for primitive 8th roots, `m2` octets for
/// primitive 16th roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EigenvalueProfile {
    pub r: u32,
    pub l: u32,
    pub m: u32,
    pub m1: u32,
    pub m2: u32,
}

impl EigenvalueProfile {
    /// Validated profile of an order-16 automorphism.
    pub fn new(r: u32, l: u32, m: u32, m1: u32, m2: u32) -> Result<Self, LefschetzError> {
        let p = EigenvalueProfile { r, l, m, m1, m2 };
        if p.total() != 22 || r == 0 || !(1..=2).contains(&m2) {
            return Err(LefschetzError::InvalidProfile { r, l, m, m1, m2 });
        }
        Ok(p)
    }

    pub fn total(&self) -> u32 {
        self.r + self.l + 2 * self.m + 4 * self.m1 + 8 * self.m2
    }

    /// Rank of the invariant lattice of `σ⁸`, which is the Picard lattice.
    pub fn picard_rank(&self) -> u32 {
        22 - 8 * self.m2
    }

    /// Eigenvalue ranks of `σ^e`.
    pub fn power_profile(&self, e: u32) -> Result<EigenvalueProfile, LefschetzError> {
        let &EigenvalueProfile { r, l, m, m1, m2 } = self;
        Ok(match e {
            1 => *self,
            2 => EigenvalueProfile { r: r + l, l: 2 * m, m: 2 * m1, m1: 2 * m2, m2: 0 },
            4 => EigenvalueProfile { r: r + l + 2 * m, l: 4 * m1, m: 4 * m2, m1: 0, m2: 0 },
            8 => EigenvalueProfile { r: r + l + 2 * m + 4 * m1, l: 8 * m2, m: 0, m1: 0, m2: 0 },
            _ => return Err(LefschetzError::InvalidPower(e)),
        })
    }
}

/// Isolated fixed points are counted by `2 + r − l − Σ (2 − 2g)` over the
/// fixed curves. The non-real eigenvalues do not contribute because their
/// traces cancel.
pub fn topological_lefschetz_n(p: &EigenvalueProfile, rational_curves: u32, genera: &[u32]) -> i64 {
    let chi_curves: i64 = 2 * i64::from(rational_curves)
        + genera.iter().map(|&g| 2 - 2 * i64::from(g)).sum::<i64>();
    2 + i64::from(p.r) - i64::from(p.l) - chi_curves
}

/// Fixed locus of `σ^e` viewed as an automorphism of order `order`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FixedLocusProfile {
    pub order: u32,
    pub points: BTreeMap<LocalType, u32>,
    /// Number of fixed rational curves.
    pub k: u32,
    /// Genera of any further fixed curves.
    pub genera: Vec<u32>,
}

pub const TYPES16: [(u32, u32); 7] = [(2, 15), (3, 14), (4, 13), (5, 12), (6, 11), (7, 10), (8, 9)];
pub const TYPES8: [(u32, u32); 3] = [(2, 7), (3, 6), (4, 5)];

impl FixedLocusProfile {
    pub fn new(order: u32, k: u32) -> Result<Self, LefschetzError> {
        check_order(order)?;
        Ok(FixedLocusProfile {
            order,
            k,
            ..Default::default()
        })
    }

    /// Order-16 profile from counts in the order of [`TYPES16`].
    pub fn from_counts16(counts: [u32; 7], k: u32) -> Self {
        Self::from_counts(16, &counts, k)
    }

    /// Order-8 profile from counts in the order of [`TYPES8`].
    pub fn from_counts8(counts: [u32; 3], k: u32) -> Self {
        Self::from_counts(8, &counts, k)
    }

    fn from_counts(order: u32, counts: &[u32], k: u32) -> Self {
        let points = LocalType::all(order)
            .unwrap()
            .into_iter()
            .zip(counts)
            .filter(|(_, &c)| c > 0)
            .map(|(t, &c)| (t, c))
            .collect();
        FixedLocusProfile {
            order,
            points,
            k,
            genera: Vec::new(),
        }
    }

    pub fn count(&self, j: u32, k: u32) -> u32 {
        LocalType::new(self.order, j, k)
            .ok()
            .and_then(|t| self.points.get(&t).copied())
            .unwrap_or(0)
    }

    pub fn counts16(&self) -> [u32; 7] {
        TYPES16.map(|(j, k)| self.count(j, k))
    }

    pub fn counts8(&self) -> [u32; 3] {
        TYPES8.map(|(j, k)| self.count(j, k))
    }

    /// Total number `N` of isolated fixed points.
    pub fn n(&self) -> u32 {
        self.points.values().sum()
    }

    pub fn validate(&self) -> Result<(), LefschetzError> {
        check_order(self.order)?;
        if self.order == 16 && self.genera.iter().any(|&g| g != 0) {
            return Err(LefschetzError::NonRationalCurve);
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, LefschetzError> {
        serde_json::from_str(s).map_err(|e| LefschetzError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serialises")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileJson {
    order: u32,
    points: BTreeMap<String, u32>,
    k: u32,
    #[serde(default)]
    genera: Vec<u32>,
}

impl Serialize for FixedLocusProfile {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProfileJson {
            order: self.order,
            points: self
                .points
                .iter()
                .map(|(t, &c)| (format!("{},{}", t.j, t.k), c))
                .collect(),
            k: self.k,
            genera: self.genera.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FixedLocusProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ProfileJson::deserialize(d)?;
        let mut f = FixedLocusProfile::new(raw.order, raw.k).map_err(D::Error::custom)?;
        for (key, c) in raw.points {
            let t = LocalType::parse_key(raw.order, &key).map_err(D::Error::custom)?;
            if f.points.insert(t, c).is_some() {
                return Err(D::Error::custom(format!("duplicate local type {t}")));
            }
        }
        f.points.retain(|_, c| *c > 0);
        f.genera = raw.genera;
        f.validate().map_err(D::Error::custom)?;
        Ok(f)
    }
}

fn one_minus_root(n: u32, e: u32) -> Cyclo16 {
    &Cyclo16::one() - &Cyclo16::root_of_order(n, i64::from(e)).expect("order divides 16")
}

/// `1 / ((1 − ζ_n^j)(1 − ζ_n^k))`.
pub fn holomorphic_point_term(t: LocalType) -> Cyclo16 {
    let d = &one_minus_root(t.order, t.j) * &one_minus_root(t.order, t.k);
    d.inverse().expect("nonzero for a valid type")
}

/// Contribution of a fixed curve of genus `g` with normal eigenvalue `ζ_n`,
/// using self-intersection `2g − 2`.
pub fn holomorphic_curve_term(g: u32, n: u32) -> Result<Cyclo16, LefschetzError> {
    check_order(n)?;
    let z = Cyclo16::root_of_order(n, 1).unwrap();
    let inv = one_minus_root(n, 1).inverse().unwrap();
    let one_minus_g = Cyclo16::from_integer(1 - i64::from(g));
    let self_int = Cyclo16::from_integer(2 * i64::from(g) - 2);
    let first = &one_minus_g * &inv;
    let second = &(&z * &self_int) * &(&inv * &inv);
    Ok(&first - &second)
}

/// Holomorphic Lefschetz number `1 + ζ_n⁻¹` of an order-`n` automorphism
/// multiplying the 2-form by `ζ_n`.
pub fn holomorphic_target(n: u32) -> Result<Cyclo16, LefschetzError> {
    check_order(n)?;
    Ok(&Cyclo16::one() + &Cyclo16::root_of_order(n, -1).unwrap())
}

/// Sum of local contributions minus the holomorphic Lefschetz number; zero
/// exactly when the fixed-point formula holds.
pub fn holomorphic_residual(f: &FixedLocusProfile) -> Result<Cyclo16, LefschetzError> {
    check_order(f.order)?;
    let mut acc = -&holomorphic_target(f.order)?;
    for (&t, &c) in &f.points {
        acc = &acc + &holomorphic_point_term(t).scale(&Rational::from_integer(c.into()));
    }
    let rational = holomorphic_curve_term(0, f.order)?;
    acc = &acc + &rational.scale(&Rational::from_integer(f.k.into()));
    for &g in &f.genera {
        acc = &acc + &holomorphic_curve_term(g, f.order)?;
    }
    Ok(acc)
}

/// The holomorphic residual as an affine map of `(counts, k)` with every term
/// scaled to integer coordinates. Used for exhaustive scans.
#[derive(Debug, Clone)]
pub struct LinearResidual {
    order: u32,
    points: Vec<[i64; 8]>,
    curve: [i64; 8],
    target: [i64; 8],
}

impl LinearResidual {
    pub fn new(order: u32) -> Result<Self, LefschetzError> {
        let types = LocalType::all(order)?;
        let mut terms: Vec<Cyclo16> = types.iter().map(|&t| holomorphic_point_term(t)).collect();
        terms.push(holomorphic_curve_term(0, order)?);
        terms.push(holomorphic_target(order)?);
        let lcm = terms
            .iter()
            .flat_map(|t| t.coeffs().iter().map(|c| c.denom().clone()))
            .fold(BigInt::from(1), |a, d| a.lcm(&d));
        let scale = Rational::from_integer(lcm);
        let mut ints: Vec<[i64; 8]> = terms
            .iter()
            .map(|t| {
                let s = t.scale(&scale);
                std::array::from_fn(|i| {
                    let c = &s.coeffs()[i];
                    debug_assert!(c.is_integer());
                    c.to_integer().to_i64().expect("small coordinates")
                })
            })
            .collect();
        let target = ints.pop().unwrap();
        let curve = ints.pop().unwrap();
        Ok(LinearResidual {
            order,
            points: ints,
            curve,
            target,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Scaled residual coordinates for counts in [`LocalType::all`] order.
    pub fn evaluate(&self, counts: &[u32], k: u32) -> [i64; 8] {
        let mut out = self.target.map(|x| -x);
        for (v, &c) in self.points.iter().zip(counts) {
            for i in 0..8 {
                out[i] += v[i] * i64::from(c);
            }
        }
        for i in 0..8 {
            out[i] += self.curve[i] * i64::from(k);
        }
        out
    }

    pub fn is_zero(&self, counts: &[u32], k: u32) -> bool {
        self.evaluate(counts, k).iter().all(Zero::is_zero)
    }
}

/// The order-16 relations checked by [`derived_equations_16`], in order.
pub const EQUATIONS_16: [&str; 7] = [
    "n2,15 - n7,10 + n8,9 = 1 + 2k",
    "n2,15 - n3,14 + n4,13 - n5,12 + n6,11 - n7,10 + n8,9 = 2k",
    "n4,13 + n5,12 - 2n6,11 + 2n7,10 - n8,9 = 2k",
    "2n3,14 - 2n4,13 + 2n6,11 - n8,9 = 2k",
    "n3,14 - n4,13 + n5,12 - n6,11 = 1",
    "N = n3,14 + n4,13 + n5,12 + n6,11 + 2n7,10 + 2k + 1",
    "N = 2n3,14 + 2n5,12 + 2n7,10 + 2k",
];

/// The order-8 relations checked by [`derived_equations_8`].
pub const EQUATIONS_8: [&str; 2] = ["n2,7 + n3,6 = 2 + 4k", "n4,5 + n2,7 - n3,6 = 2 + 2k"];

fn equations_16(counts: [u32; 7], k: u32) -> [bool; 7] {
    let [a2, a3, a4, a5, a6, a7, a8] = counts.map(i64::from);
    let k = i64::from(k);
    let n = a2 + a3 + a4 + a5 + a6 + a7 + a8;
    [
        a2 - a7 + a8 == 1 + 2 * k,
        a2 - a3 + a4 - a5 + a6 - a7 + a8 == 2 * k,
        a4 + a5 - 2 * a6 + 2 * a7 - a8 == 2 * k,
        2 * a3 - 2 * a4 + 2 * a6 - a8 == 2 * k,
        a3 - a4 + a5 - a6 == 1,
        n == a3 + a4 + a5 + a6 + 2 * a7 + 2 * k + 1,
        n == 2 * a3 + 2 * a5 + 2 * a7 + 2 * k,
    ]
}

fn equations_8(counts: [u32; 3], k: u32) -> [bool; 2] {
    let [b2, b3, b4] = counts.map(i64::from);
    let k = i64::from(k);
    [b2 + b3 == 2 + 4 * k, b4 + b2 - b3 == 2 + 2 * k]
}

/// The linear relations among the order-16 counts, evaluated on `f`.
pub fn derived_equations_16(f: &FixedLocusProfile) -> [bool; 7] {
    equations_16(f.counts16(), f.k)
}

/// The two linear relations among the order-8 counts.
pub fn derived_equations_8(f: &FixedLocusProfile) -> [bool; 2] {
    equations_8(f.counts8(), f.k)
}

/// Outcome of comparing the holomorphic residual with the linear relations on
/// every count vector in a box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub order: u32,
    pub bound: u32,
    pub max_k: u32,
    pub checked: u64,
    pub residual_zero: u64,
    /// Vectors where exactly one side holds, as `(counts, k)`.
    pub counterexamples: Vec<(Vec<u32>, u32)>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Scan all counts `0..=bound` per type and `k ≤ max_k`. At order 16 the
/// residual is compared with the first four relations of
/// [`EQUATIONS_16`], at order 8 with both relations of [`EQUATIONS_8`].
pub fn verify_equivalence(order: u32, bound: u32, max_k: u32) -> Result<EquivalenceReport, LefschetzError> {
    use rayon::prelude::*;
    if order != 8 && order != 16 {
        return Err(LefschetzError::InvalidOrder(order));
    }
    let lin = LinearResidual::new(order)?;
    let width = LocalType::all(order)?.len();
    let base = u64::from(bound) + 1;
    let total = base.pow(width as u32);
    let (checked, zero, mut bad) = (0..total)
        .into_par_iter()
        .map(|code| {
            let mut counts = vec![0u32; width];
            let mut c = code;
            for slot in counts.iter_mut() {
                *slot = (c % base) as u32;
                c /= base;
            }
            let mut zero = 0u64;
            let mut bad = Vec::new();
            for k in 0..=max_k {
                let res = lin.is_zero(&counts, k);
                let eqs = if order == 16 {
                    let e = equations_16(counts.clone().try_into().unwrap(), k);
                    e[..4].iter().all(|&b| b)
                } else {
                    equations_8(counts.clone().try_into().unwrap(), k).iter().all(|&b| b)
                };
                zero += u64::from(res);
                if res != eqs {
                    bad.push((counts.clone(), k));
                }
            }
            (u64::from(max_k) + 1, zero, bad)
        })
        .reduce(
            || (0, 0, Vec::new()),
            |mut a, b| {
                a.2.extend(b.2);
                (a.0 + b.0, a.1 + b.1, a.2)
            },
        );
    bad.sort();
    Ok(EquivalenceReport {
        order,
        bound,
        max_k,
        checked,
        residual_zero: zero,
        counterexamples: bad,
    })
}

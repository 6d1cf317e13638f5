//! Enumeration of admissible invariants for order-16 purely non-symplectic
//! automorphisms, followed by a catalog of geometric filters.
//!
//! The arithmetic stage produces every eigenvalue profile, order-16 point
//! solution, order-8 point solution and Picard lattice that satisfy the
//! Lefschetz relations. The geometric stage asks whether the fixed curves of
//! `σ⁸` can be arranged into `σ`-orbits that realise those counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{named_lattice, InvolutionFixedLocus, LatticeError};
use crate::lefschetz::{
    type_power_map, EigenvalueProfile, FixedLocusProfile, LocalType, PowerImage, TYPES16,
};

/// Largest `k` (fixed rational curves of `σ`) and `k_{σ²}` searched.
pub const MAX_K: u32 = 3;
/// Largest isolated fixed-point count of `σ`.
pub const MAX_N: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("rank must be 6 or 14, got {0}")]
    InvalidRank(u32),
    #[error("unknown predicate {0:?}")]
    UnknownPredicate(String),
    #[error("a solution reached the search bound {what} = {bound}")]
    BoundReached { what: &'static str, bound: u32 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Isolated `σ`-fixed points by type (ordered as [`TYPES16`]) together with
/// the number `k` of `σ`-fixed rational curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSolution {
    pub counts: [u32; 7],
    pub k: u32,
}

impl PointSolution {
    pub fn n(&self) -> u32 {
        self.counts.iter().sum()
    }
}

/// Isolated `σ²`-fixed points `(n2,7, n3,6, n4,5)` and `k_{σ²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sigma2Solution {
    pub counts: [u32; 3],
    pub k: u32,
}

impl Sigma2Solution {
    pub fn n(&self) -> u32 {
        self.counts.iter().sum()
    }
}

fn for_each_composition(parts: usize, max_sum: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(buf: &mut Vec<u32>, parts: usize, left: u32, f: &mut impl FnMut(&[u32])) {
        if buf.len() == parts {
            f(buf);
            return;
        }
        for c in 0..=left {
            buf.push(c);
            rec(buf, parts, left - c, f);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(parts), parts, max_sum, f);
}

/// All non-negative solutions of the order-16 relations with `N ≤ 16` and
/// `k ≤ max_k`, sorted by `(N, k)`.
pub fn enumerate_point_solutions(max_k: u32) -> Vec<PointSolution> {
    let mut out = Vec::new();
    for_each_composition(7, MAX_N, &mut |c| {
        let counts: [u32; 7] = c.try_into().unwrap();
        for k in 0..=max_k {
            let f = FixedLocusProfile::from_counts16(counts, k);
            if crate::lefschetz::derived_equations_16(&f).iter().all(|&b| b) {
                out.push(PointSolution { counts, k });
            }
        }
    });
    out.sort_by_key(|s| (s.n(), s.k, s.counts));
    out
}

/// All non-negative solutions of the order-8 relations with `k ≤ max_k`.
pub fn enumerate_sigma2_solutions(max_k: u32) -> Vec<Sigma2Solution> {
    let mut out = Vec::new();
    for k in 0..=max_k {
        for b2 in 0..=2 + 4 * k {
            let b3 = 2 + 4 * k - b2;
            let b4 = 2 + 2 * k + b3;
            if b4 < b2 {
                continue;
            }
            out.push(Sigma2Solution {
                counts: [b2, b3, b4 - b2],
                k,
            });
        }
    }
    out.sort_by_key(|s| (s.n(), s.k, s.counts));
    out
}

/// A candidate Picard lattice with the invariants of the `σ⁸` fixed locus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PicardEntry {
    pub name: String,
    pub rank: u32,
    pub a: u32,
    pub g: u32,
    pub k_sigma8: u32,
    #[serde(skip)]
    pub involution: InvolutionFixedLocus,
}

/// One representative 2-elementary hyperbolic lattice for every admissible
/// `(rank, a)`.
const PICARD_EXPRESSIONS: &[&str] = &[
    "U+D4",
    "U(2)+D4",
    "U(2)+A1+A1+A1+A1",
    "U+D4+E8",
    "U(2)+D4+E8",
    "U(2)+E8+A1+A1+A1+A1",
    "U+D4+D4+A1+A1+A1+A1",
];

pub fn picard_catalog(rank: u32) -> Result<Vec<PicardEntry>, ClassifyError> {
    check_rank(rank)?;
    let mut out = Vec::new();
    for expr in PICARD_EXPRESSIONS {
        let l = named_lattice(expr)?;
        if l.rank() as u32 != rank {
            continue;
        }
        let involution = l.nikulin_fixed_locus()?;
        out.push(PicardEntry {
            name: l.name().unwrap_or(expr).to_string(),
            rank,
            a: l.two_elementary_a()? as u32,
            g: involution.genus.unwrap_or(0),
            k_sigma8: involution.rational_curves.unwrap_or(0),
            involution,
        });
    }
    Ok(out)
}

fn check_rank(rank: u32) -> Result<(), ClassifyError> {
    match rank {
        6 | 14 => Ok(()),
        _ => Err(ClassifyError::InvalidRank(rank)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RowStatus {
    PaperRow,
    ArithmeticallyFeasible,
    ExistenceOpen,
}

/// A complete set of invariants for one hypothetical automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRow {
    pub profile: EigenvalueProfile,
    pub fixed16: FixedLocusProfile,
    pub fixed8: FixedLocusProfile,
    pub picard: PicardEntry,
    /// `σ⁴` fixes the genus-one curve of `σ⁸`.
    pub sigma4_elliptic: bool,
    pub predicates: Vec<&'static str>,
    pub status: RowStatus,
    /// Number of `σ`-fixed points on the curve of positive genus, one entry
    /// per realising configuration found by the geometric search.
    pub n_on_c: Vec<u32>,
    pub table_n: Option<u32>,
    pub fiber: Option<&'static str>,
    pub flags: Vec<String>,
}

impl CandidateRow {
    pub fn n(&self) -> u32 {
        self.fixed16.n()
    }

    pub fn k(&self) -> u32 {
        self.fixed16.k
    }

    pub fn rank(&self) -> u32 {
        self.profile.picard_rank()
    }

    /// `(m2, m1, m, l, r, N, k)`.
    pub fn invariants(&self) -> [u32; 7] {
        let p = &self.profile;
        [p.m2, p.m1, p.m, p.l, p.r, self.n(), self.k()]
    }

    fn sort_key(&self) -> impl Ord {
        (
            self.rank(),
            std::cmp::Reverse(self.n()),
            self.k(),
            self.profile,
            self.fixed16.counts16(),
            self.fixed8.counts8(),
            self.fixed8.k,
            self.picard.a,
            self.sigma4_elliptic,
        )
    }
}

/// A row of the published classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceRow {
    /// `(m2, m1, m, l, r, N, k)` as tabulated.
    pub invariants: [u32; 7],
    pub picard: Option<&'static str>,
    pub sigma4_elliptic: bool,
    pub n_on_c: Option<u32>,
    pub genus: Option<u32>,
    pub fiber: Option<&'static str>,
    pub existence_open: bool,
}

pub const REFERENCE_ROWS: [ReferenceRow; 7] = [
    ReferenceRow {
        invariants: [1, 1, 0, 1, 9, 8, 1],
        picard: None,
        sigma4_elliptic: true,
        n_on_c: None,
        genus: None,
        fiber: Some("IV*"),
        existence_open: false,
    },
    ReferenceRow {
        invariants: [1, 1, 0, 3, 7, 6, 0],
        picard: None,
        sigma4_elliptic: true,
        n_on_c: None,
        genus: None,
        fiber: Some("IV*"),
        existence_open: false,
    },
    ReferenceRow {
        invariants: [2, 0, 0, 0, 6, 6, 1],
        picard: Some("U+D4"),
        sigma4_elliptic: false,
        n_on_c: Some(4),
        genus: Some(7),
        fiber: None,
        existence_open: false,
    },
    ReferenceRow {
        invariants: [2, 0, 0, 2, 4, 4, 0],
        picard: Some("U(2)+D4"),
        sigma4_elliptic: false,
        n_on_c: Some(2),
        genus: Some(6),
        fiber: None,
        existence_open: false,
    },
    ReferenceRow {
        invariants: [1, 0, 0, 1, 13, 10, 1],
        picard: Some("U+D4+E8"),
        sigma4_elliptic: false,
        n_on_c: Some(2),
        genus: Some(3),
        fiber: None,
        existence_open: false,
    },
    ReferenceRow {
        invariants: [1, 0, 1, 1, 11, 8, 1],
        picard: Some("U(2)+D4+E8"),
        sigma4_elliptic: false,
        n_on_c: Some(2),
        genus: Some(2),
        fiber: None,
        existence_open: true,
    },
    ReferenceRow {
        invariants: [1, 0, 1, 5, 7, 2, 0],
        picard: Some("U(2)+D4+E8"),
        sigma4_elliptic: false,
        n_on_c: Some(2),
        genus: Some(2),
        fiber: None,
        existence_open: false,
    },
];

impl ReferenceRow {
    /// Matches on everything except the tabulated `N`, which is compared
    /// separately and reported as a flag.
    pub fn matches(&self, row: &CandidateRow) -> bool {
        let inv = row.invariants();
        let (a, b) = (&self.invariants, &inv);
        a[..5] == b[..5]
            && a[6] == b[6]
            && self.sigma4_elliptic == row.sigma4_elliptic
            && self.picard.is_none_or(|p| p == row.picard.name)
    }

    /// `N = 2 + r − l − 2k` from the tabulated `r`, `l`, `k`.
    pub fn computed_n(&self) -> u32 {
        let [_, _, _, l, r, _, k] = self.invariants;
        2 + r - l - 2 * k
    }
}

fn annotate(row: &mut CandidateRow) {
    row.status = RowStatus::ArithmeticallyFeasible;
    row.table_n = None;
    row.fiber = None;
    row.flags.clear();
    if let Some(reference) = REFERENCE_ROWS.iter().find(|t| t.matches(row)) {
        row.status = if reference.existence_open {
            RowStatus::ExistenceOpen
        } else {
            RowStatus::PaperRow
        };
        row.table_n = Some(reference.invariants[5]);
        row.fiber = reference.fiber;
        if reference.invariants[5] != row.n() {
            row.flags.push("table-N-mismatch".to_string());
        }
    }
}

/// Every arithmetically admissible row of the given Picard rank.
pub fn enumerate_profiles(rank: u32) -> Result<Vec<CandidateRow>, ClassifyError> {
    check_rank(rank)?;
    let m2 = if rank == 6 { 2 } else { 1 };
    let points = enumerate_point_solutions(MAX_K);
    if points.iter().any(|s| s.k == MAX_K) {
        return Err(ClassifyError::BoundReached { what: "k", bound: MAX_K });
    }
    let sigma2 = enumerate_sigma2_solutions(MAX_K);
    let picard = picard_catalog(rank)?;

    let budget = 22 - 8 * m2;
    let mut prefixes = Vec::new();
    for m1 in 0..=budget / 4 {
        for m in 0..=(budget - 4 * m1) / 2 {
            for l in 0..=budget - 4 * m1 - 2 * m {
                if budget - 4 * m1 - 2 * m - l >= 1 {
                    prefixes.push((m1, m, l));
                }
            }
        }
    }
    let parts: Vec<Result<Vec<CandidateRow>, ClassifyError>> = prefixes
        .into_par_iter()
        .map(|(m1, m, l)| {
            let r = budget - 4 * m1 - 2 * m - l;
            let profile = EigenvalueProfile::new(r, l, m, m1, m2).expect("valid by construction");
            rows_for_profile(profile, &points, &sigma2, &picard)
        })
        .collect();
    let mut rows = Vec::new();
    for p in parts {
        rows.extend(p?);
    }
    rows.sort_by_cached_key(|r| r.sort_key());
    Ok(rows)
}

fn rows_for_profile(
    profile: EigenvalueProfile,
    points: &[PointSolution],
    sigma2: &[Sigma2Solution],
    picard: &[PicardEntry],
) -> Result<Vec<CandidateRow>, ClassifyError> {
    let p2 = profile.power_profile(2).expect("valid power");
    let mut rows = Vec::new();
    for sol in points {
        let n = i64::from(profile.r) - i64::from(profile.l) + 2 - 2 * i64::from(sol.k);
        if n != i64::from(sol.n()) {
            continue;
        }
        for s2 in sigma2 {
            let n2 = 2 + i64::from(p2.r) - i64::from(p2.l) - 2 * i64::from(s2.k);
            if n2 != i64::from(s2.n()) {
                continue;
            }
            if s2.k > 0 && s2.k == MAX_K {
                return Err(ClassifyError::BoundReached { what: "k_sigma2", bound: MAX_K });
            }
            if !cross_power_consistent(sol, s2) {
                continue;
            }
            for pic in picard {
                let modes: &[bool] = if pic.rank == 14 && pic.g == 1 { &[false, true] } else { &[false] };
                for &elliptic in modes {
                    let mut row = CandidateRow {
                        profile,
                        fixed16: FixedLocusProfile::from_counts16(sol.counts, sol.k),
                        fixed8: FixedLocusProfile::from_counts8(s2.counts, s2.k),
                        picard: pic.clone(),
                        sigma4_elliptic: elliptic,
                        predicates: Vec::new(),
                        status: RowStatus::ArithmeticallyFeasible,
                        n_on_c: Vec::new(),
                        table_n: None,
                        fiber: None,
                        flags: Vec::new(),
                    };
                    annotate(&mut row);
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

/// Every isolated `σ`-fixed point is a `σ²`-fixed point of the image type or
/// lies on a `σ²`-fixed curve; and `σ`-fixed curves are `σ²`-fixed.
fn cross_power_consistent(sol: &PointSolution, s2: &Sigma2Solution) -> bool {
    let mut need = [0u32; 3];
    let mut on_curve = 0;
    for (&(j, k), &c) in TYPES16.iter().zip(&sol.counts) {
        if c == 0 {
            continue;
        }
        let t = LocalType::new(16, j, k).unwrap();
        match type_power_map(t, 2).unwrap() {
            PowerImage::Point(img) => {
                let (a, _) = img.exponents();
                need[(a - 2) as usize] += c;
            }
            PowerImage::OnFixedCurve => on_curve += c,
        }
    }
    need.iter().zip(&s2.counts).all(|(n, have)| n <= have)
        && (on_curve == 0 || s2.k >= 1)
        && s2.k >= sol.k
}

// ---------------------------------------------------------------------------
// Geometric configurations

/// How the `σ⁸`-fixed rational curves can be permuted by `σ`, with the fixed
/// points each orbit carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Orbit {
    /// A `σ`-fixed curve.
    F1,
    /// Invariant curve with `σ`-points of types (2,15), (3,14).
    P1,
    /// Invariant curve with `σ`-points (4,13), (5,12); `σ⁴`-fixed.
    P2,
    /// Invariant curve with `σ`-points (6,11), (7,10).
    P3,
    /// Invariant curve with two `σ`-points (8,9); `σ²`-fixed.
    P4,
    /// Two curves swapped by `σ`, each `σ²`-fixed.
    S2F,
    /// Two curves swapped by `σ`, each with `σ²`-points (2,7), (3,6).
    S2A,
    /// Two curves swapped by `σ`, each with two `σ²`-points (4,5).
    S2B,
    /// Four curves permuted cyclically, each `σ⁴`-fixed.
    S4F,
    /// Four curves permuted cyclically, each `σ⁴`-invariant.
    S4I,
    /// Eight curves, swapped in pairs by `σ⁴`.
    S8,
}

impl Orbit {
    const ALL: [Orbit; 11] = [
        Orbit::F1,
        Orbit::P1,
        Orbit::P2,
        Orbit::P3,
        Orbit::P4,
        Orbit::S2F,
        Orbit::S2A,
        Orbit::S2B,
        Orbit::S4F,
        Orbit::S4I,
        Orbit::S8,
    ];

    fn size(self) -> u32 {
        match self {
            Orbit::F1 | Orbit::P1 | Orbit::P2 | Orbit::P3 | Orbit::P4 => 1,
            Orbit::S2F | Orbit::S2A | Orbit::S2B => 2,
            Orbit::S4F | Orbit::S4I => 4,
            Orbit::S8 => 8,
        }
    }
}

type Pool = [u32; 11];

fn pools(total: u32) -> Vec<Pool> {
    fn rec(i: usize, left: u32, cur: &mut Pool, out: &mut Vec<Pool>) {
        if i == Orbit::ALL.len() {
            if left == 0 {
                out.push(*cur);
            }
            return;
        }
        let size = Orbit::ALL[i].size();
        for c in 0..=left / size {
            cur[i] = c;
            rec(i + 1, left - c * size, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, total, &mut [0; 11], &mut out);
    out
}

/// Genus of `C / G` for a cyclic group of order `d` acting on a curve of
/// genus `g`, with `orbits[e]` branch orbits of stabiliser order `e`.
fn quotient_genus(g: u32, d: u32, orbits: &BTreeMap<u32, u32>) -> Option<u32> {
    let branch: i64 = orbits
        .iter()
        .map(|(&e, &c)| i64::from(c) * i64::from(d / e) * i64::from(e - 1))
        .sum();
    let num = 2 * i64::from(g) - 2 - branch;
    let d = i64::from(d);
    if num % d != 0 {
        return None;
    }
    let twice_h = num / d + 2;
    (twice_h >= 0 && twice_h % 2 == 0).then_some((twice_h / 2) as u32)
}

/// Riemann–Hurwitz for an order-`order` automorphism of a genus-`g` curve with
/// `fixed_points` totally ramified points and further branch orbits whose
/// stabilisers have the given orders.
pub fn rh_fixed_point_feasible(
    g: u32,
    order: u32,
    fixed_points: u32,
    quotient_genus: u32,
    branch_orders: &[u32],
) -> bool {
    if order < 2 || branch_orders.iter().any(|&e| e < 2 || order % e != 0) {
        return false;
    }
    let lhs = 2 * i64::from(g) - 2;
    let d = i64::from(order);
    let branch: i64 = i64::from(fixed_points) * (d - 1)
        + branch_orders
            .iter()
            .map(|&e| (d / i64::from(e)) * (i64::from(e) - 1))
            .sum::<i64>();
    lhs == d * (2 * i64::from(quotient_genus) - 2) + branch
}

/// Branch orbits of the index-`idx` subgroup induced by `orbits`.
fn subgroup_orbits(d: u32, orbits: &BTreeMap<u32, u32>, idx: u32) -> BTreeMap<u32, u32> {
    let dd = d / idx;
    let mut out = BTreeMap::new();
    for (&e, &c) in orbits {
        let e2 = num_integer::gcd(e, dd);
        if e2 > 1 {
            *out.entry(e2).or_insert(0) += c * idx * e2 / e;
        }
    }
    out
}

/// An action of `σ` on `C` as seen by the point counts.
#[derive(Debug, Clone)]
struct CurveAction {
    d: u32,
    /// `σ`-fixed points on `C`.
    fix1: u32,
    /// `σ`-orbits of size two on `C`.
    orbit2: u32,
    /// Isolated `σ⁴`-fixed points on `C`.
    fix4: u32,
}

fn curve_actions(g: u32, d: u32) -> Vec<CurveAction> {
    let divisors: Vec<u32> = [2, 4, 8].into_iter().filter(|e| d % e == 0).collect();
    let cap = 2 * g + 10;
    let mut out = Vec::new();
    let mut counts = vec![0u32; divisors.len()];
    loop {
        let orbits: BTreeMap<u32, u32> = divisors.iter().copied().zip(counts.iter().copied()).collect();
        let points: u32 = orbits.iter().map(|(&e, &c)| (d / e) * c).sum();
        if points <= cap && quotient_genus(g, d, &orbits).is_some() {
            let sub_ok = [2, 4]
                .into_iter()
                .filter(|idx| d / idx >= 2)
                .all(|idx| quotient_genus(g, d / idx, &subgroup_orbits(d, &orbits, idx)).is_some());
            if sub_ok {
                let get = |e: u32| orbits.get(&e).copied().unwrap_or(0);
                out.push(CurveAction {
                    d,
                    fix1: get(d),
                    orbit2: if d >= 4 { get(d / 2) } else { 0 },
                    fix4: if d == 8 { get(8) + 2 * get(4) + 4 * get(2) } else { 0 },
                });
            }
        }
        // Odometer over 0..=cap per divisor.
        let mut i = 0;
        loop {
            if i == counts.len() {
                return out;
            }
            counts[i] += 1;
            if counts[i] <= cap {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Sigma4,
    Sigma2,
    Sigma,
}

struct SearchContext {
    actions: HashMap<(u32, u32), Vec<CurveAction>>,
}

impl SearchContext {
    fn new() -> Self {
        SearchContext {
            actions: HashMap::new(),
        }
    }

    fn actions(&mut self, g: u32, d: u32) -> &[CurveAction] {
        self.actions.entry((g, d)).or_insert_with(|| curve_actions(g, d))
    }
}

/// `k_{σ⁴}` from the `σ⁴` eigenvalue ranks, if integral.
fn sigma4_curves(row: &CandidateRow) -> Option<u32> {
    let p4 = row.profile.power_profile(4).unwrap();
    let d = i64::from(p4.r) - i64::from(p4.l) - 2;
    (d >= 0 && d % 4 == 0).then_some((d / 4) as u32)
}

/// Return the `σ`-fixed point counts on `C` of every configuration that
/// satisfies the constraints up to `level`.
fn search(row: &CandidateRow, level: Level, ctx: &mut SearchContext) -> Vec<u32> {
    let Some(k4) = sigma4_curves(row) else {
        return Vec::new();
    };
    let n4 = 4 + 2 * k4;
    let nd = row.fixed16.counts16();
    let [n27, n36, n45] = row.fixed8.counts8();
    let k2 = row.fixed8.k;
    let g = row.picard.g;
    let (pool_size, curve): (u32, Option<(u32, Vec<u32>)>) = if row.sigma4_elliptic {
        (row.picard.k_sigma8, Some((1, vec![2, 4])))
    } else if g == 0 {
        (row.picard.k_sigma8 + 1, None)
    } else {
        (row.picard.k_sigma8, Some((g, vec![8])))
    };
    let actions: Vec<CurveAction> = match &curve {
        Some((cg, ds)) => ds.iter().flat_map(|&d| ctx.actions(*cg, d).to_vec()).collect(),
        None => Vec::new(),
    };

    let mut found = Vec::new();
    for p in pools(pool_size) {
        let [f1, p1, p2, p3, p4, s2f, s2a, s2b, s4f, s4i, _s8] = p;
        if f1 + p4 + p2 + 2 * s2f + 2 * s2b + 4 * s4f != k4 {
            continue;
        }
        let inv4 = p1 + p3 + 2 * s2a + 4 * s4i;
        let sigma2_ok = f1 + p4 + 2 * s2f == k2;
        let need2 = [
            i64::from(n27) - i64::from(p1 + p3 + 2 * s2a),
            i64::from(n36) - i64::from(p1 + p3 + 2 * s2a),
            i64::from(n45) - i64::from(2 * p2 + 4 * s2b),
        ];
        let mut need = nd.map(i64::from);
        need[0] -= i64::from(p1);
        need[1] -= i64::from(p1);
        need[2] -= i64::from(p2);
        need[3] -= i64::from(p2);
        need[4] -= i64::from(p3);
        need[5] -= i64::from(p3);
        need[6] -= 2 * i64::from(p4);
        let n_on_c: i64 = need.iter().sum();

        if curve.is_none() {
            let ok4 = n4 == 2 * inv4;
            let ok2 = sigma2_ok && need2.iter().all(|&x| x == 0);
            let ok1 = f1 == row.k() && need.iter().all(|&x| x == 0);
            if ok4 && (level < Level::Sigma2 || ok2) && (level < Level::Sigma || ok1) {
                found.push(0);
            }
            continue;
        }

        for act in &actions {
            if n4 != 2 * inv4 + act.fix4 {
                continue;
            }
            if level >= Level::Sigma2 && !sigma2_on_curve(act, sigma2_ok, need2) {
                continue;
            }
            if level >= Level::Sigma && !sigma_on_curve(act, row.k(), f1, &need, n_on_c, need2) {
                continue;
            }
            found.push(act.fix1);
        }
    }
    found.sort_unstable();
    found.dedup();
    found
}

/// `σ²`-points of each type that `σ|_C` of order `d` can carry: `(2,7)` and
/// `(3,6)` when `d = 8`, `(4,5)` when `d = 4`, none when `d = 2`.
fn allowed_sigma2(d: u32) -> [bool; 3] {
    match d {
        8 => [true, true, false],
        4 => [false, false, true],
        _ => [false, false, false],
    }
}

fn sigma2_on_curve(act: &CurveAction, k2_ok: bool, need2: [i64; 3]) -> bool {
    if !k2_ok || need2.iter().any(|&x| x < 0) {
        return false;
    }
    let allowed = allowed_sigma2(act.d);
    if need2.iter().zip(allowed).any(|(&x, ok)| x > 0 && !ok) {
        return false;
    }
    let on_c = if act.d == 2 { 0 } else { act.fix1 + 2 * act.orbit2 };
    need2.iter().sum::<i64>() == i64::from(on_c)
}

/// Types of `σ`-fixed points `σ|_C` of order `d` can carry, in [`TYPES16`]
/// order.
fn allowed_sigma(d: u32) -> [bool; 7] {
    match d {
        8 => [true, true, false, false, true, true, false],
        4 => [false, false, true, true, false, false, false],
        _ => [false, false, false, false, false, false, true],
    }
}

/// Index into `(2,7), (3,6), (4,5)` of the `σ²`-image of each order-16 type.
const SQUARE_INDEX: [Option<usize>; 7] = [Some(0), Some(1), Some(2), Some(2), Some(1), Some(0), None];

fn sigma_on_curve(act: &CurveAction, k: u32, f1: u32, need: &[i64; 7], n_on_c: i64, need2: [i64; 3]) -> bool {
    if f1 != k || need.iter().any(|&x| x < 0) || n_on_c != i64::from(act.fix1) {
        return false;
    }
    let allowed = allowed_sigma(act.d);
    if need.iter().zip(allowed).any(|(&x, ok)| x > 0 && !ok) {
        return false;
    }
    if act.d == 2 {
        return true;
    }
    let mut rem = need2;
    for (i, &x) in need.iter().enumerate() {
        if let Some(s) = SQUARE_INDEX[i] {
            rem[s] -= x;
        }
    }
    rem.iter().all(|&x| x >= 0 && x % 2 == 0) && rem.iter().sum::<i64>() == 2 * i64::from(act.orbit2)
}

/// A named geometric filter on candidate rows.
#[derive(Debug, Clone, Copy)]
pub struct GeometricPredicate {
    pub id: &'static str,
    /// The geometric fact the filter encodes.
    pub citation: &'static str,
}

pub const CATALOG: [GeometricPredicate; 5] = [
    GeometricPredicate {
        id: "rational-fixed-curves",
        citation: "every curve fixed by an order-16 purely non-symplectic automorphism is rational",
    },
    GeometricPredicate {
        id: "sigma4-fixed-curve",
        citation: "the fixed locus of the fourth power contains a curve; curves of genus >= 2 are never fixed by it",
    },
    GeometricPredicate {
        id: "sigma4-orbits",
        citation: "rational curves swapped by the fourth power and fixed by the eighth come in multiples of four; the order-4 point count is realised",
    },
    GeometricPredicate {
        id: "sigma2-configuration",
        citation: "the squared automorphism's fixed points of types (2,7), (3,6), (4,5) are realised on invariant curves",
    },
    GeometricPredicate {
        id: "sigma-configuration",
        citation: "isolated fixed points lie on curves fixed by the eighth power; Riemann-Hurwitz holds on the curve of positive genus",
    },
];

pub fn predicate_ids() -> Vec<&'static str> {
    CATALOG.iter().map(|p| p.id).collect()
}

fn evaluate(id: &str, row: &CandidateRow, ctx: &mut SearchContext) -> Option<Vec<u32>> {
    match id {
        "rational-fixed-curves" => row.fixed16.genera.iter().all(|&g| g == 0).then(Vec::new),
        "sigma4-fixed-curve" => {
            let k4 = sigma4_curves(row)?;
            (k4 >= 1 || row.sigma4_elliptic).then(Vec::new)
        }
        "sigma4-orbits" => Some(search(row, Level::Sigma4, ctx)).filter(|v| !v.is_empty()),
        "sigma2-configuration" => Some(search(row, Level::Sigma2, ctx)).filter(|v| !v.is_empty()),
        "sigma-configuration" => Some(search(row, Level::Sigma, ctx)).filter(|v| !v.is_empty()),
        _ => unreachable!("ids are validated"),
    }
}

/// Rows split by a set of predicates.
#[derive(Debug, Clone, Default)]
pub struct Filtered {
    pub kept: Vec<CandidateRow>,
    /// Rows removed, each with the first failing predicate in catalog order.
    pub eliminated: Vec<(CandidateRow, &'static str)>,
}

pub fn apply_predicates(rows: &[CandidateRow], ids: &[&str]) -> Result<Filtered, ClassifyError> {
    let mut selected = Vec::new();
    for id in ids {
        if !CATALOG.iter().any(|p| p.id == *id) {
            return Err(ClassifyError::UnknownPredicate(id.to_string()));
        }
    }
    for p in &CATALOG {
        if ids.contains(&p.id) {
            selected.push(p.id);
        }
    }
    let results: Vec<Result<CandidateRow, (CandidateRow, &'static str)>> = rows
        .par_iter()
        .map_init(SearchContext::new, |ctx, row| {
            let mut row = row.clone();
            for &id in &selected {
                match evaluate(id, &row, ctx) {
                    Some(witnesses) => {
                        if id == "sigma-configuration" {
                            row.n_on_c = witnesses;
                        }
                        row.predicates.push(id);
                    }
                    None => return Err((row, id)),
                }
            }
            Ok(row)
        })
        .collect();
    let mut out = Filtered::default();
    for r in results {
        match r {
            Ok(row) => out.kept.push(row),
            Err(e) => out.eliminated.push(e),
        }
    }
    for row in &mut out.kept {
        if let Some(reference) = REFERENCE_ROWS.iter().find(|t| t.matches(row)) {
            if let Some(expected) = reference.n_on_c {
                if !row.n_on_c.is_empty() && !row.n_on_c.contains(&expected) {
                    row.flags.push("table-N'-mismatch".to_string());
                }
            }
        }
    }
    Ok(out)
}

/// Full pipeline for one rank: the arithmetic superset, or with `geometry`
/// the rows surviving the whole catalog.
pub fn classify(rank: u32, geometry: bool) -> Result<Vec<CandidateRow>, ClassifyError> {
    let rows = enumerate_profiles(rank)?;
    if !geometry {
        return Ok(rows);
    }
    Ok(apply_predicates(&rows, &predicate_ids())?.kept)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
    Csv,
}

#[derive(Serialize)]
struct RowJson<'a> {
    m2: u32,
    m1: u32,
    m: u32,
    l: u32,
    r: u32,
    #[serde(rename = "N")]
    n: u32,
    k: u32,
    pic: &'a str,
    status: RowStatus,
    predicates: &'a [&'static str],
    g: u32,
    k_sigma8: u32,
    a: u32,
    points: &'a FixedLocusProfile,
    sigma2: &'a FixedLocusProfile,
    sigma4_elliptic: bool,
    fiber: Option<&'static str>,
    #[serde(rename = "N_on_C")]
    n_on_c: &'a [u32],
    #[serde(rename = "table_N")]
    table_n: Option<u32>,
    flags: &'a [String],
}

impl<'a> From<&'a CandidateRow> for RowJson<'a> {
    fn from(row: &'a CandidateRow) -> Self {
        let [m2, m1, m, l, r, n, k] = row.invariants();
        RowJson {
            m2,
            m1,
            m,
            l,
            r,
            n,
            k,
            pic: &row.picard.name,
            status: row.status,
            predicates: &row.predicates,
            g: row.picard.g,
            k_sigma8: row.picard.k_sigma8,
            a: row.picard.a,
            points: &row.fixed16,
            sigma2: &row.fixed8,
            sigma4_elliptic: row.sigma4_elliptic,
            fiber: row.fiber,
            n_on_c: &row.n_on_c,
            table_n: row.table_n,
            flags: &row.flags,
        }
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    rank: u32,
    rows: Vec<RowJson<'a>>,
}

pub const CSV_HEADER: [&str; 20] = [
    "m2", "m1", "m", "l", "r", "N", "k", "pic", "status", "predicates", "g", "k_sigma8", "a", "points",
    "sigma2", "sigma4_elliptic", "fiber", "N_on_C", "table_N", "flags",
];

const TEXT_HEADER: [&str; 10] = ["m2", "m1", "m", "l", "r", "N", "k", "Pic", "status", "notes"];

fn sorted(rows: &[CandidateRow]) -> Vec<&CandidateRow> {
    let mut v: Vec<&CandidateRow> = rows.iter().collect();
    v.sort_by_cached_key(|r| r.sort_key());
    v
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn notes(row: &CandidateRow) -> String {
    let mut parts = Vec::new();
    if row.sigma4_elliptic {
        parts.push("sigma4 fixes elliptic C".to_string());
    }
    if let Some(f) = row.fiber {
        parts.push(format!("fiber {f}"));
    }
    if let Some(t) = row.table_n {
        if t != row.n() {
            parts.push(format!("table N = {t}"));
        }
    }
    parts.extend(row.flags.iter().cloned());
    parts.join("; ")
}

/// Render rows of a single rank. Rows are sorted by rank, then `N`
/// descending, then `k`.
pub fn report(rank: u32, rows: &[CandidateRow], format: ReportFormat) -> String {
    let rows = sorted(rows);
    match format {
        ReportFormat::Json => {
            let doc = ReportJson {
                rank,
                rows: rows.iter().map(|r| RowJson::from(*r)).collect(),
            };
            serde_json::to_string_pretty(&doc).expect("report serialises") + "\n"
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("in-memory write");
            for row in rows {
                let [m2, m1, m, l, r, n, k] = row.invariants();
                let rec = [
                    m2.to_string(),
                    m1.to_string(),
                    m.to_string(),
                    l.to_string(),
                    r.to_string(),
                    n.to_string(),
                    k.to_string(),
                    row.picard.name.clone(),
                    format!("{:?}", row.status),
                    join(&row.predicates, ";"),
                    row.picard.g.to_string(),
                    row.picard.k_sigma8.to_string(),
                    row.picard.a.to_string(),
                    row.fixed16.to_json(),
                    row.fixed8.to_json(),
                    row.sigma4_elliptic.to_string(),
                    row.fiber.unwrap_or("").to_string(),
                    join(&row.n_on_c, ";"),
                    row.table_n.map(|t| t.to_string()).unwrap_or_default(),
                    join(&row.flags, ";"),
                ];
                w.write_record(&rec).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        ReportFormat::Text => {
            let body: Vec<[String; 10]> = rows
                .iter()
                .map(|row| {
                    let inv = row.invariants().map(|x| x.to_string());
                    let [a, b, c, d, e, f, g] = inv;
                    [a, b, c, d, e, f, g, row.picard.name.clone(), format!("{:?}", row.status), notes(row)]
                })
                .collect();
            let mut width = TEXT_HEADER.map(str::len);
            for line in &body {
                for (w, cell) in width.iter_mut().zip(line) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let mut out = format!("rank {rank}\n");
            let mut emit = |cells: &[String]| {
                let mut line = String::new();
                for (i, cell) in cells.iter().enumerate() {
                    if i > 0 {
                        line.push_str("  ");
                    }
                    let _ = write!(line, "{cell:<w$}", w = width[i]);
                }
                out.push_str(line.trim_end());
                out.push('\n');
            };
            emit(&TEXT_HEADER.map(String::from));
            for line in &body {
                emit(line);
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_solution_count_and_order() {
        let sols = enumerate_point_solutions(MAX_K);
        assert_eq!(sols.len(), 21);
        assert!(sols.windows(2).all(|w| (w[0].n(), w[0].k) <= (w[1].n(), w[1].k)));
        assert!(sols.iter().all(|s| s.n() % 2 == 0 && (4..=16).contains(&s.n())));
        assert!(sols.iter().all(|s| s.k < MAX_K));
    }

    #[test]
    fn smallest_point_solutions() {
        let sols = enumerate_point_solutions(MAX_K);
        let at = |n, k| -> Vec<[u32; 7]> {
            sols.iter().filter(|s| s.n() == n && s.k == k).map(|s| s.counts).collect()
        };
        assert_eq!(at(4, 0), vec![[0, 1, 0, 0, 0, 1, 2]]);
        assert!(at(4, 1).is_empty());
        assert!(at(8, 0).is_empty());
        assert_eq!(at(6, 0), vec![[0, 0, 0, 2, 1, 1, 2]]);
        assert_eq!(at(6, 1), vec![[4, 1, 0, 0, 0, 1, 0]]);
    }

    #[test]
    fn sigma2_solutions_satisfy_relations() {
        for s in enumerate_sigma2_solutions(3) {
            let f = FixedLocusProfile::from_counts8(s.counts, s.k);
            assert_eq!(crate::lefschetz::derived_equations_8(&f), [true, true]);
        }
        assert!(enumerate_sigma2_solutions(1).contains(&Sigma2Solution { counts: [5, 1, 0], k: 1 }));
    }

    #[test]
    fn picard_catalog_invariants() {
        let six: Vec<_> = picard_catalog(6).unwrap().iter().map(|p| (p.a, p.g, p.k_sigma8)).collect();
        assert_eq!(six, [(2, 7, 2), (4, 6, 1), (6, 5, 0)]);
        let fourteen: Vec<_> = picard_catalog(14).unwrap().iter().map(|p| (p.a, p.g, p.k_sigma8)).collect();
        assert_eq!(fourteen, [(2, 3, 6), (4, 2, 5), (6, 1, 4), (8, 0, 3)]);
        assert_eq!(picard_catalog(10), Err(ClassifyError::InvalidRank(10)));
    }

    #[test]
    fn riemann_hurwitz_examples() {
        assert!(rh_fixed_point_feasible(6, 2, 2, 3, &[]));
        assert!(rh_fixed_point_feasible(0, 16, 2, 0, &[]));
        for h in 0..8 {
            assert!(!rh_fixed_point_feasible(6, 2, 3, h, &[]));
        }
        assert!(!rh_fixed_point_feasible(6, 2, 0, 3, &[3]));
    }

    #[test]
    fn quotient_genus_matches_feasibility() {
        for g in 0..8 {
            for d in [2u32, 4, 8] {
                for fixed in 0..12 {
                    let orbits = BTreeMap::from([(d, fixed)]);
                    let h = quotient_genus(g, d, &orbits);
                    for q in 0..8 {
                        assert_eq!(rh_fixed_point_feasible(g, d, fixed, q, &[]), h == Some(q));
                    }
                }
            }
        }
    }

    #[test]
    fn curve_actions_respect_subgroups() {
        // An order-8 action on a genus-3 curve with two fixed points and one
        // orbit of size two.
        let acts = curve_actions(3, 8);
        assert!(acts.iter().any(|a| a.fix1 == 2 && a.orbit2 == 1));
        assert!(acts.iter().all(|a| a.fix4 >= a.fix1));
    }

    #[test]
    fn unknown_predicate_is_rejected() {
        let rows = enumerate_profiles(6).unwrap();
        assert_eq!(
            apply_predicates(&rows, &["no-such"]).unwrap_err(),
            ClassifyError::UnknownPredicate("no-such".into())
        );
    }

    #[test]
    fn superset_rows_satisfy_lefschetz() {
        for rank in [6, 14] {
            for row in enumerate_profiles(rank).unwrap() {
                assert!(crate::lefschetz::holomorphic_residual(&row.fixed16).unwrap().is_zero());
                assert!(crate::lefschetz::holomorphic_residual(&row.fixed8).unwrap().is_zero());
                let n = crate::lefschetz::topological_lefschetz_n(&row.profile, row.k(), &[]);
                assert_eq!(n, i64::from(row.n()));
                let p2 = row.profile.power_profile(2).unwrap();
                let n2 = crate::lefschetz::topological_lefschetz_n(&p2, row.fixed8.k, &[]);
                assert_eq!(n2, i64::from(row.fixed8.n()));
            }
        }
    }

    #[test]
    fn empty_report_has_headers() {
        let text = report(6, &[], ReportFormat::Text);
        assert_eq!(text, "rank 6\nm2  m1  m  l  r  N  k  Pic  status  notes\n");
        let csv = report(6, &[], ReportFormat::Csv);
        assert_eq!(csv.lines().count(), 1);
        let json: serde_json::Value = serde_json::from_str(&report(6, &[], ReportFormat::Json)).unwrap();
        assert_eq!(json["rows"].as_array().unwrap().len(), 0);
    }
}

//! Even integer lattices given by Gram matrices.
//!
//! Root lattices are negative definite (Gram = −Cartan) and `U` is the
//! hyperbolic plane, so the lattices built here sit naturally inside a lattice
//! of signature (3, 19).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::parse::{Cursor, ParseError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unsupported lattice: {0}")]
    Unsupported(String),
    #[error("Gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("lattice is not even")]
    NotEven,
    #[error("degenerate lattice (determinant 0)")]
    Degenerate,
    #[error("lattice is not 2-elementary (invariant factors {0:?})")]
    NotTwoElementary(Vec<BigInt>),
    #[error("lattice has signature ({0}, {1}), expected (1, rank - 1)")]
    NotHyperbolic(usize, usize),
    #[error("rank {rank} and a = {a} give no admissible involution fixed locus")]
    InadmissibleInvariants { rank: usize, a: usize },
}

/// One summand of a lattice expression, e.g. `D4` or `E8(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub kind: RootKind,
    pub twist: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootKind {
    U,
    A(u32),
    D(u32),
    E(u32),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RootKind::U => f.write_str("U")?,
            RootKind::A(n) => write!(f, "A{n}")?,
            RootKind::D(n) => write!(f, "D{n}")?,
            RootKind::E(n) => write!(f, "E{n}")?,
        }
        if self.twist != 1 {
            write!(f, "({})", self.twist)?;
        }
        Ok(())
    }
}

impl Term {
    fn gram(&self) -> Vec<Vec<BigInt>> {
        let base = match self.kind {
            RootKind::U => vec![vec![0, 1], vec![1, 0]],
            RootKind::A(n) => {
                let edges: Vec<_> = (1..n as usize).map(|i| (i - 1, i)).collect();
                neg_cartan(n as usize, &edges)
            }
            RootKind::D(n) => {
                let n = n as usize;
                let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                edges.push((n - 3, n - 1));
                neg_cartan(n, &edges)
            }
            RootKind::E(n) => {
                let n = n as usize;
                let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                edges.push((2, n - 1));
                neg_cartan(n, &edges)
            }
        };
        base.into_iter()
            .map(|row| row.into_iter().map(|x| BigInt::from(x * self.twist)).collect())
            .collect()
    }
}

fn neg_cartan(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b) in edges {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    g
}

/// An even lattice by its Gram matrix, optionally remembering the expression
/// it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramLattice {
    gram: Vec<Vec<BigInt>>,
    name: Option<String>,
    terms: Vec<Term>,
}

impl GramLattice {
    pub fn from_gram(gram: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
            if gram[i][i].is_odd() {
                return Err(LatticeError::NotEven);
            }
        }
        Ok(GramLattice {
            gram,
            name: None,
            terms: Vec::new(),
        })
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let (n, m) = (self.rank(), other.rank());
        let mut gram = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            gram[i][..n].clone_from_slice(&self.gram[i]);
        }
        for i in 0..m {
            gram[n + i][n..].clone_from_slice(&other.gram[i]);
        }
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        let terms = if self.name.is_some() && other.name.is_some() {
            self.terms.iter().chain(&other.terms).copied().collect()
        } else {
            Vec::new()
        };
        GramLattice { gram, name, terms }
    }

    /// The lattice `L(m)`: every Gram entry multiplied by `m`.
    pub fn twisted(&self, m: i64) -> GramLattice {
        let m = BigInt::from(m);
        GramLattice {
            gram: self
                .gram
                .iter()
                .map(|row| row.iter().map(|x| x * &m).collect())
                .collect(),
            name: None,
            terms: Vec::new(),
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(self.gram.clone())
    }

    /// `(positive, negative)` inertia indices.
    pub fn signature(&self) -> Result<(usize, usize), LatticeError> {
        if self.determinant().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        let n = self.rank();
        let mut a: Vec<Vec<Rational>> = self
            .gram
            .iter()
            .map(|row| row.iter().cloned().map(Rational::from_integer).collect())
            .collect();
        let (mut pos, mut neg) = (0, 0);
        for i in 0..n {
            if a[i][i].is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                    a.swap(i, j);
                    for row in a.iter_mut() {
                        row.swap(i, j);
                    }
                } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                    // e_i += e_j makes the diagonal entry 2·a_ij.
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[i][c] += v;
                    }
                    for row in a.iter_mut() {
                        let v = row[j].clone();
                        row[i] += v;
                    }
                } else {
                    return Err(LatticeError::Degenerate);
                }
            }
            let p = a[i][i].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for r in i + 1..n {
                if a[r][i].is_zero() {
                    continue;
                }
                let f = &a[r][i] / &p;
                for c in i..n {
                    let v = &f * &a[i][c];
                    a[r][c] -= v;
                }
            }
            for r in i + 1..n {
                a[r][i] = Rational::zero();
                a[i][r] = Rational::zero();
            }
        }
        Ok((pos, neg))
    }

    /// Invariant factors greater than 1 of the Gram matrix, ascending. These are
    /// the cyclic factors of the discriminant group `L*/L`.
    pub fn discriminant_group(&self) -> Result<Vec<BigInt>, LatticeError> {
        if self.determinant().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(smith_diagonal(self.gram.clone())
            .into_iter()
            .filter(|d| !d.is_one())
            .collect())
    }

    pub fn two_elementary_a(&self) -> Result<usize, LatticeError> {
        let factors = self.discriminant_group()?;
        if factors.iter().any(|d| *d != BigInt::from(2)) {
            return Err(LatticeError::NotTwoElementary(factors));
        }
        Ok(factors.len())
    }

    /// Fixed locus of a non-symplectic involution whose invariant lattice is
    /// `self`.
    pub fn nikulin_fixed_locus(&self) -> Result<InvolutionFixedLocus, LatticeError> {
        let a = self.two_elementary_a()?;
        let (p, q) = self.signature()?;
        if p != 1 {
            return Err(LatticeError::NotHyperbolic(p, q));
        }
        let mut key = self.terms.clone();
        key.sort();
        if !key.is_empty() {
            for (expr, kind) in EXCEPTIONS {
                let mut t = parse_terms(expr).expect("exception table parses");
                t.sort();
                if t == key {
                    return Ok(InvolutionFixedLocus {
                        kind: *kind,
                        genus: None,
                        rational_curves: None,
                    });
                }
            }
        }
        let rank = self.rank();
        let bad = || LatticeError::InadmissibleInvariants { rank, a };
        let two_g = 22i64 - rank as i64 - a as i64;
        let two_k = rank as i64 - a as i64;
        if two_g < 0 || two_k < 0 || two_g % 2 != 0 || two_k % 2 != 0 {
            return Err(bad());
        }
        Ok(InvolutionFixedLocus {
            kind: FixedLocusKind::CurveAndRationals,
            genus: Some((two_g / 2) as u32),
            rational_curves: Some((two_k / 2) as u32),
        })
    }
}

/// Lattices whose involution fixed locus is not governed by the genus/count
/// formulas. Matched on the multiset of expression terms.
const EXCEPTIONS: &[(&str, FixedLocusKind)] = &[
    ("U(2)+E8(2)", FixedLocusKind::Empty),
    ("U+E8(2)", FixedLocusKind::TwoEllipticCurves),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedLocusKind {
    Empty,
    TwoEllipticCurves,
    CurveAndRationals,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionFixedLocus {
    pub kind: FixedLocusKind,
    pub genus: Option<u32>,
    pub rational_curves: Option<u32>,
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Diagonal of the Smith normal form (absolute values, divisibility chain).
fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                // Enforce divisibility of the remaining block by the pivot.
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            // Move the smallest nonzero entry of row/column t to the pivot.
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            }
            if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<Term, LatticeError> {
    let start = cur.pos();
    let kind = match cur.bump() {
        Some('U') => RootKind::U,
        Some(c @ ('A' | 'D' | 'E')) => {
            let n = cur.small_uint()?;
            let ok = match c {
                'A' => n >= 1,
                'D' => n >= 4,
                _ => n == 7 || n == 8,
            };
            if !ok {
                return Err(LatticeError::Unsupported(format!("{c}{n}")));
            }
            match c {
                'A' => RootKind::A(n),
                'D' => RootKind::D(n),
                _ => RootKind::E(n),
            }
        }
        _ => return Err(ParseError::new(start, "expected U, A, D or E").into()),
    };
    let twist = if cur.eat('(') {
        let neg = cur.eat('-');
        let at = cur.pos();
        let m = i64::from(cur.small_uint()?);
        cur.expect(')')?;
        if m == 0 {
            return Err(ParseError::new(at, "twist must be nonzero").into());
        }
        if neg {
            -m
        } else {
            m
        }
    } else {
        1
    };
    Ok(Term { kind, twist })
}

fn parse_terms(expr: &str) -> Result<Vec<Term>, LatticeError> {
    let mut cur = Cursor::new(expr);
    let mut terms = vec![parse_term(&mut cur)?];
    while cur.eat('+') {
        terms.push(parse_term(&mut cur)?);
    }
    if !cur.at_end() {
        return Err(cur.error("expected '+' or end of input").into());
    }
    Ok(terms)
}

/// Build a lattice from an expression such as `U(2)+D4+E8`.
pub fn named_lattice(expr: &str) -> Result<GramLattice, LatticeError> {
    let terms = parse_terms(expr)?;
    let mut gram: Vec<Vec<BigInt>> = Vec::new();
    for t in &terms {
        let block = t.gram();
        let (n, m) = (gram.len(), block.len());
        for row in gram.iter_mut() {
            row.resize(n + m, BigInt::zero());
        }
        for row in block {
            let mut full = vec![BigInt::zero(); n];
            full.extend(row);
            gram.push(full);
        }
    }
    let name = terms.iter().map(Term::to_string).collect::<Vec<_>>().join("+");
    Ok(GramLattice {
        gram,
        name: Some(name),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hyperbolic_plane() {
        let u = named_lattice("U").unwrap();
        assert_eq!(u.gram(), &[big(&[0, 1]), big(&[1, 0])]);
        assert_eq!(u.determinant(), BigInt::from(-1));
        assert_eq!(u.signature().unwrap(), (1, 1));
    }

    #[test]
    fn root_lattice_determinants() {
        // det(A_n) = n + 1, det(D_n) = 4, det(E7) = 2, det(E8) = 1, up to the
        // sign (−1)^n of a negative definite form.
        for n in 1..9u32 {
            let l = named_lattice(&format!("A{n}")).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(l.determinant(), BigInt::from(sign * (n as i64 + 1)));
        }
        for n in 4..10u32 {
            let l = named_lattice(&format!("D{n}")).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(l.determinant(), BigInt::from(sign * 4));
        }
        assert_eq!(named_lattice("E7").unwrap().determinant(), BigInt::from(-2));
        assert_eq!(named_lattice("E8").unwrap().determinant(), BigInt::one());
        assert_eq!(named_lattice("E8").unwrap().signature().unwrap(), (0, 8));
    }

    #[test]
    fn catalog_picard_lattices() {
        let l = named_lattice("U+D4").unwrap();
        assert_eq!(l.rank(), 6);
        assert_eq!(l.determinant(), BigInt::from(-4));
        assert_eq!(l.signature().unwrap(), (1, 5));
        assert_eq!(l.discriminant_group().unwrap(), big(&[2, 2]));
        assert_eq!(l.two_elementary_a().unwrap(), 2);

        let l = named_lattice("U(2)+D4").unwrap();
        assert_eq!(l.discriminant_group().unwrap(), big(&[2, 2, 2, 2]));
        assert_eq!(named_lattice("U(2)").unwrap().determinant(), BigInt::from(-4));

        let l = named_lattice("U(2)+D4+E8").unwrap();
        assert_eq!(l.rank(), 14);
        assert_eq!(l.two_elementary_a().unwrap(), 4);
        assert_eq!(l.name(), Some("U(2)+D4+E8"));
    }

    #[test]
    fn discriminant_groups() {
        assert!(named_lattice("E8").unwrap().discriminant_group().unwrap().is_empty());
        assert_eq!(named_lattice("A3").unwrap().discriminant_group().unwrap(), big(&[4]));
        assert_eq!(named_lattice("D5").unwrap().discriminant_group().unwrap(), big(&[4]));
        assert_eq!(
            named_lattice("A2").unwrap().two_elementary_a(),
            Err(LatticeError::NotTwoElementary(big(&[3])))
        );
    }

    #[test]
    fn nikulin_invariants() {
        let cases = [
            ("U+D4", 7, 2),
            ("U(2)+D4", 6, 1),
            ("U+D4+E8", 3, 6),
            ("U(2)+D4+E8", 2, 5),
        ];
        for (expr, g, k) in cases {
            let f = named_lattice(expr).unwrap().nikulin_fixed_locus().unwrap();
            assert_eq!(f.kind, FixedLocusKind::CurveAndRationals);
            assert_eq!((f.genus, f.rational_curves), (Some(g), Some(k)), "{expr}");
        }
        let f = named_lattice("E8(2)+U(2)").unwrap().nikulin_fixed_locus().unwrap();
        assert_eq!(f.kind, FixedLocusKind::Empty);
        let f = named_lattice("U+E8(2)").unwrap().nikulin_fixed_locus().unwrap();
        assert_eq!(f.kind, FixedLocusKind::TwoEllipticCurves);
        assert!(matches!(
            named_lattice("D4").unwrap().nikulin_fixed_locus(),
            Err(LatticeError::NotHyperbolic(0, 4))
        ));
    }

    #[test]
    fn expression_errors() {
        assert!(matches!(named_lattice("D3"), Err(LatticeError::Unsupported(_))));
        assert!(matches!(named_lattice("E6"), Err(LatticeError::Unsupported(_))));
        assert!(matches!(named_lattice("A0"), Err(LatticeError::Unsupported(_))));
        assert!(matches!(named_lattice("U+"), Err(LatticeError::Parse(_))));
        assert!(matches!(named_lattice("U(0)"), Err(LatticeError::Parse(_))));
        assert!(matches!(named_lattice("X"), Err(LatticeError::Parse(_))));
        assert!(matches!(named_lattice("U U"), Err(LatticeError::Parse(_))));
        assert_eq!(
            named_lattice(" U ( 2 ) + A1 ").unwrap().name(),
            Some("U(2)+A1")
        );
    }

    #[test]
    fn from_gram_validation() {
        assert_eq!(
            GramLattice::from_gram(vec![big(&[2, 1]), big(&[0, 2])]),
            Err(LatticeError::NotSymmetric)
        );
        assert_eq!(
            GramLattice::from_gram(vec![big(&[1])]),
            Err(LatticeError::NotEven)
        );
        let z = GramLattice::from_gram(vec![big(&[0, 0]), big(&[0, 0])]).unwrap();
        assert_eq!(z.signature(), Err(LatticeError::Degenerate));
    }

    fn catalog() -> Vec<GramLattice> {
        ["U", "U(2)", "A1", "A2", "A3", "D4", "E7", "E8", "U+D4", "U(2)+A1+A1"]
            .iter()
            .map(|e| named_lattice(e).unwrap())
            .collect()
    }

    /// Random unimodular matrix as a product of elementary row operations.
    fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<BigInt>> {
        let mut p: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        for &(i, j, c) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                p.swap(0, i);
                continue;
            }
            for col in 0..n {
                let v = &p[j][col] * c;
                p[i][col] += v;
            }
        }
        p
    }

    fn conjugate(g: &[Vec<BigInt>], p: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = g.len();
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for a in 0..n {
                    for b in 0..n {
                        s += &p[i][a] * &g[a][b] * &p[j][b];
                    }
                }
                out[i][j] = s;
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn invariants_under_unimodular_change(
            idx in 0usize..10,
            ops in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..12),
        ) {
            let l = &catalog()[idx];
            let p = unimodular(l.rank(), &ops);
            let m = GramLattice::from_gram(conjugate(l.gram(), &p)).unwrap();
            prop_assert_eq!(m.determinant(), l.determinant());
            prop_assert_eq!(m.discriminant_group().unwrap(), l.discriminant_group().unwrap());
            prop_assert_eq!(m.signature().unwrap(), l.signature().unwrap());
        }

        #[test]
        fn determinant_multiplicative(i in 0usize..10, j in 0usize..10, m in 1i64..4) {
            let cat = catalog();
            let (a, b) = (&cat[i], &cat[j]);
            prop_assert_eq!(a.direct_sum(b).determinant(), a.determinant() * b.determinant());
            let scaled = BigInt::from(m).pow(a.rank() as u32) * a.determinant();
            prop_assert_eq!(a.twisted(m).determinant(), scaled);
        }
    }
}

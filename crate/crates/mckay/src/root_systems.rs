//! Simply laced root systems, finite and affine.
//!
//! Vertices of an affine diagram are indexed `0..=rank` with `0` the extending
//! vertex; deleting it and shifting indices down by one gives the finite
//! diagram. All pairings are computed through the adjacency matrix, so the
//! same code serves every family.

use std::collections::BTreeSet;
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// The three simply laced families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::D => write!(f, "D"),
            Family::E => write!(f, "E"),
        }
    }
}

/// A validated family-and-rank pair such as `A3` or `E7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DynkinLabel {
    family: Family,
    rank: u32,
}

impl DynkinLabel {
    /// Ranks are restricted to the classification: `A_n` with `n >= 1`,
    /// `D_n` with `n >= 4`, and `E_6`, `E_7`, `E_8`.
    pub fn new(family: Family, rank: u32) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(DynkinLabel { family, rank })
        } else {
            Err(Error::InvalidRank {
                family: match family {
                    Family::A => 'A',
                    Family::D => 'D',
                    Family::E => 'E',
                },
                rank,
            })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }
}

impl fmt::Display for DynkinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for DynkinLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let mut chars = t.chars();
        let family = match chars.next() {
            Some('A') | Some('a') => Family::A,
            Some('D') | Some('d') => Family::D,
            Some('E') | Some('e') => Family::E,
            _ => return Err(Error::InvalidLabel(s.to_string())),
        };
        let rank: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidLabel(s.to_string()))?;
        DynkinLabel::new(family, rank).map_err(|_| Error::InvalidLabel(s.to_string()))
    }
}

/// A finite or affine Dynkin diagram with its adjacency matrix.
///
/// `adjacency[i][j]` counts edges between vertices `i` and `j`; the only
/// multiplicity above one in this crate is the double edge of affine `A1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinGraph {
    label: DynkinLabel,
    affine: bool,
    adjacency: Vec<Vec<u32>>,
}

fn affine_edges(label: DynkinLabel) -> Vec<(usize, usize, u32)> {
    let n = label.rank() as usize;
    match label.family() {
        Family::A => {
            if n == 1 {
                vec![(0, 1, 2)]
            } else {
                let mut e: Vec<_> = (0..n).map(|i| (i, i + 1, 1)).collect();
                e.push((0, n, 1));
                e
            }
        }
        Family::D => {
            let mut e = vec![(0, 3, 1), (2, 3, 1)];
            for i in 3..(n - 1) {
                e.push((i, i + 1, 1));
            }
            e.push((1, n - 1, 1));
            e.push((n - 1, n, 1));
            e
        }
        Family::E => match n {
            6 => vec![(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (3, 6, 1), (0, 6, 1)],
            7 => {
                let mut e: Vec<_> = (0..6).map(|i| (i, i + 1, 1)).collect();
                e.push((3, 7, 1));
                e
            }
            8 => {
                let mut e: Vec<_> = (0..7).map(|i| (i, i + 1, 1)).collect();
                e.push((5, 8, 1));
                e
            }
            _ => unreachable!("rank validated at construction"),
        },
    }
}

/// Builds the finite (`affine = false`) or affine (`affine = true`) diagram.
pub fn build_diagram(label: DynkinLabel, affine: bool) -> DynkinGraph {
    let n = label.rank() as usize;
    let count = if affine { n + 1 } else { n };
    let mut adjacency = vec![vec![0u32; count]; count];
    for (i, j, mult) in affine_edges(label) {
        if affine {
            adjacency[i][j] += mult;
            adjacency[j][i] += mult;
        } else if i != 0 && j != 0 {
            adjacency[i - 1][j - 1] += mult;
            adjacency[j - 1][i - 1] += mult;
        }
    }
    DynkinGraph { label, affine, adjacency }
}

impl DynkinGraph {
    pub fn label(&self) -> DynkinLabel {
        self.label
    }

    pub fn is_affine(&self) -> bool {
        self.affine
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Edge multiplicity between vertices `i` and `j`.
    pub fn edge_count(&self, i: usize, j: usize) -> u32 {
        self.adjacency[i][j]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    /// Undirected edges as `(i, j, multiplicity)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for i in 0..self.vertex_count() {
            for j in (i + 1)..self.vertex_count() {
                if self.adjacency[i][j] > 0 {
                    out.push((i, j, self.adjacency[i][j]));
                }
            }
        }
        out
    }

    fn check_len(&self, v: &RootVector) -> Result<()> {
        if v.len() != self.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: self.vertex_count(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// An integer vector in the root lattice, indexed by diagram vertices.
///
/// Ordered by total degree first, then lexicographically, so sorted listings
/// go from small to large.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn zero(len: usize) -> Self {
        RootVector(vec![0; len])
    }

    /// The standard basis vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        RootVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Sum of all entries.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        RootVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn plus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        RootVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        RootVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl PartialOrd for RootVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Which side of `m * delta` a real root sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// A positive real root of the affine system, in the unique form
/// `m * delta + beta` (with `m >= 0`) or `m * delta - beta` (with `m >= 1`)
/// for a finite positive root `beta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineRealRoot {
    vector: RootVector,
    m: u32,
    beta: RootVector,
    sign: Sign,
}

impl AffineRealRoot {
    /// Assembles `m * delta (+/-) beta` from a finite positive root `beta`
    /// given in finite coordinates.
    pub fn new(label: DynkinLabel, m: u32, beta_finite: &RootVector, sign: Sign) -> Result<Self> {
        let finite = build_diagram(label, false);
        finite.check_len(beta_finite)?;
        if !beta_finite.is_nonnegative() || beta_finite.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "{beta_finite} is not a finite positive root"
            )));
        }
        if quadratic_form(&finite, beta_finite)? != 1 {
            return Err(Error::InvalidArgument(format!(
                "{beta_finite} is not a finite positive root"
            )));
        }
        if sign == Sign::Minus && m == 0 {
            return Err(Error::InvalidArgument(
                "m * delta - beta needs m >= 1".to_string(),
            ));
        }
        let mut beta = vec![0i64];
        beta.extend_from_slice(beta_finite.entries());
        let beta = RootVector(beta);
        let delta = imaginary_root(label);
        let vector = delta.scaled(m as i64).plus(&beta.scaled(sign.as_i64()));
        if !vector.is_nonnegative() {
            return Err(Error::InvalidArgument(format!(
                "{m} * delta {sign} {beta} leaves the positive cone"
            )));
        }
        Ok(AffineRealRoot { vector, m, beta, sign })
    }

    /// The root as an affine lattice vector.
    pub fn vector(&self) -> &RootVector {
        &self.vector
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// `beta` embedded in affine coordinates (entry 0 is zero).
    pub fn beta_affine(&self) -> &RootVector {
        &self.beta
    }

    /// `beta` in finite coordinates.
    pub fn beta_finite(&self) -> RootVector {
        RootVector(self.beta.entries()[1..].to_vec())
    }

    /// Sum of the entries of the root itself.
    pub fn total_degree(&self) -> i64 {
        self.vector.total()
    }

    /// Height of the underlying finite root.
    pub fn height(&self) -> i64 {
        self.beta.total()
    }
}

impl PartialOrd for AffineRealRoot {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AffineRealRoot {
    // The vector determines (m, beta, sign) uniquely, so this is a total order.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vector.cmp(&other.vector)
    }
}

impl fmt::Display for AffineRealRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}d{}{}", self.m, self.sign, self.beta_finite())
    }
}

/// Twice the symmetrized bilinear form, `2(x, y)`; always an integer.
pub fn pairing_doubled(graph: &DynkinGraph, x: &RootVector, y: &RootVector) -> Result<i64> {
    graph.check_len(x)?;
    graph.check_len(y)?;
    let n = graph.vertex_count();
    let mut acc: i64 = 0;
    for i in 0..n {
        acc += 2 * x.0[i] * y.0[i];
        for j in 0..n {
            acc -= i64::from(graph.adjacency[i][j]) * x.0[i] * y.0[j];
        }
    }
    Ok(acc)
}

/// The symmetrized bilinear form `(x, y) = sum x_i y_i - (1/2) sum b_ij x_i y_j`.
pub fn bilinear_form(graph: &DynkinGraph, x: &RootVector, y: &RootVector) -> Result<BigRational> {
    let p = pairing_doubled(graph, x, y)?;
    Ok(BigRational::new(BigInt::from(p), BigInt::from(2)))
}

/// The quadratic form `Q(x) = (x, x)`, integer-valued on these lattices.
pub fn quadratic_form(graph: &DynkinGraph, x: &RootVector) -> Result<i64> {
    let p = pairing_doubled(graph, x, x)?;
    debug_assert_eq!(p.rem_euclid(2), 0);
    Ok(p / 2)
}

/// Simple reflection at vertex `i`: `x - 2(x, e_i) e_i`.
pub fn reflect(graph: &DynkinGraph, x: &RootVector, i: usize) -> Result<RootVector> {
    graph.check_len(x)?;
    if i >= graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            got: i + 1,
        });
    }
    let row: i64 = (0..graph.vertex_count())
        .map(|j| i64::from(graph.adjacency[i][j]) * x.0[j])
        .sum();
    let mut v = x.0.clone();
    v[i] -= 2 * x.0[i] - row;
    Ok(RootVector(v))
}

/// All positive roots of the finite system, sorted.
///
/// Closes the simple roots under all simple reflections, discarding anything
/// that leaves the positive cone; for simply laced diagrams this reaches
/// every positive root.
pub fn finite_positive_roots(label: DynkinLabel) -> Vec<RootVector> {
    let graph = build_diagram(label, false);
    let n = graph.vertex_count();
    let mut seen: BTreeSet<RootVector> = BTreeSet::new();
    let mut queue: VecDeque<RootVector> = VecDeque::new();
    for i in 0..n {
        let e = RootVector::unit(n, i);
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(x) = queue.pop_front() {
        for i in 0..n {
            let y = reflect(&graph, &x, i).expect("length fixed by construction");
            if y.is_nonnegative() && !seen.contains(&y) {
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// The primitive imaginary root `delta` of the affine diagram.
///
/// Satisfies `2 delta_i = sum_j b_ij delta_j` at every vertex, with entry 1
/// at the extending vertex.
pub fn imaginary_root(label: DynkinLabel) -> RootVector {
    let n = label.rank() as usize;
    let v: Vec<i64> = match label.family() {
        Family::A => vec![1; n + 1],
        Family::D => {
            let mut v = vec![2; n + 1];
            v[0] = 1;
            v[1] = 1;
            v[2] = 1;
            v[n] = 1;
            v
        }
        Family::E => match n {
            6 => vec![1, 1, 2, 3, 2, 1, 2],
            7 => vec![1, 2, 3, 4, 3, 2, 1, 2],
            8 => vec![1, 2, 3, 4, 5, 6, 4, 2, 3],
            _ => unreachable!("rank validated at construction"),
        },
    };
    RootVector(v)
}

/// Positive real roots of the affine system with total degree at most
/// `bound`, sorted. Both branches `m delta + beta` and `m delta - beta`
/// appear once each.
pub fn affine_positive_real_roots(label: DynkinLabel, bound: i64) -> Vec<AffineRealRoot> {
    let delta = imaginary_root(label);
    let delta_total = delta.total();
    let betas = finite_positive_roots(label);
    let mut out: Vec<AffineRealRoot> = Vec::new();
    for beta in &betas {
        let h = beta.total();
        // m * |delta| + h <= bound
        let mut m: i64 = 0;
        while m * delta_total + h <= bound {
            let root = AffineRealRoot::new(label, m as u32, beta, Sign::Plus)
                .expect("beta is a positive root");
            out.push(root);
            m += 1;
        }
        // m * |delta| - h <= bound, m >= 1
        let mut m: i64 = 1;
        while m * delta_total - h <= bound {
            let root = AffineRealRoot::new(label, m as u32, beta, Sign::Minus)
                .expect("beta is a positive root");
            out.push(root);
            m += 1;
        }
    }
    out.sort();
    out
}

/// What an affine lattice vector is, seen from the root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Zero,
    /// A positive multiple of `delta`.
    Imaginary { multiple: u32 },
    Real(AffineRealRoot),
    NotARoot,
}

/// Classifies an integer vector on the affine lattice.
///
/// The decomposition of a positive real root is forced: `m` must equal the
/// entry at the extending vertex, and the sign is read off from `x - m delta`.
pub fn classify_vector(label: DynkinLabel, x: &RootVector) -> Result<Classification> {
    let affine = build_diagram(label, true);
    affine.check_len(x)?;
    if x.is_zero() {
        return Ok(Classification::Zero);
    }
    let delta = imaginary_root(label);
    // delta_0 = 1, so any m delta +/- beta has x_0 = m.
    let m = x.entries()[0];
    if m < 0 {
        return Ok(Classification::NotARoot);
    }
    if x == &delta.scaled(m) {
        return Ok(Classification::Imaginary { multiple: m as u32 });
    }
    let finite = build_diagram(label, false);
    for sign in [Sign::Plus, Sign::Minus] {
        let beta_affine = x.minus(&delta.scaled(m)).scaled(sign.as_i64());
        if !beta_affine.is_nonnegative() || beta_affine.is_zero() {
            continue;
        }
        let beta = RootVector(beta_affine.entries()[1..].to_vec());
        if quadratic_form(&finite, &beta)? == 1 {
            if sign == Sign::Minus && m == 0 {
                continue;
            }
            return Ok(Classification::Real(
                AffineRealRoot::new(label, m as u32, &beta, sign)
                    .expect("checked to be a positive root"),
            ));
        }
    }
    Ok(Classification::NotARoot)
}

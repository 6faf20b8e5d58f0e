//! McKay quivers, superpotentials, stability parameters, and walls.
//!
//! The quiver doubles the affine diagram, adds a loop at every vertex, and
//! optionally a framing vertex with one arrow onto the extending vertex.
//! Stability parameters may carry an infinitesimal perturbation: pairings
//! are then compared lexicographically in (base, epsilon) order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::root_systems::{
    affine_positive_real_roots, build_diagram, imaginary_root, AffineRealRoot, DynkinLabel,
    RootVector, Sign,
};

/// A vertex of the (possibly framed) McKay quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Node(usize),
    Framing,
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Node(i) => write!(f, "{i}"),
            Vertex::Framing => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrowKind {
    Edge,
    Loop,
    Framing,
}

/// A named arrow. Edge arrows come in dual pairs `r_{i,j}` / `r_{j,i}`;
/// parallel copies from a double edge get prime marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: Vertex,
    pub target: Vertex,
    pub kind: ArrowKind,
}

/// One cubic term of the superpotential. The path is written left to right
/// but composes right to left: `path[2]` is traversed first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperpotentialTerm {
    pub sign: Sign,
    pub path: [String; 3],
}

/// The McKay quiver of an affine ADE diagram, with superpotential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverData {
    label: DynkinLabel,
    framed: bool,
    arrows: Vec<Arrow>,
    superpotential: Vec<SuperpotentialTerm>,
}

fn edge_arrow_name(from: usize, to: usize, copy: u32) -> String {
    let primes = "'".repeat(copy as usize);
    format!("r{primes}_{{{from},{to}}}")
}

fn loop_name(vertex: usize) -> String {
    format!("l_{{{vertex}}}")
}

fn build_quiver(label: DynkinLabel, framed: bool) -> QuiverData {
    let graph = build_diagram(label, true);
    let mut arrows = Vec::new();
    let mut superpotential = Vec::new();
    for (i, j, mult) in graph.edges() {
        for copy in 0..mult {
            let forward = edge_arrow_name(i, j, copy);
            let backward = edge_arrow_name(j, i, copy);
            arrows.push(Arrow {
                name: forward.clone(),
                source: Vertex::Node(i),
                target: Vertex::Node(j),
                kind: ArrowKind::Edge,
            });
            arrows.push(Arrow {
                name: backward.clone(),
                source: Vertex::Node(j),
                target: Vertex::Node(i),
                kind: ArrowKind::Edge,
            });
            // Each dual pair contributes the four terms of
            // r_b r_f l_i - l_j r_f r_b + r_f r_b l_j - l_i r_b r_f.
            superpotential.push(SuperpotentialTerm {
                sign: Sign::Plus,
                path: [backward.clone(), forward.clone(), loop_name(i)],
            });
            superpotential.push(SuperpotentialTerm {
                sign: Sign::Minus,
                path: [loop_name(j), forward.clone(), backward.clone()],
            });
            superpotential.push(SuperpotentialTerm {
                sign: Sign::Plus,
                path: [forward.clone(), backward.clone(), loop_name(j)],
            });
            superpotential.push(SuperpotentialTerm {
                sign: Sign::Minus,
                path: [loop_name(i), backward.clone(), forward.clone()],
            });
        }
    }
    for i in 0..graph.vertex_count() {
        arrows.push(Arrow {
            name: loop_name(i),
            source: Vertex::Node(i),
            target: Vertex::Node(i),
            kind: ArrowKind::Loop,
        });
    }
    if framed {
        arrows.push(Arrow {
            name: "f".to_string(),
            source: Vertex::Framing,
            target: Vertex::Node(0),
            kind: ArrowKind::Framing,
        });
    }
    QuiverData {
        label,
        framed,
        arrows,
        superpotential,
    }
}

/// The unframed McKay quiver: doubled diagram edges plus a loop per vertex.
pub fn mckay_quiver(label: DynkinLabel) -> QuiverData {
    build_quiver(label, false)
}

/// The framed McKay quiver: one extra vertex with a single arrow onto the
/// extending vertex.
pub fn framed_mckay_quiver(label: DynkinLabel) -> QuiverData {
    build_quiver(label, true)
}

impl QuiverData {
    pub fn label(&self) -> DynkinLabel {
        self.label
    }

    pub fn is_framed(&self) -> bool {
        self.framed
    }

    /// Diagram vertices, not counting the framing vertex.
    pub fn node_count(&self) -> usize {
        self.label.rank() as usize + 1
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, name: &str) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.name == name)
    }

    pub fn superpotential(&self) -> &[SuperpotentialTerm] {
        &self.superpotential
    }
}

/// A stability parameter on the affine vertices, optionally perturbed by an
/// infinitesimal `epsilon` in a fixed direction. The pairing with a lattice
/// vector is the pair `(base . v, direction . v)` compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityParameter {
    base: Vec<BigRational>,
    perturbation: Option<Vec<BigRational>>,
}

fn dot(xs: &[BigRational], v: &RootVector) -> BigRational {
    xs.iter()
        .zip(v.entries())
        .fold(BigRational::zero(), |acc, (x, &c)| {
            acc + x * BigRational::from_integer(BigInt::from(c))
        })
}

impl StabilityParameter {
    pub fn exact(base: Vec<BigRational>) -> Self {
        StabilityParameter {
            base,
            perturbation: None,
        }
    }

    pub fn from_integers(base: &[i64]) -> Self {
        StabilityParameter::exact(
            base.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn perturbed(base: Vec<BigRational>, direction: Vec<BigRational>) -> Result<Self> {
        if direction.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                got: direction.len(),
            });
        }
        Ok(StabilityParameter {
            base,
            perturbation: Some(direction),
        })
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn base(&self) -> &[BigRational] {
        &self.base
    }

    pub fn perturbation(&self) -> Option<&[BigRational]> {
        self.perturbation.as_deref()
    }

    pub fn is_perturbed(&self) -> bool {
        self.perturbation.is_some()
    }

    /// The antipodal parameter; the perturbation flips too.
    pub fn negated(&self) -> Self {
        StabilityParameter {
            base: self.base.iter().map(|x| -x).collect(),
            perturbation: self
                .perturbation
                .as_ref()
                .map(|p| p.iter().map(|x| -x).collect()),
        }
    }

    fn check_len(&self, v: &RootVector) -> Result<()> {
        if v.len() != self.base.len() {
            return Err(Error::DimensionMismatch {
                expected: self.base.len(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `(base . v, direction . v)`; the second entry is zero when exact.
    pub fn pair(&self, v: &RootVector) -> Result<(BigRational, BigRational)> {
        self.check_len(v)?;
        let b = dot(&self.base, v);
        let e = match &self.perturbation {
            Some(p) => dot(p, v),
            None => BigRational::zero(),
        };
        Ok((b, e))
    }

    /// Sign of the pairing as an ordering against zero: `Less` means the
    /// vector is on the negative side of the parameter.
    pub fn pairing_sign(&self, v: &RootVector) -> Result<Ordering> {
        let (b, e) = self.pair(v)?;
        let zero = BigRational::zero();
        Ok(b.cmp(&zero).then_with(|| e.cmp(&zero)))
    }
}

/// The level parameter orthogonal to every real root class: `-r` at the
/// extending vertex and `1` elsewhere, where `r` is the sum of the other
/// entries of `delta`. Pairs to `+height(beta)` with `m delta + beta` and
/// `-height(beta)` with `m delta - beta`, and to zero with `delta`.
pub fn zeta_imaginary(label: DynkinLabel) -> StabilityParameter {
    let delta = imaginary_root(label);
    let r: i64 = delta.total() - 1;
    let mut base = vec![1i64; delta.len()];
    base[0] = -r;
    StabilityParameter::from_integers(&base)
}

/// The level parameter pushed off the imaginary wall by `side * epsilon` at
/// the extending vertex. `Plus` lands on the side where `delta` pairs
/// positively.
pub fn zeta_imaginary_perturbed(label: DynkinLabel, side: Sign) -> StabilityParameter {
    let zeta = zeta_imaginary(label);
    let mut direction = vec![BigRational::zero(); zeta.len()];
    direction[0] = BigRational::from_integer(BigInt::from(side.as_i64()));
    StabilityParameter::perturbed(zeta.base().to_vec(), direction)
        .expect("lengths match by construction")
}

/// King slope `zeta . v / |v|` of a dimension vector. Perturbed parameters
/// have no numeric slope.
pub fn theta_slope(zeta: &StabilityParameter, v: &RootVector) -> Result<BigRational> {
    if zeta.is_perturbed() {
        return Err(Error::PerturbedParameter);
    }
    let total = v.total();
    if total == 0 {
        return Err(Error::ZeroTotalDimension);
    }
    let (b, _) = zeta.pair(v)?;
    Ok(b / BigRational::from_integer(BigInt::from(total)))
}

/// The framing weight making the framed dimension vector `(1, v)` slope
/// zero: `zeta_inf = -zeta . v`.
pub fn solve_zeta_infinity(zeta: &StabilityParameter, v: &RootVector) -> Result<BigRational> {
    if zeta.is_perturbed() {
        return Err(Error::PerturbedParameter);
    }
    let (b, _) = zeta.pair(v)?;
    Ok(-b)
}

/// DT coefficients are indexed by dimension vectors of the unframed part;
/// this is the exponent of the corresponding monomial.
pub fn dt_invariant_indexing(v: &RootVector) -> Result<Vec<u32>> {
    if !v.is_nonnegative() {
        return Err(Error::NegativeExponent(format!("{v}")));
    }
    Ok(v.entries().iter().map(|&x| x as u32).collect())
}

/// The dimension vector behind a series exponent.
pub fn dimension_of_exponent(exponent: &[u32]) -> RootVector {
    RootVector(exponent.iter().map(|&x| i64::from(x)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallKind {
    /// Wall of a positive real root; crossing it toggles one factor.
    Real(AffineRealRoot),
    /// The single wall of the imaginary ray; crossing it toggles the
    /// MacMahon prefactor.
    Imaginary,
}

/// A codimension-one wall in stability space, given by its normal vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    normal: RootVector,
    kind: WallKind,
}

impl Wall {
    pub fn normal(&self) -> &RootVector {
        &self.normal
    }

    pub fn kind(&self) -> &WallKind {
        &self.kind
    }

    pub fn is_imaginary(&self) -> bool {
        matches!(self.kind, WallKind::Imaginary)
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WallKind::Real(_) => write!(f, "W{}", self.normal),
            WallKind::Imaginary => write!(f, "W{} (imaginary)", self.normal),
        }
    }
}

/// All walls with normal of total degree at most `bound`, plus the imaginary
/// wall, sorted by normal. Distinct positive real roots are never parallel,
/// so each gives its own wall; the imaginary multiples collapse to one.
pub fn walls(label: DynkinLabel, bound: i64) -> Vec<Wall> {
    let mut out: Vec<Wall> = affine_positive_real_roots(label, bound)
        .into_iter()
        .map(|r| Wall {
            normal: r.vector().clone(),
            kind: WallKind::Real(r),
        })
        .collect();
    let delta = imaginary_root(label);
    if delta.total() <= bound {
        out.push(Wall {
            normal: delta,
            kind: WallKind::Imaginary,
        });
    }
    out.sort_by(|a, b| a.normal.cmp(&b.normal));
    out
}

/// Splits real roots by the side of the parameter they pair to:
/// `(negative side, positive side)`. A zero pairing means the parameter
/// sits on that root's wall.
pub fn split_real_roots(
    roots: &[AffineRealRoot],
    zeta: &StabilityParameter,
) -> Result<(Vec<AffineRealRoot>, Vec<AffineRealRoot>)> {
    let mut negative = Vec::new();
    let mut positive = Vec::new();
    for root in roots {
        match zeta.pairing_sign(root.vector())? {
            Ordering::Less => negative.push(root.clone()),
            Ordering::Greater => positive.push(root.clone()),
            Ordering::Equal => {
                return Err(Error::NonGenericParameter {
                    root: root.vector().to_string(),
                })
            }
        }
    }
    Ok((negative, positive))
}

/// Walls met by the straight segment from `from` to `to`, in crossing order.
/// `Sign::Plus` means the segment enters the side where the normal pairs
/// negatively (the factor switches on).
///
/// Both endpoints must be exact and strictly off every wall within the
/// bound; two walls meeting the segment at the same point make the path
/// non-generic.
pub fn crossed_walls(
    label: DynkinLabel,
    from: &StabilityParameter,
    to: &StabilityParameter,
    bound: i64,
) -> Result<Vec<(Wall, Sign)>> {
    if from.is_perturbed() || to.is_perturbed() {
        return Err(Error::PerturbedParameter);
    }
    let mut crossings: Vec<(BigRational, Wall, Sign)> = Vec::new();
    for wall in walls(label, bound) {
        let (da, _) = from.pair(wall.normal())?;
        let (db, _) = to.pair(wall.normal())?;
        let zero = BigRational::zero();
        if da.is_zero() {
            return Err(Error::NonGenericParameter {
                root: wall.normal().to_string(),
            });
        }
        if db.is_zero() {
            return Err(Error::NonGenericParameter {
                root: wall.normal().to_string(),
            });
        }
        if (da > zero) == (db > zero) {
            continue;
        }
        // zeta(t) . normal = (1-t) da + t db vanishes at t = da / (da - db).
        let t = da.clone() / (da.clone() - db.clone());
        let direction = if db < zero { Sign::Plus } else { Sign::Minus };
        crossings.push((t, wall, direction));
    }
    crossings.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.normal().cmp(b.1.normal())));
    for pair in crossings.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::NonGenericPath(format!(
                "walls {} and {} are crossed at the same point",
                pair[0].1, pair[1].1
            )));
        }
    }
    Ok(crossings.into_iter().map(|(_, w, s)| (w, s)).collect())
}

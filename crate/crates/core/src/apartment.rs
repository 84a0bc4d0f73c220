//! The affine apartment of a split torus: the map ν, affine roots and their
//! walls, the metric, and directions at infinity.

use crate::linalg;
use crate::polyhedra::{cone_hull, cone_member, HullMode, PolyError, QPolyhedron};
use crate::rational::{primitive, serde_q, serde_qvec, Q};
use crate::rootdata::{Family, RelativeDatum};
use crate::valfield::PuiseuxElement;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApartmentError {
    #[error("torus entry {0} is zero")]
    ZeroEntry(usize),
    #[error("expected {expected} torus entries, got {got}")]
    EntryCount { got: usize, expected: usize },
    #[error("determinant of the torus element is {0}, expected 1")]
    Determinant(PuiseuxElement),
    #[error("torus element does not lie in the split torus of the preset")]
    NotSplit,
    #[error("affine root constant {n} is not in {gamma}")]
    NotInGamma { n: String, gamma: String },
    #[error("{0} is not a relative root")]
    NotARoot(String),
    #[error("direction at infinity must be nonzero")]
    ZeroDirection,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `ν(s)` for a diagonal torus element, in relative cocharacter coordinates:
/// `⟨χ, ν(s)⟩ = −v(χ(s))`. Type A takes all `n` diagonal entries; the other
/// families take `s₁,…,s_ℓ` of `diag(s₁,…,s_ℓ,s_ℓ⁻¹,…,s₁⁻¹)`.
pub fn nu(s: &[PuiseuxElement], rel: &RelativeDatum) -> Result<Vec<Q>, ApartmentError> {
    let n = rel.absolute.ambient_dim;
    if s.len() != n {
        return Err(ApartmentError::EntryCount {
            got: s.len(),
            expected: n,
        });
    }
    let mut ambient = Vec::with_capacity(n);
    for (i, e) in s.iter().enumerate() {
        let v = e
            .valuation()
            .finite()
            .cloned()
            .ok_or(ApartmentError::ZeroEntry(i))?;
        ambient.push(-v);
    }
    if rel.absolute.family == Family::A {
        let det = s.iter().fold(PuiseuxElement::one(), |acc, e| &acc * e);
        if det != PuiseuxElement::one() {
            return Err(ApartmentError::Determinant(det));
        }
    }
    rel.coords_of(&ambient).ok_or(ApartmentError::NotSplit)
}

/// `(α + n)(z) = ⟨α, z⟩ + n` with `n ∈ Γ_α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRoot {
    #[serde(with = "serde_qvec")]
    pub alpha: Vec<Q>,
    #[serde(with = "serde_q")]
    pub n: Q,
}

impl AffineRoot {
    pub fn new(rel: &RelativeDatum, alpha: Vec<Q>, n: Q) -> Result<Self, ApartmentError> {
        let gamma = rel
            .gamma(&alpha)
            .ok_or_else(|| ApartmentError::NotARoot(format!("{alpha:?}")))?;
        if !gamma.contains(&n) {
            return Err(ApartmentError::NotInGamma {
                n: n.to_string(),
                gamma: gamma.to_string(),
            });
        }
        Ok(Self { alpha, n })
    }

    pub fn eval(&self, z: &[Q]) -> Q {
        linalg::dot(&self.alpha, z) + &self.n
    }
}

/// Where a point sits relative to the walls of one root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WallPosition {
    /// On the wall `α + n = 0`.
    On {
        #[serde(with = "serde_q")]
        n: Q,
    },
    /// Strictly between the walls `α(z) = lo` and `α(z) = hi`.
    Between {
        #[serde(with = "serde_q")]
        lo: Q,
        #[serde(with = "serde_q")]
        hi: Q,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Carrier {
    /// Per relative root, in the datum's root order.
    pub positions: Vec<WallPosition>,
    pub dimension: usize,
}

impl Carrier {
    pub fn is_vertex(&self) -> bool {
        self.dimension == 0
    }
}

fn floor_q(x: &Q) -> Q {
    Q::from_integer(x.numer().div_floor(x.denom()))
}

/// The open simplex containing `z`, recorded by its position against every wall.
pub fn simplex_id(z: &[Q], rel: &RelativeDatum) -> Carrier {
    let mut on_walls = Vec::new();
    let positions = rel
        .roots
        .iter()
        .map(|r| {
            let v = linalg::dot(&r.root, z);
            let step = r.gamma.step();
            let k = &v / &step;
            if k.is_integer() {
                on_walls.push(r.root.clone());
                WallPosition::On { n: -v }
            } else {
                let lo = floor_q(&k) * &step;
                WallPosition::Between {
                    hi: &lo + &step,
                    lo,
                }
            }
        })
        .collect();
    Carrier {
        positions,
        dimension: rel.rank() - linalg::rank(&on_walls),
    }
}

pub fn distance2(z1: &[Q], z2: &[Q], rel: &RelativeDatum) -> Q {
    rel.norm2(&linalg::sub(z1, z2))
}

/// A point of the sphere at infinity, stored as a primitive integral direction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InfinityPoint {
    #[serde(with = "serde_qvec")]
    pub direction: Vec<Q>,
}

impl InfinityPoint {
    pub fn new(direction: &[Q]) -> Result<Self, ApartmentError> {
        if linalg::is_zero(direction) {
            return Err(ApartmentError::ZeroDirection);
        }
        Ok(Self {
            direction: primitive(direction),
        })
    }

    pub fn antipode(&self) -> Self {
        Self {
            direction: linalg::neg(&self.direction),
        }
    }

    pub fn is_antipodal(&self, other: &InfinityPoint) -> bool {
        self.antipode() == *other
    }
}

/// A semi-convex subset of the sphere at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SemiConvexSet {
    Empty,
    /// A pair of antipodal points, which are never joined.
    AntipodalPair {
        points: [InfinityPoint; 2],
    },
    /// The directions of a closed cone.
    Cone {
        generators: Vec<InfinityPoint>,
        cone: QPolyhedron,
    },
}

impl SemiConvexSet {
    pub fn contains(&self, p: &InfinityPoint) -> Result<bool, ApartmentError> {
        Ok(match self {
            SemiConvexSet::Empty => false,
            SemiConvexSet::AntipodalPair { points } => points.contains(p),
            SemiConvexSet::Cone { cone, .. } => cone.contains(&p.direction),
        })
    }
}

/// Smallest semi-convex set containing `f`. Outside the antipodal-pair case
/// the iterated joins fill out the conic hull of the directions.
pub fn semi_convex_hull_sphere(
    f: &[InfinityPoint],
    dim: usize,
) -> Result<SemiConvexSet, ApartmentError> {
    let pts: BTreeSet<InfinityPoint> = f.iter().cloned().collect();
    let pts: Vec<InfinityPoint> = pts.into_iter().collect();
    match pts.len() {
        0 => return Ok(SemiConvexSet::Empty),
        2 if pts[0].is_antipodal(&pts[1]) => {
            return Ok(SemiConvexSet::AntipodalPair {
                points: [pts[0].clone(), pts[1].clone()],
            })
        }
        _ => {}
    }
    let dirs: Vec<Vec<Q>> = pts.iter().map(|p| p.direction.clone()).collect();
    let cone = cone_hull(&dirs, dim);
    // keep only generators that are not already interior to the hull of the others
    let mut generators = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let others: Vec<Vec<Q>> = dirs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, d)| d.clone())
            .collect();
        if !cone_member(&others, &p.direction, HullMode::Closure)? {
            generators.push(p.clone());
        }
    }
    if generators.is_empty() {
        generators = pts;
    }
    Ok(SemiConvexSet::Cone { generators, cone })
}

/// Coroot translations; they permute the walls.
pub fn wall_preserving_translations(rel: &RelativeDatum) -> Vec<Vec<Q>> {
    rel.simple_roots.iter().map(|a| rel.coroot(a)).collect()
}

pub fn is_positive_root(rel: &RelativeDatum, alpha: &[Q]) -> bool {
    let cw = rel.fundamental_coweights();
    let h = cw
        .iter()
        .fold(linalg::zeros(rel.rank()), |acc, c| linalg::add(&acc, c));
    linalg::dot(alpha, &h).is_positive()
}

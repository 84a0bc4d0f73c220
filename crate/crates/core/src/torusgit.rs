//! Torus GIT: weight polytopes, stability criteria, χ-shifted stability,
//! root-hyperplane arrangements with their chambers, and the classification
//! of flag varieties on which stability and semistability coincide.

use crate::linalg;
use crate::polyhedra::{self, cone_member, HullMode, PolyError, QPolytope};
use crate::rational::{primitive_unsigned, qi, serde_qvec, Q};
use crate::rootdata::{spanned_hyperplanes, PresetName, RelativeDatum, RootError};
use crate::valfield::{PuiseuxElement, Valuation};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GitError {
    #[error("point has no nonzero coordinate")]
    ZeroPoint,
    #[error("weight of entry {entry} has dimension {got}, expected {expected}")]
    WeightDimension {
        entry: usize,
        got: usize,
        expected: usize,
    },
    #[error("weight is not in the closed dominant cone")]
    NotDominant,
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("unsupported descriptor: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedEntry {
    #[serde(with = "serde_qvec")]
    pub weight: Vec<Q>,
    pub index: usize,
    pub coord: PuiseuxElement,
}

/// A projective point written in a weight basis `x_{β,i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub entries: Vec<WeightedEntry>,
}

impl WeightedPoint {
    pub fn new(entries: Vec<WeightedEntry>) -> Result<Self, GitError> {
        let dim = entries
            .first()
            .map(|e| e.weight.len())
            .ok_or(GitError::ZeroPoint)?;
        for (k, e) in entries.iter().enumerate() {
            if e.weight.len() != dim {
                return Err(GitError::WeightDimension {
                    entry: k,
                    got: e.weight.len(),
                    expected: dim,
                });
            }
        }
        if entries.iter().all(|e| e.coord.is_zero()) {
            return Err(GitError::ZeroPoint);
        }
        Ok(Self { entries })
    }

    pub fn weight_dim(&self) -> usize {
        self.entries[0].weight.len()
    }

    pub fn min_valuation(&self) -> Q {
        self.entries
            .iter()
            .filter_map(|e| e.coord.valuation().finite().cloned())
            .min()
            .expect("nonzero point")
    }

    /// Rescaled by a power of t so the smallest coordinate valuation is 0.
    pub fn canonical(&self) -> Self {
        let m = self.min_valuation();
        let entries = self
            .entries
            .iter()
            .map(|e| WeightedEntry {
                coord: e.coord.shift(&-m.clone()),
                ..e.clone()
            })
            .collect();
        Self { entries }
    }

    /// `n_β = min_i v(x_{β,i})` over the weights that occur with a nonzero coordinate.
    pub fn weight_valuations(&self) -> Vec<(Vec<Q>, Q)> {
        let mut out: Vec<(Vec<Q>, Q)> = Vec::new();
        for e in &self.entries {
            let Valuation::Finite(v) = e.coord.valuation() else {
                continue;
            };
            match out.iter_mut().find(|(w, _)| *w == e.weight) {
                Some((_, n)) => {
                    if v < *n {
                        *n = v;
                    }
                }
                None => out.push((e.weight.clone(), v)),
            }
        }
        out.sort();
        out
    }

    /// Action of the torus element `diag(tᵃ)`: `x_β ↦ t^{⟨β,a⟩} x_β`.
    pub fn torus_act(&self, a: &[Q]) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| WeightedEntry {
                coord: e.coord.shift(&linalg::dot(&e.weight, a)),
                ..e.clone()
            })
            .collect();
        Self { entries }
    }

    /// Relative weights `r(β)` together with `n_β`.
    pub fn relative_valuations(&self, rel: &RelativeDatum) -> Vec<(Vec<Q>, Q)> {
        self.weight_valuations()
            .into_iter()
            .map(|(w, n)| (rel.restrict(&w), n))
            .collect()
    }
}

/// `conv{ r(β) : x_{β,i} ≠ 0 }`
pub fn mu_k(x: &WeightedPoint, rel: &RelativeDatum) -> QPolytope {
    QPolytope::new(
        rel.rank(),
        x.relative_valuations(rel).into_iter().map(|(w, _)| w),
    )
}

/// Hull of the relative weights attaining the minimum of `n_β + ⟨r(β), z⟩`.
pub fn mu_residue(x: &WeightedPoint, rel: &RelativeDatum, z: &[Q]) -> QPolytope {
    let shifted: Vec<(Vec<Q>, Q)> = x
        .relative_valuations(rel)
        .into_iter()
        .map(|(w, n)| {
            let s = n + linalg::dot(&w, z);
            (w, s)
        })
        .collect();
    let m = shifted
        .iter()
        .map(|(_, s)| s.clone())
        .min()
        .expect("nonzero point");
    QPolytope::new(
        rel.rank(),
        shifted.into_iter().filter(|(_, s)| *s == m).map(|(w, _)| w),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Stability {
    pub fn is_semistable(self) -> bool {
        self != Stability::Unstable
    }
}

pub fn polytope_status(p: &QPolytope) -> Result<Stability, GitError> {
    let origin = linalg::zeros(p.dim);
    Ok(if p.member(&origin, HullMode::Interior)? {
        Stability::Stable
    } else if p.member(&origin, HullMode::Closure)? {
        Stability::StrictlySemistable
    } else {
        Stability::Unstable
    })
}

pub fn stability_status(x: &WeightedPoint, rel: &RelativeDatum) -> Result<Stability, GitError> {
    polytope_status(&mu_k(x, rel))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiStability {
    Stable,
    Semistable,
    Unstable,
}

/// Stability for the linearization twisted by `χ/n`, `n → ∞`: decided by
/// whether `−χ` lies in (the interior of) the tangent cone of `r(μ_K(x))` at 0.
pub fn chi_status_polytope(p: &QPolytope, chi: &[Q]) -> Result<ChiStability, GitError> {
    if !p.member(&linalg::zeros(p.dim), HullMode::Closure)? {
        return Ok(ChiStability::Unstable);
    }
    let target = linalg::neg(chi);
    Ok(if cone_member(&p.points, &target, HullMode::Interior)? {
        ChiStability::Stable
    } else if cone_member(&p.points, &target, HullMode::Closure)? {
        ChiStability::Semistable
    } else {
        ChiStability::Unstable
    })
}

pub fn chi_status(
    x: &WeightedPoint,
    rel: &RelativeDatum,
    chi: &[Q],
) -> Result<ChiStability, GitError> {
    chi_status_polytope(&mu_k(x, rel), chi)
}

/// Normals (relative cocharacter coordinates) of the hyperplanes spanned by relative roots.
pub fn root_hyperplanes(rel: &RelativeDatum) -> Vec<Vec<Q>> {
    spanned_hyperplanes(&rel.relative_roots(), rel.rank())
}

/// Root hyperplanes pulled back to the absolute weight space along every
/// `λ ↦ r(w(λ))`. For split data these are the absolute root hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrangement {
    /// Linear forms on absolute weights, `λ ↦ ⟨form, λ⟩`.
    #[serde(with = "crate::rational::serde_qmat")]
    pub forms: Vec<Vec<Q>>,
}

impl Arrangement {
    pub fn new(rel: &RelativeDatum) -> Self {
        let abs = &rel.absolute;
        let mut set: BTreeSet<Vec<Q>> = BTreeSet::new();
        for n in root_hyperplanes(rel) {
            let amb = rel.include(&n);
            for a in abs.weyl_orbit(&amb) {
                set.insert(primitive_unsigned(&abs.project(&a)));
            }
        }
        Self {
            forms: set.into_iter().collect(),
        }
    }

    pub fn signs(&self, lambda: &[Q]) -> Vec<i8> {
        self.forms
            .iter()
            .map(|f| {
                let v = linalg::dot(f, lambda);
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }
}

/// The cell of a weight: which forms vanish on it and the side of every other one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ChamberId {
    pub containing: BTreeSet<usize>,
    /// Indexed like the arrangement; 0 exactly on `containing`.
    pub signs: Vec<i8>,
}

impl ChamberId {
    pub fn is_open(&self) -> bool {
        self.containing.is_empty()
    }
}

pub fn chamber_of(
    lambda: &[Q],
    rel: &RelativeDatum,
    arr: &Arrangement,
) -> Result<ChamberId, GitError> {
    let abs = &rel.absolute;
    abs.check_dim(lambda)?;
    let coords = abs.weight_coordinates(lambda);
    if coords.iter().any(|c| c.is_negative()) || coords.iter().all(|c| c.is_zero()) {
        return Err(GitError::NotDominant);
    }
    let signs = arr.signs(lambda);
    let containing = signs
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == 0)
        .map(|(i, _)| i)
        .collect();
    Ok(ChamberId { containing, signs })
}

/// `[λ′] ⪯ [λ]`: the cell of λ′ lies in the closure of the cell of λ.
pub fn chamber_leq(lower: &ChamberId, upper: &ChamberId) -> bool {
    upper.containing.is_subset(&lower.containing)
        && lower
            .signs
            .iter()
            .zip(&upper.signs)
            .all(|(a, b)| *a == 0 || a == b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub table: bool,
    pub scan: bool,
    /// Coefficients `n_j` (over J) of a weight avoiding every pulled-back hyperplane.
    #[serde(with = "crate::rational::serde_qvec")]
    pub witness: Vec<Q>,
}

fn gcd_all(vals: impl IntoIterator<Item = usize>) -> usize {
    vals.into_iter().fold(0, |a, b| a.gcd(&b))
}

/// Whether some ample bundle on `G/P_J` has no strictly semistable points,
/// by the case list and by scanning the pulled-back arrangement.
/// `j` uses 1-based absolute simple-root indices.
pub fn classify_parabolic(preset: &PresetName, j: &[usize]) -> Result<Classification, GitError> {
    let rel = RelativeDatum::preset(preset)?;
    let l = rel.absolute.rank;
    let jset: BTreeSet<usize> = j.iter().copied().collect();
    if jset.is_empty() {
        return Err(GitError::Unsupported("J must be nonempty".into()));
    }
    if let Some(&bad) = jset.iter().find(|&&i| i == 0 || i > l) {
        return Err(RootError::BadIndex(bad, l).into());
    }
    let all = jset.len() == l;
    let table = match *preset {
        PresetName::Split(crate::rootdata::Family::A, _) => {
            all || gcd_all(jset.iter().copied().chain([l + 1])) == 1
        }
        PresetName::Split(..) => all,
        PresetName::NonsplitC(_) => all || jset == (1..l).collect(),
        PresetName::Su3 => all,
        PresetName::InnerA { s, d } => {
            if all {
                true
            } else if jset.iter().all(|i| i % d == 0) {
                gcd_all(jset.iter().copied().chain([s + 1])) == 1
            } else {
                return Err(GitError::Unsupported(format!(
                    "J must consist of multiples of the skew degree {d}"
                )));
            }
        }
    };

    let omegas: Vec<&Vec<Q>> = jset
        .iter()
        .map(|&i| &rel.absolute.fundamental_weights[i - 1])
        .collect();
    let arr = Arrangement::new(&rel);
    let coeff_forms: Vec<Vec<Q>> = arr
        .forms
        .iter()
        .map(|f| omegas.iter().map(|w| linalg::dot(f, w)).collect())
        .collect();
    let scan = coeff_forms.iter().all(|c| !linalg::is_zero(c));
    let mut witness = Vec::new();
    if scan {
        // points on the moment curve meet each nonzero form's zero set finitely often
        for s in 1.. {
            let n: Vec<Q> = (0..omegas.len()).map(|k| qi(s).pow(k as i32)).collect();
            if coeff_forms.iter().all(|c| !linalg::dot(c, &n).is_zero()) {
                witness = n;
                break;
            }
        }
    }
    Ok(Classification {
        table,
        scan,
        witness,
    })
}

/// `Σ n_j ω_j` for a full coefficient vector.
pub fn weight_from_coeffs(rel: &RelativeDatum, coeffs: &[Q]) -> Vec<Q> {
    coeffs
        .iter()
        .zip(&rel.absolute.fundamental_weights)
        .fold(linalg::zeros(rel.absolute.ambient_dim), |acc, (c, w)| {
            linalg::axpy(&acc, c, w)
        })
}

/// Vertices of `r(μ)` outside the set `allowed`, and edges not parallel to any of `directions`.
pub fn skeleton_violations(
    p: &QPolytope,
    allowed: &[Vec<Q>],
    directions: &[Vec<Q>],
) -> Result<(usize, usize), GitError> {
    let sk = p.skeleton()?;
    let allowed: BTreeSet<&Vec<Q>> = allowed.iter().collect();
    let dirs: BTreeSet<Vec<Q>> = directions.iter().map(|d| primitive_unsigned(d)).collect();
    let bad_vertices = sk.vertices.iter().filter(|v| !allowed.contains(v)).count();
    let bad_edges = sk
        .edges
        .iter()
        .filter(|e| !dirs.contains(&primitive_unsigned(&e.direction)))
        .count();
    Ok((bad_vertices, bad_edges))
}

pub use polyhedra::Skeleton;

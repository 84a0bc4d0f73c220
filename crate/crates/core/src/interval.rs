//! Intervals of semistability in an apartment: `I_A(x)` as the argmax face
//! of `m(z) = min_β (n_β + ⟨r(β), z⟩)`, wall bounds, the cone at infinity
//! `Λ_A(x)`, and the χ-shifted interval.

use crate::apartment::{ApartmentError, InfinityPoint};
use crate::linalg;
use crate::polyhedra::{
    cone_generators, minimax_face, polar_cone, AffineForm, Halfspace, PolyError, QPolyhedron,
};
use crate::rational::{primitive, serde_qvec, ExtQ, Q};
use crate::rootdata::RelativeDatum;
use crate::torusgit::{mu_k, WeightedPoint};
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("the interval is empty: the point is unstable")]
    Empty,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Apartment(#[from] ApartmentError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WallBound {
    #[serde(with = "serde_qvec")]
    pub root: Vec<Q>,
    pub bound: ExtQ,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalResult {
    pub polyhedron: Option<QPolyhedron>,
    pub optimum: ExtQ,
    pub bounded: bool,
    #[serde(with = "crate::rational::serde_qvec_opt")]
    pub singleton: Option<Vec<Q>>,
    pub wall_bounds: Vec<WallBound>,
    /// For an empty interval: a direction along which every shifted valuation grows.
    #[serde(with = "serde_qvec")]
    pub witness: Vec<Q>,
}

impl IntervalResult {
    pub fn is_empty(&self) -> bool {
        self.polyhedron.is_none()
    }

    pub fn contains(&self, z: &[Q]) -> bool {
        self.polyhedron.as_ref().is_some_and(|p| p.contains(z))
    }
}

/// The forms `z ↦ n_β + ⟨r(β), z⟩`, one per occurring weight.
pub fn shifted_forms(x: &WeightedPoint, rel: &RelativeDatum) -> Vec<AffineForm> {
    let mut forms: Vec<AffineForm> = Vec::new();
    for (w, n) in x.relative_valuations(rel) {
        // several absolute weights may restrict to the same relative weight
        match forms.iter_mut().find(|f| f.normal == w) {
            Some(f) => {
                if n < f.offset {
                    f.offset = n;
                }
            }
            None => forms.push(AffineForm {
                normal: w,
                offset: n,
            }),
        }
    }
    forms
}

pub fn interval_a(x: &WeightedPoint, rel: &RelativeDatum) -> Result<IntervalResult, IntervalError> {
    let forms = shifted_forms(x, rel);
    let mf = minimax_face(&forms)?;
    let Some(face) = mf.face else {
        return Ok(IntervalResult {
            polyhedron: None,
            optimum: mf.value,
            bounded: true,
            singleton: None,
            wall_bounds: Vec::new(),
            witness: mf.witness,
        });
    };
    let wall_bounds = wall_bounds_of(&face, rel)?;
    let bounded = wall_bounds.iter().all(|w| !w.bound.is_infinite());
    let singleton = if bounded {
        singleton_from_bounds(&wall_bounds, rel)
    } else {
        None
    };
    Ok(IntervalResult {
        polyhedron: Some(face),
        optimum: mf.value,
        bounded,
        singleton,
        wall_bounds,
        witness: Vec::new(),
    })
}

fn wall_bounds_of(
    face: &QPolyhedron,
    rel: &RelativeDatum,
) -> Result<Vec<WallBound>, IntervalError> {
    let mut out = Vec::new();
    for alpha in rel.relative_roots() {
        let (bound, _) = face.sup(&alpha)?.ok_or(IntervalError::Empty)?;
        out.push(WallBound { root: alpha, bound });
    }
    Ok(out)
}

fn bound_of<'a>(bounds: &'a [WallBound], root: &[Q]) -> Option<&'a ExtQ> {
    bounds.iter().find(|w| w.root == root).map(|w| &w.bound)
}

/// The point when `sup α = −sup(−α)` for every root, i.e. the interval is a point.
fn singleton_from_bounds(bounds: &[WallBound], rel: &RelativeDatum) -> Option<Vec<Q>> {
    for w in bounds {
        let neg = linalg::neg(&w.root);
        let (ExtQ::Finite(a), Some(ExtQ::Finite(b))) = (&w.bound, bound_of(bounds, &neg)) else {
            return None;
        };
        if !(a + b).is_zero() {
            return None;
        }
    }
    let rows: Vec<Vec<Q>> = rel.simple_roots.clone();
    let rhs: Vec<Q> = rows
        .iter()
        .map(|a| {
            bound_of(bounds, a)
                .and_then(|b| b.finite().cloned())
                .unwrap()
        })
        .collect();
    linalg::solve(&rows, &rhs)
}

/// `n_α(x) = sup{α(z) : z ∈ I_A(x)}` for every relative root.
pub fn wall_bounds(res: &IntervalResult) -> Result<&[WallBound], IntervalError> {
    if res.is_empty() {
        return Err(IntervalError::Empty);
    }
    Ok(&res.wall_bounds)
}

/// `{z : α(z) ≤ n_α(x) ∀α}`
pub fn from_wall_bounds(bounds: &[WallBound], dim: usize) -> QPolyhedron {
    let hs = bounds
        .iter()
        .filter_map(|w| {
            w.bound
                .finite()
                .map(|b| Halfspace::new(linalg::neg(&w.root), -b.clone()))
        })
        .collect();
    QPolyhedron::new(dim, hs)
}

/// The cone at infinity: the polar cone of `r(μ_K(x))` and its extreme directions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaA {
    pub cone: QPolyhedron,
    pub points: Vec<InfinityPoint>,
    /// Directions `d` with `±d` both in the cone.
    pub lines: Vec<InfinityPoint>,
}

impl LambdaA {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn lambda_a(x: &WeightedPoint, rel: &RelativeDatum) -> Result<LambdaA, IntervalError> {
    let mu = mu_k(x, rel);
    let verts = mu.vertices()?;
    let cone = polar_cone(&verts, rel.rank());
    let gens = cone_generators(&cone);
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for l in &gens.lines {
        let p = InfinityPoint::new(l)?;
        points.push(p.clone());
        points.push(p.antipode());
        lines.push(p);
    }
    for r in &gens.rays {
        points.push(InfinityPoint::new(r)?);
    }
    points.sort();
    points.dedup();
    Ok(LambdaA {
        cone,
        points,
        lines,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChiInterval {
    pub value: ExtQ,
    pub face: Option<QPolyhedron>,
}

/// `n_A(x, χ) = sup ⟨χ, z⟩` over `I_A(x)` and the face where it is attained.
pub fn interval_a_chi(res: &IntervalResult, chi: &[Q]) -> Result<ChiInterval, IntervalError> {
    let poly = res.polyhedron.as_ref().ok_or(IntervalError::Empty)?;
    let (value, _) = poly.sup(chi)?.ok_or(IntervalError::Empty)?;
    let face = match &value {
        ExtQ::Finite(v) => {
            let mut f = poly.clone();
            f.push_equality(chi.to_vec(), v.clone());
            Some(f)
        }
        ExtQ::PosInf => None,
    };
    Ok(ChiInterval { value, face })
}

/// Whether some `r(w(λ))` vanishes, so that a torus-fixed semistable point exists.
pub fn fixed_locus_possible(lambda: &[Q], rel: &RelativeDatum) -> bool {
    rel.absolute
        .weyl_orbit(lambda)
        .iter()
        .any(|w| linalg::is_zero(&rel.restrict(w)))
}

/// A cocharacter pairing non-positively with all of `r(μ_K(x))`, negatively
/// with all of it when `x` is unstable. `None` when `x` is stable.
pub fn destabilizing_1ps(
    x: &WeightedPoint,
    rel: &RelativeDatum,
) -> Result<Option<Vec<Q>>, IntervalError> {
    let mu = mu_k(x, rel);
    let k = rel.rank();
    let mut strict = QPolyhedron::whole(k);
    for p in &mu.points {
        strict
            .halfspaces
            .push(Halfspace::new(linalg::neg(p), Q::from_integer(1.into())));
    }
    if let Some(e) = strict.feasible_point()? {
        return Ok(Some(primitive(&e)));
    }
    let lam = lambda_a(x, rel)?;
    Ok(lam.points.first().map(|p| p.direction.clone()))
}

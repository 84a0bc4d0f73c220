//! Exact rational convex geometry: V-polytopes, H-polyhedra, cones,
//! the minimax linear program behind intervals, and enclosing balls.

pub mod ball;
pub mod dd;
pub mod lp;

use crate::linalg;
use crate::rational::{primitive, serde_q, serde_qmat, serde_qvec, ExtQ, Q};
use dd::ConeGens;
use lp::{Lp, LpOutcome, Rel};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub use ball::{min_enclosing_ball, Ball, Metric};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("linear program exceeded the pivot limit {0}")]
    PivotLimit(usize),
    #[error("the origin is not in the polytope")]
    OriginOutside,
    #[error("ambient dimension {0} exceeds the supported bound {1}")]
    TooManyDimensions(usize, usize),
    #[error("empty input")]
    Empty,
    #[error("polyhedron is unbounded")]
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HullMode {
    Closure,
    Interior,
}

/// Convex hull of finitely many points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPolytope {
    pub dim: usize,
    #[serde(with = "serde_qmat")]
    pub points: Vec<Vec<Q>>,
}

impl QPolytope {
    /// Sorts and removes duplicate points.
    pub fn new(dim: usize, points: impl IntoIterator<Item = Vec<Q>>) -> Self {
        let set: BTreeSet<Vec<Q>> = points.into_iter().collect();
        debug_assert!(set.iter().all(|p| p.len() == dim));
        Self {
            dim,
            points: set.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Affine dimension of the hull (−1 for the empty set).
    pub fn affine_dim(&self) -> isize {
        match self.points.first() {
            None => -1,
            Some(p0) => {
                let diffs: Vec<Vec<Q>> = self.points[1..]
                    .iter()
                    .map(|p| linalg::sub(p, p0))
                    .collect();
                linalg::rank(&diffs) as isize
            }
        }
    }

    fn check(&self, q: &[Q]) -> Result<(), PolyError> {
        if q.len() != self.dim {
            Err(PolyError::DimensionMismatch(q.len(), self.dim))
        } else {
            Ok(())
        }
    }

    fn convex_lp(&self, q: &[Q]) -> Lp {
        let m = self.points.len();
        let mut lp = Lp::with_nonneg(vec![true; m]);
        for k in 0..self.dim {
            lp.add(
                self.points.iter().map(|p| p[k].clone()).collect(),
                Rel::Eq,
                q[k].clone(),
            );
        }
        lp.add(vec![Q::one(); m], Rel::Eq, Q::one());
        lp
    }

    /// Whether `q` is in the relative interior of the hull.
    pub fn relint_member(&self, q: &[Q]) -> Result<bool, PolyError> {
        self.check(q)?;
        let m = self.points.len();
        if m == 0 {
            return Ok(false);
        }
        // λ_i ≥ s for all i, maximize s
        let mut nonneg = vec![true; m];
        nonneg.push(false);
        let mut lp = Lp::with_nonneg(nonneg);
        for k in 0..self.dim {
            let mut row: Vec<Q> = self.points.iter().map(|p| p[k].clone()).collect();
            row.push(Q::zero());
            lp.add(row, Rel::Eq, q[k].clone());
        }
        let mut sum = vec![Q::one(); m];
        sum.push(Q::zero());
        lp.add(sum, Rel::Eq, Q::one());
        for i in 0..m {
            let mut row = vec![Q::zero(); m + 1];
            row[i] = Q::one();
            row[m] = -Q::one();
            lp.add(row, Rel::Ge, Q::zero());
        }
        let mut c = vec![Q::zero(); m + 1];
        c[m] = Q::one();
        Ok(match lp.maximize(&c)? {
            LpOutcome::Optimal { value, .. } => value.is_positive(),
            LpOutcome::Unbounded { .. } => true,
            LpOutcome::Infeasible => false,
        })
    }

    pub fn member(&self, q: &[Q], mode: HullMode) -> Result<bool, PolyError> {
        self.check(q)?;
        if self.points.is_empty() {
            return Ok(false);
        }
        match mode {
            HullMode::Closure => Ok(self.convex_lp(q).feasible_point()?.is_some()),
            HullMode::Interior => {
                Ok(self.affine_dim() == self.dim as isize && self.relint_member(q)?)
            }
        }
    }

    /// Points not in the hull of the others.
    pub fn vertices(&self) -> Result<Vec<Vec<Q>>, PolyError> {
        let mut out = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            let others = QPolytope {
                dim: self.dim,
                points: self
                    .points
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, x)| x.clone())
                    .collect(),
            };
            if others.points.is_empty() || !others.member(p, HullMode::Closure)? {
                out.push(p.clone());
            }
        }
        Ok(out)
    }

    /// Vertices and edges `(i, j, direction)` of the hull.
    pub fn skeleton(&self) -> Result<Skeleton, PolyError> {
        const MAX_DIM: usize = 4;
        if self.dim > MAX_DIM {
            return Err(PolyError::TooManyDimensions(self.dim, MAX_DIM));
        }
        let vertices = self.vertices()?;
        let vp = QPolytope {
            dim: self.dim,
            points: vertices.clone(),
        };
        let m = vertices.len();
        let mut edges = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let mid: Vec<Q> = linalg::scale(
                    &Q::new(1.into(), 2.into()),
                    &linalg::add(&vertices[i], &vertices[j]),
                );
                let lp = vp.convex_lp(&mid);
                let c: Vec<Q> = (0..m)
                    .map(|k| {
                        if k == i || k == j {
                            Q::zero()
                        } else {
                            Q::one()
                        }
                    })
                    .collect();
                let is_edge = match lp.maximize(&c)? {
                    LpOutcome::Optimal { value, .. } => value.is_zero(),
                    _ => false,
                };
                if is_edge {
                    edges.push(Edge {
                        from: i,
                        to: j,
                        direction: linalg::sub(&vertices[j], &vertices[i]),
                    });
                }
            }
        }
        Ok(Skeleton { vertices, edges })
    }

    /// Tangent cone at the origin, which must lie in the hull.
    pub fn tangent_cone(&self) -> Result<QPolyhedron, PolyError> {
        if !self.member(&linalg::zeros(self.dim), HullMode::Closure)? {
            return Err(PolyError::OriginOutside);
        }
        Ok(cone_hull(&self.points, self.dim))
    }

    /// Inequality description of the hull.
    pub fn h_rep(&self) -> QPolyhedron {
        let homog: Vec<Vec<Q>> = self
            .points
            .iter()
            .map(|p| [p.clone(), vec![Q::one()]].concat())
            .collect();
        let gens = ConeGens {
            lines: Vec::new(),
            rays: homog,
        };
        QPolyhedron::from_homogeneous_facets(self.dim, &dd::facets(&gens, self.dim + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    #[serde(with = "serde_qvec")]
    pub direction: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    #[serde(with = "serde_qmat")]
    pub vertices: Vec<Vec<Q>>,
    pub edges: Vec<Edge>,
}

/// `⟨normal, z⟩ ≥ offset`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde(with = "serde_qvec")]
    pub normal: Vec<Q>,
    #[serde(with = "serde_q")]
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: Vec<Q>, offset: Q) -> Self {
        Self { normal, offset }
    }

    pub fn contains(&self, z: &[Q]) -> bool {
        linalg::dot(&self.normal, z) >= self.offset
    }

    pub fn slack(&self, z: &[Q]) -> Q {
        linalg::dot(&self.normal, z) - &self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPolyhedron {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

/// Vertices, recession rays and lineality of a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VRep {
    #[serde(with = "serde_qmat")]
    pub vertices: Vec<Vec<Q>>,
    #[serde(with = "serde_qmat")]
    pub rays: Vec<Vec<Q>>,
    #[serde(with = "serde_qmat")]
    pub lines: Vec<Vec<Q>>,
}

impl VRep {
    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }
}

impl QPolyhedron {
    pub fn whole(dim: usize) -> Self {
        Self {
            dim,
            halfspaces: Vec::new(),
        }
    }

    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Self {
        Self { dim, halfspaces }
    }

    /// `{z : normal·z = value}` style constraints folded as paired halfspaces.
    pub fn push_equality(&mut self, normal: Vec<Q>, value: Q) {
        self.halfspaces
            .push(Halfspace::new(linalg::neg(&normal), -value.clone()));
        self.halfspaces.push(Halfspace::new(normal, value));
    }

    pub fn contains(&self, z: &[Q]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(z))
    }

    fn lp(&self) -> Lp {
        let mut lp = Lp::new(self.dim);
        for h in &self.halfspaces {
            lp.add(h.normal.clone(), Rel::Ge, h.offset.clone());
        }
        lp
    }

    pub fn is_empty(&self) -> Result<bool, PolyError> {
        Ok(self.lp().feasible_point()?.is_none())
    }

    pub fn feasible_point(&self) -> Result<Option<Vec<Q>>, PolyError> {
        self.lp().feasible_point()
    }

    /// `sup ⟨c, z⟩` over the polyhedron; `None` when empty.
    pub fn sup(&self, c: &[Q]) -> Result<Option<(ExtQ, Option<Vec<Q>>)>, PolyError> {
        Ok(match self.lp().maximize(c)? {
            LpOutcome::Optimal { value, x } => Some((ExtQ::Finite(value), Some(x))),
            LpOutcome::Unbounded { .. } => Some((ExtQ::PosInf, None)),
            LpOutcome::Infeasible => None,
        })
    }

    pub fn intersect(&self, other: &QPolyhedron) -> QPolyhedron {
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        QPolyhedron {
            dim: self.dim,
            halfspaces: hs,
        }
    }

    pub fn translate(&self, v: &[Q]) -> QPolyhedron {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace::new(h.normal.clone(), &h.offset + linalg::dot(&h.normal, v)))
            .collect();
        QPolyhedron {
            dim: self.dim,
            halfspaces: hs,
        }
    }

    /// Image under `z ↦ m z` for an invertible matrix `m`.
    pub fn linear_image(&self, m: &linalg::Mat) -> QPolyhedron {
        let inv = linalg::inverse(m).expect("invertible map");
        let inv_t = linalg::transpose(&inv);
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace::new(linalg::mat_vec(&inv_t, &h.normal), h.offset.clone()))
            .collect();
        QPolyhedron {
            dim: self.dim,
            halfspaces: hs,
        }
    }

    pub fn v_rep(&self) -> Result<Option<VRep>, PolyError> {
        if self.is_empty()? {
            return Ok(None);
        }
        let d = self.dim;
        let mut cons: Vec<Vec<Q>> = self
            .halfspaces
            .iter()
            .map(|h| [h.normal.clone(), vec![-h.offset.clone()]].concat())
            .collect();
        cons.push(linalg::unit(d + 1, d));
        let g = dd::generators(&cons, d + 1);
        let mut vertices = BTreeSet::new();
        let mut rays = BTreeSet::new();
        for r in &g.rays {
            let s = &r[d];
            if s.is_positive() {
                vertices.insert(r[..d].iter().map(|x| x / s).collect::<Vec<Q>>());
            } else {
                rays.insert(primitive(&r[..d]));
            }
        }
        let lines: Vec<Vec<Q>> = g.lines.iter().map(|l| l[..d].to_vec()).collect();
        Ok(Some(VRep {
            vertices: vertices.into_iter().collect(),
            rays: rays.into_iter().collect(),
            lines: dd::canonical_lines(&lines, d),
        }))
    }

    pub fn is_bounded(&self) -> Result<bool, PolyError> {
        Ok(self.v_rep()?.is_none_or(|v| v.is_bounded()))
    }

    /// Affine dimension; −1 when empty.
    pub fn dimension(&self) -> Result<isize, PolyError> {
        let Some(v) = self.v_rep()? else {
            return Ok(-1);
        };
        let p0 = &v.vertices[0];
        let mut dirs: Vec<Vec<Q>> = v.vertices[1..].iter().map(|p| linalg::sub(p, p0)).collect();
        dirs.extend(v.rays.iter().cloned());
        dirs.extend(v.lines.iter().cloned());
        Ok(linalg::rank(&dirs) as isize)
    }

    /// The unique point of a zero-dimensional polyhedron.
    pub fn singleton(&self) -> Result<Option<Vec<Q>>, PolyError> {
        match self.v_rep()? {
            Some(v) if v.is_bounded() && v.vertices.len() == 1 => Ok(Some(v.vertices[0].clone())),
            _ => Ok(None),
        }
    }

    fn from_homogeneous_facets(
        dim: usize,
        (eqs, ineqs): &(Vec<Vec<Q>>, Vec<Vec<Q>>),
    ) -> QPolyhedron {
        let mut hs = Vec::new();
        for e in eqs {
            let mut p = QPolyhedron::whole(dim);
            p.push_equality(e[..dim].to_vec(), -e[dim].clone());
            hs.extend(p.halfspaces);
        }
        for f in ineqs {
            hs.push(Halfspace::new(f[..dim].to_vec(), -f[dim].clone()));
        }
        QPolyhedron {
            dim,
            halfspaces: hs,
        }
    }

    /// A unique H-representation of the same set: equalities in reduced
    /// echelon form (as paired halfspaces), then irredundant facets reduced
    /// modulo the equalities, primitive and sorted. Empty sets map to `0 ≥ 1`.
    pub fn canonical(&self) -> Result<QPolyhedron, PolyError> {
        let d = self.dim;
        let Some(v) = self.v_rep()? else {
            return Ok(QPolyhedron {
                dim: d,
                halfspaces: vec![Halfspace::new(linalg::zeros(d), Q::one())],
            });
        };
        let mut rays: Vec<Vec<Q>> = v
            .vertices
            .iter()
            .map(|p| [p.clone(), vec![Q::one()]].concat())
            .collect();
        rays.extend(v.rays.iter().map(|r| [r.clone(), vec![Q::zero()]].concat()));
        let lines: Vec<Vec<Q>> = v
            .lines
            .iter()
            .map(|l| [l.clone(), vec![Q::zero()]].concat())
            .collect();
        let (eqs, ineqs) = dd::facets(&ConeGens { lines, rays }, d + 1);
        let (eq_rref, pivots) = if eqs.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            linalg::rref(&eqs, d + 1)
        };
        let reduce = |f: &Vec<Q>| -> Vec<Q> {
            let mut g = f.clone();
            for (row, &pc) in eq_rref.iter().zip(&pivots) {
                if !g[pc].is_zero() {
                    let c = g[pc].clone();
                    g = linalg::axpy(&g, &-c, row);
                }
            }
            primitive(&g)
        };
        let ineq: BTreeSet<Vec<Q>> = ineqs
            .iter()
            .map(reduce)
            .filter(|g| !linalg::is_zero(&g[..d]))
            .collect();
        let mut hs = Vec::new();
        for row in &eq_rref {
            let r = primitive(row);
            hs.push(Halfspace::new(r[..d].to_vec(), -r[d].clone()));
            hs.push(Halfspace::new(linalg::neg(&r[..d]), r[d].clone()));
        }
        hs.extend(
            ineq.into_iter()
                .map(|g| Halfspace::new(g[..d].to_vec(), -g[d].clone())),
        );
        Ok(QPolyhedron {
            dim: d,
            halfspaces: hs,
        })
    }

    /// `self ⊆ other`, decided by one LP per halfspace of `other`.
    pub fn subset_of(&self, other: &QPolyhedron) -> Result<bool, PolyError> {
        if self.is_empty()? {
            return Ok(true);
        }
        for h in &other.halfspaces {
            let neg = linalg::neg(&h.normal);
            match self.sup(&neg)? {
                Some((ExtQ::Finite(v), _)) if -v.clone() >= h.offset => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    pub fn same_set(&self, other: &QPolyhedron) -> Result<bool, PolyError> {
        Ok(self.subset_of(other)? && other.subset_of(self)?)
    }
}

/// `{δ : ⟨g, δ⟩ ≤ 0 for every generator g}`
pub fn polar_cone(generators: &[Vec<Q>], dim: usize) -> QPolyhedron {
    QPolyhedron {
        dim,
        halfspaces: generators
            .iter()
            .filter(|g| !linalg::is_zero(g))
            .map(|g| Halfspace::new(linalg::neg(g), Q::zero()))
            .collect(),
    }
}

/// H-representation of the closed conic hull of `generators`.
pub fn cone_hull(generators: &[Vec<Q>], dim: usize) -> QPolyhedron {
    let gens = ConeGens {
        lines: Vec::new(),
        rays: generators
            .iter()
            .filter(|g| !linalg::is_zero(g))
            .cloned()
            .collect(),
    };
    let (eqs, ineqs) = dd::facets(&gens, dim);
    let mut p = QPolyhedron::whole(dim);
    for e in eqs {
        p.push_equality(e, Q::zero());
    }
    for f in ineqs {
        p.halfspaces.push(Halfspace::new(f, Q::zero()));
    }
    p
}

/// Generators of a cone given by homogeneous halfspaces (offsets must be 0).
pub fn cone_generators(cone: &QPolyhedron) -> ConeGens {
    debug_assert!(cone.halfspaces.iter().all(|h| h.offset.is_zero()));
    let cons: Vec<Vec<Q>> = cone.halfspaces.iter().map(|h| h.normal.clone()).collect();
    dd::generators(&cons, cone.dim)
}

/// An affine form `offset + ⟨normal, z⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineForm {
    #[serde(with = "serde_qvec")]
    pub normal: Vec<Q>,
    #[serde(with = "serde_q")]
    pub offset: Q,
}

impl AffineForm {
    pub fn eval(&self, z: &[Q]) -> Q {
        &self.offset + linalg::dot(&self.normal, z)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimaxFace {
    pub value: ExtQ,
    pub face: Option<QPolyhedron>,
    /// A direction along which every form increases, when `value` is +∞.
    #[serde(with = "serde_qvec")]
    pub witness: Vec<Q>,
}

pub fn min_of_forms(forms: &[AffineForm], z: &[Q]) -> Q {
    forms
        .iter()
        .map(|f| f.eval(z))
        .min()
        .expect("nonempty form list")
}

/// Supremum of `min_i forms_i` and its argmax face.
pub fn minimax_face(forms: &[AffineForm]) -> Result<MinimaxFace, PolyError> {
    let first = forms.first().ok_or(PolyError::Empty)?;
    let k = first.normal.len();
    // variables (z, c): ⟨n_i, z⟩ − c ≥ −offset_i, maximize c
    let mut lp = Lp::new(k + 1);
    for f in forms {
        if f.normal.len() != k {
            return Err(PolyError::DimensionMismatch(f.normal.len(), k));
        }
        lp.add(
            [f.normal.clone(), vec![-Q::one()]].concat(),
            Rel::Ge,
            -f.offset.clone(),
        );
    }
    let mut c = vec![Q::zero(); k + 1];
    c[k] = Q::one();
    match lp.maximize(&c)? {
        LpOutcome::Optimal { value, .. } => {
            let hs = forms
                .iter()
                .map(|f| Halfspace::new(f.normal.clone(), &value - &f.offset))
                .collect();
            Ok(MinimaxFace {
                value: ExtQ::Finite(value),
                face: Some(QPolyhedron::new(k, hs)),
                witness: Vec::new(),
            })
        }
        LpOutcome::Unbounded { ray, .. } => Ok(MinimaxFace {
            value: ExtQ::PosInf,
            face: None,
            witness: primitive(&ray[..k]),
        }),
        LpOutcome::Infeasible => unreachable!("minimax program is always feasible"),
    }
}

/// Membership of `q` in the cone spanned by `generators`; `Interior` is the
/// interior in the ambient space.
pub fn cone_member(generators: &[Vec<Q>], q: &[Q], mode: HullMode) -> Result<bool, PolyError> {
    let dim = q.len();
    let gens: Vec<&Vec<Q>> = generators.iter().filter(|g| !linalg::is_zero(g)).collect();
    if let Some(g) = gens.iter().find(|g| g.len() != dim) {
        return Err(PolyError::DimensionMismatch(g.len(), dim));
    }
    let m = gens.len();
    match mode {
        HullMode::Closure => {
            if linalg::is_zero(q) {
                return Ok(true);
            }
            let mut lp = Lp::with_nonneg(vec![true; m]);
            for k in 0..dim {
                lp.add(
                    gens.iter().map(|g| g[k].clone()).collect(),
                    Rel::Eq,
                    q[k].clone(),
                );
            }
            Ok(lp.feasible_point()?.is_some())
        }
        HullMode::Interior => {
            let owned: Vec<Vec<Q>> = gens.iter().map(|g| (*g).clone()).collect();
            if linalg::rank(&owned) < dim {
                return Ok(false);
            }
            // q = Σ λ_i g_i with λ_i ≥ s, s ≤ 1; maximize s
            let mut nonneg = vec![true; m];
            nonneg.push(false);
            let mut lp = Lp::with_nonneg(nonneg);
            for k in 0..dim {
                let mut row: Vec<Q> = gens.iter().map(|g| g[k].clone()).collect();
                row.push(Q::zero());
                lp.add(row, Rel::Eq, q[k].clone());
            }
            for i in 0..m {
                let mut row = vec![Q::zero(); m + 1];
                row[i] = Q::one();
                row[m] = -Q::one();
                lp.add(row, Rel::Ge, Q::zero());
            }
            let mut cap = vec![Q::zero(); m + 1];
            cap[m] = Q::one();
            lp.add(cap.clone(), Rel::Le, Q::one());
            Ok(match lp.maximize(&cap)? {
                LpOutcome::Optimal { value, .. } => value.is_positive(),
                _ => false,
            })
        }
    }
}

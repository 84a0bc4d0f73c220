//! The Bruhat–Tits tree of SL₂ over `K`, handled exactly, and finite
//! families of apartments for the higher-rank models.
//!
//! A tree point `(b, u)` is the homothety class of the lattice spanned by
//! `(1, b)` and `(0, t^{2u})` in coordinates `(x₀, x₁)`; equivalently the ball
//! `{ζ : v(ζ − b) ≥ 2u}` for `ζ = x₁/x₀`. The standard apartment is `b = 0`,
//! its coordinate `u` is the relative cocharacter coordinate (`|Δu|` is the
//! distance), and `u → +∞` runs to the end `[1:0]`.

use crate::interval::{interval_a, interval_a_chi, IntervalError, IntervalResult};
use crate::linalg;
use crate::models::{act, p_epsilon_member, ModelError, ModelKind, ModelPoint};
use crate::polyhedra::{min_enclosing_ball, Metric, PolyError, QPolyhedron};
use crate::rational::{qi, serde_q, serde_qvec, ExtQ, Q};
use crate::rootdata::{PresetName, RelativeDatum};
use crate::valfield::matrix::{self, PMat};
use crate::valfield::{ratio_is_k_rational, PuiseuxElement as P, ValError, Valuation};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("expected a point of the projective line, got {0}")]
    NotProjectiveLine(String),
    #[error("the chart matrix is singular")]
    Singular,
    #[error("no torus-invariant monomials of degree {0}")]
    NoInvariants(u32),
    #[error("the point has no finite invariant value: it is unstable for the reference torus")]
    Unstable,
    #[error("the input set is empty")]
    Empty,
    #[error("the input set is unbounded")]
    Unbounded,
    #[error("the character is zero")]
    ZeroCharacter,
    #[error("the apartment family must be nonempty")]
    EmptyFamily,
    #[error(transparent)]
    Field(#[from] ValError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

// ---------------------------------------------------------------------------
// Points

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TreePoint {
    pub b: P,
    #[serde(with = "serde_q")]
    pub u: Q,
}

impl fmt::Display for TreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.b, self.u)
    }
}

/// The representative of `(b, u)` with no terms of exponent `≥ 2u`.
pub fn tree_canonicalize(b: &P, u: &Q) -> TreePoint {
    TreePoint {
        b: b.truncate_below(&(u * qi(2))),
        u: u.clone(),
    }
}

fn val(x: &P) -> Option<Q> {
    x.valuation().finite().cloned()
}

fn is_half_integer(u: &Q) -> bool {
    (u * qi(2)).is_integer()
}

impl TreePoint {
    pub fn new(b: P, u: Q) -> Self {
        tree_canonicalize(&b, &u)
    }

    pub fn apartment(u: Q) -> Self {
        Self { b: P::zero(), u }
    }

    pub fn origin() -> Self {
        Self::apartment(Q::zero())
    }

    /// Whether the point lies in the building over `K` (not just over the
    /// bigger field).
    pub fn is_k_point(&self) -> bool {
        self.b.is_k_rational()
    }

    pub fn is_vertex(&self) -> bool {
        self.is_k_point() && is_half_integer(&self.u)
    }

    pub fn in_standard_apartment(&self) -> bool {
        self.b.is_zero()
    }

    /// The point of the standard apartment closest to `self`.
    pub fn retraction(&self) -> TreePoint {
        match val(&self.b) {
            None => self.clone(),
            Some(v) => TreePoint::apartment(v / qi(2)),
        }
    }

    /// Neighbouring vertices of a vertex in the direction of `c t^{2u}`
    /// (`c = 0` stays in the apartment through `b`).
    pub fn child(&self, c: &Q) -> TreePoint {
        let e = &self.u * qi(2);
        let b = &self.b + &P::monomial(c.clone(), e);
        TreePoint::new(b, &self.u + Q::new(1.into(), 2.into()))
    }

    pub fn parent(&self) -> TreePoint {
        TreePoint::new(self.b.clone(), &self.u - Q::new(1.into(), 2.into()))
    }
}

/// `2` times the exponent of the ball where the geodesics from `z₁` and `z₂`
/// toward the end `[0:1]` meet.
fn meet_exponent(z1: &TreePoint, z2: &TreePoint) -> Q {
    let r = (&z1.u * qi(2)).min(&z2.u * qi(2));
    match val(&(&z1.b - &z2.b)) {
        Some(v) if v < r => v,
        _ => r,
    }
}

pub fn tree_distance(z1: &TreePoint, z2: &TreePoint) -> Q {
    &z1.u + &z2.u - meet_exponent(z1, z2)
}

/// The point at distance `s` from `z₁` on the geodesic to `z₂`.
pub fn geodesic_point(z1: &TreePoint, z2: &TreePoint, s: &Q) -> TreePoint {
    let top = meet_exponent(z1, z2) / qi(2);
    let up = &z1.u - &top;
    if *s <= up {
        TreePoint::new(z1.b.clone(), &z1.u - s)
    } else {
        TreePoint::new(z2.b.clone(), &top + (s - &up))
    }
}

/// Action of an invertible 2×2 matrix on the tree (through `GL₂`).
pub fn tree_act(g: &PMat, z: &TreePoint) -> Result<TreePoint, TreeError> {
    let det = matrix::det(g);
    let vdet = val(&det).ok_or(TreeError::Singular)?;
    let r = &z.u * qi(2);
    let w1 = [&g[0][0] + &(&g[0][1] * &z.b), &g[1][0] + &(&g[1][1] * &z.b)];
    let w2 = [g[0][1].shift(&r), g[1][1].shift(&r)];
    let pivot = match (val(&w1[0]), val(&w2[0])) {
        (Some(a), Some(b)) if b < a => w2,
        (None, _) => w2,
        _ => w1,
    };
    let va = val(&pivot[0]).ok_or(TreeError::Singular)?;
    let r_new = &r + &vdet - &va * qi(2);
    let b_new = match val(&pivot[1]) {
        None => P::zero(),
        Some(vb) => {
            let inv = pivot[0].inverse_truncated(&(&r_new - &vb))?;
            &pivot[1] * &inv
        }
    };
    Ok(tree_canonicalize(&b_new, &(r_new / qi(2))))
}

// ---------------------------------------------------------------------------
// Charts

/// An apartment `g(A)` given by `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApartmentChart {
    pub g: PMat,
}

impl ApartmentChart {
    pub fn identity(n: usize) -> Self {
        Self {
            g: matrix::identity(n),
        }
    }

    /// `I + b E_{ij}`
    pub fn elementary(n: usize, i: usize, j: usize, b: P) -> Self {
        let mut g = matrix::identity(n);
        g[i][j] = b;
        Self { g }
    }

    pub fn lower_unipotent(b: P) -> Self {
        Self::elementary(2, 1, 0, b)
    }

    pub fn upper_unipotent(b: P) -> Self {
        Self::elementary(2, 0, 1, b)
    }

    pub fn inverse(&self) -> Result<PMat, TreeError> {
        matrix::inverse_det_one(&self.g).ok_or(TreeError::Singular)
    }

    /// The tree point with chart coordinate `u`.
    pub fn point(&self, u: &Q) -> Result<TreePoint, TreeError> {
        tree_act(&self.g, &TreePoint::apartment(u.clone()))
    }

    /// Chart coordinate of `z`, when `z` lies on this apartment.
    pub fn coordinate(&self, z: &TreePoint) -> Result<Option<Q>, TreeError> {
        let w = tree_act(&self.inverse_gl()?, z)?;
        Ok(w.in_standard_apartment().then_some(w.u))
    }

    fn inverse_gl(&self) -> Result<PMat, TreeError> {
        let det = matrix::det(&self.g);
        if det.is_zero() {
            return Err(TreeError::Singular);
        }
        // adj(g) is a scalar multiple of g⁻¹, which acts identically on the tree
        Ok(matrix::adjugate(&self.g))
    }
}

/// All `Σ_{k<depth} c_k t^k` with digits `c_k`, including 0.
pub fn digit_sums(depth: u32, digits: &[i64]) -> Vec<P> {
    let mut out = vec![P::zero()];
    for k in 0..depth {
        out = out
            .iter()
            .flat_map(|b| {
                digits
                    .iter()
                    .map(move |&c| b + &P::monomial(qi(c), qi(k as i64)))
            })
            .collect();
    }
    let set: BTreeSet<P> = out.into_iter().collect();
    set.into_iter().collect()
}

/// The identity and the elementary unipotents `I + b E_{ij}`, `b` a nonzero
/// digit sum of length `depth`.
pub fn unipotent_family(n: usize, depth: u32, digits: &[i64]) -> Vec<ApartmentChart> {
    let sums: Vec<P> = digit_sums(depth, digits)
        .into_iter()
        .filter(|b| !b.is_zero())
        .collect();
    let mut out = vec![ApartmentChart::identity(n)];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.extend(
                    sums.iter()
                        .map(|b| ApartmentChart::elementary(n, i, j, b.clone())),
                );
            }
        }
    }
    out
}

/// Restriction of a family to the charts upper (or lower) triangular.
pub fn borel_subfamily(family: &[ApartmentChart], upper: bool) -> Vec<ApartmentChart> {
    family
        .iter()
        .filter(|c| {
            let n = c.g.len();
            (0..n)
                .all(|i| (0..n).all(|j| if upper { i <= j } else { i >= j } || c.g[i][j].is_zero()))
        })
        .cloned()
        .collect()
}

// ---------------------------------------------------------------------------
// Semistability on the tree

fn line_coords(x: &ModelPoint) -> Result<[P; 2], TreeError> {
    match x {
        ModelPoint::Proj { coords } if coords.len() == 2 => {
            Ok([coords[0].clone(), coords[1].clone()])
        }
        other => Err(TreeError::NotProjectiveLine(other.kind().to_string())),
    }
}

/// Shifted valuations `(n₀ + u, n₁ − u)` of `x` at `z`, in the chart through
/// `z` with ends `[1:b]` and `[0:1]`.
fn shifted_at(x: &[P; 2], z: &TreePoint) -> (Valuation, Valuation) {
    let x1 = &x[1] - &(&z.b * &x[0]);
    let sh = |v: Valuation, s: &Q| match v {
        Valuation::Finite(q) => Valuation::Finite(q + s),
        inf => inf,
    };
    (
        sh(x[0].valuation(), &z.u),
        sh(x1.valuation(), &-z.u.clone()),
    )
}

/// The reduction of `x` at a vertex `z`, as a point of the residue line.
pub fn reduction_at(x: &ModelPoint, z: &TreePoint) -> Result<[Q; 2], TreeError> {
    let c = line_coords(x)?;
    let x1 = &c[1] - &(&z.b * &c[0]);
    let (s0, s1) = shifted_at(&c, z);
    let m = s0.clone().min(s1.clone());
    let m = m
        .finite()
        .cloned()
        .ok_or(TreeError::Model(ModelError::ZeroVector))?;
    let lead = |p: &P, s: &Valuation| -> Q {
        if s.finite() == Some(&m) {
            p.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
        } else {
            Q::zero()
        }
    };
    Ok([lead(&c[0], &s0), lead(&x1, &s1)])
}

/// Semistability of `x` at `z ∈ 𝓑`. At a vertex every reduction is a point of
/// ℙ¹(ℚ), which some residue torus through `z` fixes, so the answer is `false`;
/// in the interior of an edge it is the equality of the two shifted valuations.
pub fn ss_at(x: &ModelPoint, z: &TreePoint) -> Result<bool, TreeError> {
    let c = line_coords(x)?;
    if !z.is_k_point() {
        return Ok(false);
    }
    if z.is_vertex() {
        reduction_at(x, z)?;
        return Ok(false);
    }
    let (s0, s1) = shifted_at(&c, z);
    Ok(s0 == s1 && s0.finite().is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "radius")]
pub enum Certificate {
    Exact,
    RadiusLimited(u32),
}

/// Closed segment `[from, to]` of chart coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeSegment {
    pub chart: ApartmentChart,
    #[serde(with = "serde_q")]
    pub from: Q,
    #[serde(with = "serde_q")]
    pub to: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeInterval {
    pub segments: Vec<TreeSegment>,
    /// The segment endpoints as tree points.
    pub points: Vec<TreePoint>,
    pub certificate: Certificate,
    /// For an empty interval: an apartment whose first end `g[1:0]` is `x`,
    /// so its torus fixes `x`.
    pub witness: Option<ApartmentChart>,
    /// Vertices visited, in order, with the edges walked.
    pub explored: Vec<TreePoint>,
}

impl TreeInterval {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn singleton(&self) -> Option<&TreePoint> {
        match self.points.as_slice() {
            [p] => Some(p),
            _ => None,
        }
    }
}

fn k_rational_witness(x: &[P; 2]) -> Result<ApartmentChart, TreeError> {
    if x[0].is_zero() {
        return Ok(ApartmentChart {
            g: matrix::from_ints(&[&[0, -1], &[1, 0]]),
        });
    }
    let (e, c) = x[0].leading().cloned().expect("nonzero");
    let x0 = x[0].monomial_div(&c, &e)?;
    let x1 = x[1].monomial_div(&c, &e)?;
    Ok(ApartmentChart {
        g: vec![vec![x0, P::zero()], vec![x1, P::one()]],
    })
}

/// `I(x)` on the tree: empty with a witness for `K`-rational `x`; otherwise a
/// single point found by walking from the origin toward `x₁/x₀`, refining
/// each apartment through the current vertex by the interval LP.
pub fn interval_tree(x: &ModelPoint, radius: u32) -> Result<TreeInterval, TreeError> {
    let c = line_coords(x)?;
    let rel = RelativeDatum::preset(&PresetName::Split(crate::rootdata::Family::A, 1)).expect("A1");
    if c[0].is_zero() || c[1].is_zero() || ratio_is_k_rational(&c[0], &c[1]) {
        return Ok(TreeInterval {
            segments: Vec::new(),
            points: Vec::new(),
            certificate: Certificate::Exact,
            witness: Some(k_rational_witness(&c)?),
            explored: Vec::new(),
        });
    }
    let v0 = val(&c[0]).expect("nonzero");
    let limit = Q::from_integer(radius.into());
    let mut z = TreePoint::origin();
    let mut explored = vec![z.clone()];
    loop {
        if tree_distance(&TreePoint::origin(), &z) > limit {
            return Ok(TreeInterval {
                segments: Vec::new(),
                points: Vec::new(),
                certificate: Certificate::RadiusLimited(radius),
                witness: None,
                explored,
            });
        }
        let r = &z.u * qi(2);
        let w = val(&(&c[1] - &(&z.b * &c[0]))).expect("x is not K-rational") - &v0;
        if w < r {
            z = z.parent();
            explored.push(z.clone());
            continue;
        }
        // the edge toward x leaves z in the direction of the t^r coefficient
        let lead = |b: &P| {
            let rest = &c[1] - &(b * &c[0]);
            rest.leading().expect("x is not K-rational").1.clone()
                / c[0].leading().expect("nonzero").1.clone()
        };
        let dir = if w == r { lead(&z.b) } else { Q::zero() };
        let next = z.child(&dir);
        let w_next = val(&(&c[1] - &(&next.b * &c[0]))).expect("x is not K-rational") - &v0;
        if w_next < &r + qi(1) {
            let chart = ApartmentChart::lower_unipotent(next.b.clone());
            let local = act(&chart.inverse()?, x)?;
            let res = interval_a(&local.weighted_coordinates(0)?, &rel)?;
            let target = res
                .singleton
                .as_ref()
                .map(|s| s[0].clone())
                .ok_or(TreeError::Unstable)?;
            let found = chart.point(&target)?;
            let exact = !ss_at(x, &z)? && !ss_at(x, &next)? && ss_at(x, &found)?;
            explored.push(next);
            return Ok(TreeInterval {
                segments: vec![TreeSegment {
                    chart,
                    from: target.clone(),
                    to: target,
                }],
                points: vec![found],
                certificate: if exact {
                    Certificate::Exact
                } else {
                    Certificate::RadiusLimited(radius)
                },
                witness: None,
                explored,
            });
        }
        z = next;
        explored.push(z.clone());
    }
}

// ---------------------------------------------------------------------------
// r-functions over chart families

/// A value in ℚ ∪ {−∞}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogValue {
    NegInf,
    Finite(Q),
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LogValue::NegInf => s.serialize_str("-inf"),
            LogValue::Finite(q) => s.serialize_str(&crate::rational::fmt_q(q)),
        }
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogValue::NegInf => write!(f, "-inf"),
            LogValue::Finite(q) => write!(f, "{q}"),
        }
    }
}

/// The weighted point used for invariants, at the representative's own
/// scale: the single factor, or the extremal-weight coordinates for `ρ`
/// when there are several.
fn invariant_coordinates(x: &ModelPoint) -> Result<crate::torusgit::WeightedPoint, TreeError> {
    let factors = x.factors().len();
    if factors == 1 {
        Ok(x.weighted_coordinates_unscaled(0)?)
    } else {
        let rank = x.kind().relative().absolute.rank;
        Ok(x.weighted_for_unscaled(&vec![Q::one(); rank])?)
    }
}

/// `min_i v(f_i)` over degree-`d` monomials of relative weight zero, over the
/// occurring relative weights `(r, n)`. `None` when every monomial vanishes.
fn min_invariant(weights: &[(Vec<Q>, Q)], d: u32, dim: usize) -> Option<Q> {
    fn go(ws: &[(Vec<Q>, Q)], k: usize, left: u32, acc_w: Vec<Q>, acc_v: Q, best: &mut Option<Q>) {
        if left == 0 {
            if linalg::is_zero(&acc_w) && best.as_ref().is_none_or(|b| acc_v < *b) {
                *best = Some(acc_v);
            }
            return;
        }
        for i in k..ws.len() {
            go(
                ws,
                i,
                left - 1,
                linalg::add(&acc_w, &ws[i].0),
                &acc_v + &ws[i].1,
                best,
            );
        }
    }
    let mut best = None;
    go(weights, 0, d, linalg::zeros(dim), Q::zero(), &mut best);
    best
}

fn relative_minima(x: &ModelPoint) -> Result<(Vec<(Vec<Q>, Q)>, usize), TreeError> {
    let rel = x.kind().relative();
    let wp = invariant_coordinates(x)?;
    let mut m: BTreeMap<Vec<Q>, Q> = BTreeMap::new();
    for (w, n) in wp.relative_valuations(&rel) {
        m.entry(w)
            .and_modify(|v| *v = v.clone().min(n.clone()))
            .or_insert(n);
    }
    Ok((m.into_iter().collect(), rel.rank()))
}

/// Smallest `d ≤ 12` with a nonzero invariant of degree `d` for the model.
pub fn default_degree(kind: ModelKind) -> Option<u32> {
    let rel = kind.relative();
    let weights: BTreeSet<Vec<Q>> = kind
        .standard_weights()
        .iter()
        .map(|w| rel.restrict(w))
        .collect();
    let ws: Vec<(Vec<Q>, Q)> = weights.into_iter().map(|w| (w, Q::zero())).collect();
    (1..=12).find(|&d| min_invariant(&ws, d, rel.rank()).is_some())
}

/// `log r_{gA,A}(x) = min_i v(f_i(x)) − min_i v(f_i(g⁻¹x))`.
pub fn r_log(x: &ModelPoint, g: &ApartmentChart, d: u32) -> Result<LogValue, TreeError> {
    let (mx, dim) = relative_minima(x)?;
    let here = min_invariant(&mx, d, dim);
    let here = match here {
        Some(h) => h,
        None => {
            return Err(if default_degree(x.kind()).is_some_and(|d0| d % d0 == 0) {
                TreeError::Unstable
            } else {
                TreeError::NoInvariants(d)
            })
        }
    };
    let moved = act(&g.inverse()?, x)?;
    let (my, _) = relative_minima(&moved)?;
    Ok(match min_invariant(&my, d, dim) {
        Some(there) => LogValue::Finite(here - there),
        None => LogValue::NegInf,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RTilde {
    pub value: LogValue,
    /// Indices of the minimizing charts.
    pub argmin: Vec<usize>,
    /// `I_{A′}(x)` in each minimizing chart's coordinates (the chart's
    /// `I_A(g⁻¹x)`).
    pub pieces: Vec<(usize, IntervalResult)>,
}

/// `min` of `r_log` over the family, the minimizing charts and their
/// intervals. `−∞` when some chart's torus destabilizes `x`.
pub fn r_tilde_estimate(
    x: &ModelPoint,
    family: &[ApartmentChart],
    d: u32,
) -> Result<RTilde, TreeError> {
    if family.is_empty() {
        return Err(TreeError::EmptyFamily);
    }
    let vals = match family
        .iter()
        .map(|g| r_log(x, g, d))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(v) => v,
        // x itself is unstable for the reference torus: r̃ vanishes
        Err(TreeError::Unstable) => {
            let mut argmin = Vec::new();
            for (i, g) in family.iter().enumerate() {
                let (m, dim) = relative_minima(&act(&g.inverse()?, x)?)?;
                if min_invariant(&m, d, dim).is_none() {
                    argmin.push(i);
                }
            }
            return Ok(RTilde {
                value: LogValue::NegInf,
                argmin,
                pieces: Vec::new(),
            });
        }
        Err(e) => return Err(e),
    };
    let value = vals.iter().min().cloned().expect("nonempty");
    let argmin: Vec<usize> = (0..family.len()).filter(|&i| vals[i] == value).collect();
    let rel = x.kind().relative();
    let mut pieces = Vec::new();
    if value != LogValue::NegInf {
        for &i in &argmin {
            let local = act(&family[i].inverse()?, x)?;
            pieces.push((i, interval_a(&invariant_coordinates(&local)?, &rel)?));
        }
    }
    Ok(RTilde {
        value,
        argmin,
        pieces,
    })
}

/// The assembled interval on the tree: the images of the chart pieces.
pub fn assemble_tree(
    r: &RTilde,
    family: &[ApartmentChart],
) -> Result<BTreeSet<TreePoint>, TreeError> {
    let mut out = BTreeSet::new();
    for (i, res) in &r.pieces {
        match &res.singleton {
            Some(s) => {
                out.insert(family[*i].point(&s[0])?);
            }
            None => return Err(TreeError::Unbounded),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Circumcenters

/// Midpoint of a diameter of a finite point set in the tree.
pub fn circumcenter_tree(points: &[TreePoint]) -> Result<TreePoint, TreeError> {
    let first = points.first().ok_or(TreeError::Empty)?;
    let mut best = (first, first, Q::zero());
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d = tree_distance(p, q);
            if d > best.2 {
                best = (p, q, d);
            }
        }
    }
    Ok(geodesic_point(best.0, best.1, &(best.2 / qi(2))))
}

pub fn circumcenter_interval(i: &TreeInterval) -> Result<TreePoint, TreeError> {
    let mut pts = Vec::new();
    for s in &i.segments {
        pts.push(s.chart.point(&s.from)?);
        pts.push(s.chart.point(&s.to)?);
    }
    circumcenter_tree(&pts)
}

/// Center of the smallest enclosing ball of a bounded polyhedron's vertices.
pub fn circumcenter_apartment(poly: &QPolyhedron, metric: &Metric) -> Result<Vec<Q>, TreeError> {
    let v = poly.v_rep()?.ok_or(TreeError::Empty)?;
    if !v.rays.is_empty() || !v.lines.is_empty() {
        return Err(TreeError::Unbounded);
    }
    Ok(min_enclosing_ball(&v.vertices, metric)
        .ok_or(TreeError::Empty)?
        .center)
}

// ---------------------------------------------------------------------------
// Characters

/// `f_χ(b, u)` for `χ = c ω₁`: `c u_A − |c| d(z, z_A)` with `z_A` the
/// retraction to the standard apartment.
pub fn f_chi_tree(z: &TreePoint, chi: &Q) -> Q {
    let za = z.retraction();
    chi * &za.u - chi.abs() * tree_distance(z, &za)
}

/// The parabolic `P^χ`: chambers at infinity whose closure contains the
/// metric dual `χ^♯`, their common face `τ_χ`, and a generic `δ ∈ τ_χ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicData {
    #[serde(with = "serde_qvec")]
    pub chi: Vec<Q>,
    #[serde(with = "crate::rational::serde_qvec", rename = "dual")]
    pub chi_sharp: Vec<Q>,
    pub chambers: Vec<Chamber>,
    /// Extreme rays of `τ_χ`.
    #[serde(with = "crate::rational::serde_qmat")]
    pub tau: Vec<Vec<Q>>,
    #[serde(with = "serde_qvec")]
    pub generic: Vec<Q>,
    pub is_borel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chamber {
    #[serde(with = "crate::rational::serde_qmat")]
    pub rays: Vec<Vec<Q>>,
}

impl ParabolicData {
    /// Whether `g ∈ P^χ`, for a matrix in the model group.
    pub fn contains(&self, g: &PMat, kind: ModelKind) -> bool {
        p_epsilon_member(g, &self.generic, kind)
    }
}

pub fn p_chi_data(chi: &[Q], rel: &RelativeDatum) -> Result<ParabolicData, TreeError> {
    if linalg::is_zero(chi) {
        return Err(TreeError::ZeroCharacter);
    }
    let sharp = linalg::solve(&rel.gram, chi).expect("metric is nondegenerate");
    let mut chambers = Vec::new();
    let mut tau: Option<Vec<Vec<Q>>> = None;
    for rays in rel.weyl_chambers() {
        let coeffs =
            linalg::solve(&linalg::transpose(&rays), &sharp).expect("chamber rays form a basis");
        if coeffs.iter().any(|c| c.is_negative()) {
            continue;
        }
        if tau.is_none() {
            tau = Some(
                rays.iter()
                    .zip(&coeffs)
                    .filter(|(_, c)| c.is_positive())
                    .map(|(r, _)| r.clone())
                    .collect(),
            );
        }
        chambers.push(Chamber { rays });
    }
    let tau = tau.expect("the chambers cover the space");
    let generic = tau
        .iter()
        .fold(linalg::zeros(rel.rank()), |a, r| linalg::add(&a, r));
    let is_borel = tau.len() == rel.rank();
    Ok(ParabolicData {
        chi: chi.to_vec(),
        chi_sharp: sharp,
        chambers,
        tau,
        generic,
        is_borel,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiOnTree {
    pub value: ExtQ,
    pub points: Vec<TreePoint>,
}

/// `I(x, χ)` on the tree: the argmax of `f_χ` over `I(x)`.
pub fn interval_chi_tree(x: &ModelPoint, chi: &Q, radius: u32) -> Result<ChiOnTree, TreeError> {
    let i = interval_tree(x, radius)?;
    let best = i
        .points
        .iter()
        .map(|p| f_chi_tree(p, chi))
        .max()
        .ok_or(IntervalError::Empty)?;
    let points = i
        .points
        .iter()
        .filter(|p| f_chi_tree(p, chi) == best)
        .cloned()
        .collect();
    Ok(ChiOnTree {
        value: ExtQ::Finite(best),
        points,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiOnFamily {
    pub value: ExtQ,
    /// Per chart (index into the family): the face of its piece where the
    /// maximum is attained.
    pub faces: Vec<(usize, Option<QPolyhedron>)>,
}

/// `I(x, χ)` over the minimizing charts of a family that lie in `P^χ`. Those
/// charts are unipotent, so `f_χ(g z) = ⟨χ, z⟩` on them.
pub fn interval_chi_family(
    x: &ModelPoint,
    chi: &[Q],
    family: &[ApartmentChart],
    d: u32,
) -> Result<ChiOnFamily, TreeError> {
    let kind = x.kind();
    let par = p_chi_data(chi, &kind.relative())?;
    let keep: Vec<usize> = (0..family.len())
        .filter(|&i| par.contains(&family[i].g, kind))
        .collect();
    let sub: Vec<ApartmentChart> = keep.iter().map(|&i| family[i].clone()).collect();
    if sub.is_empty() {
        return Err(TreeError::EmptyFamily);
    }
    let rt = r_tilde_estimate(x, &sub, d)?;
    if rt.value == LogValue::NegInf {
        return Err(TreeError::Unstable);
    }
    let mut per = Vec::new();
    for (i, res) in &rt.pieces {
        let ci = interval_a_chi(res, chi)?;
        per.push((keep[*i], ci));
    }
    let value = per
        .iter()
        .map(|(_, c)| c.value.clone())
        .max()
        .expect("nonempty");
    let faces = per
        .into_iter()
        .filter(|(_, c)| c.value == value)
        .map(|(i, c)| (i, c.face))
        .collect();
    Ok(ChiOnFamily { value, faces })
}

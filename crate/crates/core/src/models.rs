//! Concrete flag-variety points with honest coordinates: projective spaces,
//! Grassmannians and full flags for SL_n, flags of the symplectic group Sp₄,
//! and incidence pairs for the unitary group SU₃.

use crate::linalg;
use crate::rational::{qi, Q};
use crate::rootdata::{Family, PresetName, RelativeDatum, RootDatum};
use crate::torusgit::{GitError, WeightedEntry, WeightedPoint};
use crate::valfield::matrix::{self, PMat};
use crate::valfield::{PuiseuxElement as P, ValError};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("unsupported model parameters: {0}")]
    Unsupported(String),
    #[error("relation violated: {relation} = {value} ≠ 0")]
    Relation { relation: String, value: String },
    #[error("the coordinate vector is zero")]
    ZeroVector,
    #[error("the rows are linearly dependent")]
    Dependent,
    #[error("expected {expected} entries, got {got}")]
    Shape { got: usize, expected: usize },
    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),
    #[error("factor {0} does not exist for this model")]
    NoFactor(usize),
    #[error(transparent)]
    Field(#[from] ValError),
    #[error(transparent)]
    Git(#[from] GitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    /// ℙ^{n−1}
    Proj(usize),
    /// Gr(j, n)
    Grass(usize, usize),
    /// Full flags in n-space.
    Flag(usize),
    /// Complete isotropic flags (line ⊂ Lagrangian plane) in 4-space.
    Sp4Flag,
    /// The line of an Sp₄ flag, in ℙ³.
    Sp4Line,
    /// The Lagrangian plane of an Sp₄ flag, on the quadric in ℙ⁴.
    Sp4Lagrangian,
    /// Pairs of points of ℙ² incident for the unitary form.
    Su3Pair,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Proj(n) => write!(f, "proj({n})"),
            ModelKind::Grass(j, n) => write!(f, "grass({j},{n})"),
            ModelKind::Flag(n) => write!(f, "flag({n})"),
            ModelKind::Sp4Flag => f.write_str("sp4_flag"),
            ModelKind::Sp4Line => f.write_str("sp4_line"),
            ModelKind::Sp4Lagrangian => f.write_str("sp4_lagrangian"),
            ModelKind::Su3Pair => f.write_str("su3_pair"),
        }
    }
}

impl FromStr for ModelKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || ModelError::UnknownModel(s.to_string());
        let args = |name: &str| -> Option<Vec<usize>> {
            let inner = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
            inner.split(',').map(|a| a.trim().parse().ok()).collect()
        };
        let kind = match s {
            "sp4_flag" => ModelKind::Sp4Flag,
            "sp4_line" => ModelKind::Sp4Line,
            "sp4_lagrangian" => ModelKind::Sp4Lagrangian,
            "su3_pair" => ModelKind::Su3Pair,
            _ => {
                if let Some(a) = args("proj") {
                    match a[..] {
                        [n] => ModelKind::Proj(n),
                        _ => return Err(unknown()),
                    }
                } else if let Some(a) = args("grass") {
                    match a[..] {
                        [j, n] => ModelKind::Grass(j, n),
                        _ => return Err(unknown()),
                    }
                } else if let Some(a) = args("flag") {
                    match a[..] {
                        [n] => ModelKind::Flag(n),
                        _ => return Err(unknown()),
                    }
                } else {
                    return Err(unknown());
                }
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl ModelKind {
    fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::Unsupported(m));
        match *self {
            ModelKind::Proj(n) if !(2..=9).contains(&n) => {
                bad(format!("proj({n}) needs 2 ≤ n ≤ 9"))
            }
            ModelKind::Grass(j, n) if !(2..=9).contains(&n) || j == 0 || j >= n => {
                bad(format!("grass({j},{n}) needs 0 < j < n ≤ 9"))
            }
            ModelKind::Flag(n) if !(2..=5).contains(&n) => {
                bad(format!("flag({n}) needs 2 ≤ n ≤ 5"))
            }
            _ => Ok(()),
        }
    }

    pub fn group_size(&self) -> usize {
        match *self {
            ModelKind::Proj(n) | ModelKind::Grass(_, n) | ModelKind::Flag(n) => n,
            ModelKind::Sp4Flag | ModelKind::Sp4Line | ModelKind::Sp4Lagrangian => 4,
            ModelKind::Su3Pair => 3,
        }
    }

    pub fn preset(&self) -> PresetName {
        match *self {
            ModelKind::Proj(n) | ModelKind::Grass(_, n) | ModelKind::Flag(n) => {
                PresetName::Split(Family::A, n - 1)
            }
            ModelKind::Sp4Flag | ModelKind::Sp4Line | ModelKind::Sp4Lagrangian => {
                PresetName::Split(Family::C, 2)
            }
            ModelKind::Su3Pair => PresetName::Su3,
        }
    }

    pub fn relative(&self) -> RelativeDatum {
        RelativeDatum::preset(&self.preset()).expect("model presets are supported")
    }

    /// Weights (ambient characters) of the standard basis vectors.
    pub fn standard_weights(&self) -> Vec<Vec<Q>> {
        match self.preset() {
            PresetName::Split(Family::C, 2) => {
                vec![
                    vec![qi(1), qi(0)],
                    vec![qi(0), qi(1)],
                    vec![qi(0), qi(-1)],
                    vec![qi(-1), qi(0)],
                ]
            }
            _ => {
                let n = self.group_size();
                (0..n).map(|i| linalg::unit(n, i)).collect()
            }
        }
    }
}

/// `xᵀΩy = x₁y₄ + x₂y₃ − x₃y₂ − x₄y₁`
pub fn symplectic_form() -> PMat {
    matrix::from_ints(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[-1, 0, 0, 0]])
}

/// `h(x, y) = x₁τ(y₃) + x₂τ(y₂) + x₃τ(y₁)`; the split torus is `diag(s, 1, s⁻¹)`.
pub fn unitary_form() -> PMat {
    matrix::from_ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
}

fn bilinear(m: &PMat, x: &[P], y: &[P]) -> P {
    x.iter().zip(m).fold(P::zero(), |acc, (xi, row)| {
        let ry = row.iter().zip(y).fold(
            P::zero(),
            |a, (c, yj)| if c.is_zero() { a } else { &a + &(c * yj) },
        );
        &acc + &(xi * &ry)
    })
}

pub fn unitary_pairing(x: &[P], y: &[P]) -> Result<P, ValError> {
    let ty: Vec<P> = y.iter().map(|c| c.tau_twist()).collect::<Result<_, _>>()?;
    Ok(bilinear(&unitary_form(), x, &ty))
}

/// k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn plucker_of(rows: &PMat, n: usize) -> Vec<P> {
    let k = rows.len();
    let all: Vec<usize> = (0..k).collect();
    subsets(n, k)
        .iter()
        .map(|cols| matrix::sub_det(rows, &all, cols))
        .collect()
}

/// Sign of sorting `idx` and the sorted tuple; `None` on a repeated index.
fn sort_sign(idx: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut neg = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                neg = !neg;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((neg, v))
}

fn label(idx: &[usize]) -> String {
    format!(
        "p{}",
        idx.iter().map(|i| (i + 1).to_string()).collect::<String>()
    )
}

/// Checks every quadratic Plücker relation; reports the first violated one.
fn check_plucker(j: usize, n: usize, p: &[P]) -> Result<(), ModelError> {
    let index: BTreeMap<Vec<usize>, usize> = subsets(n, j)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let coord = |idx: &[usize]| -> Option<(bool, &P, Vec<usize>)> {
        let (neg, sorted) = sort_sign(idx)?;
        Some((neg, &p[index[&sorted]], sorted))
    };
    for small in subsets(n, j - 1) {
        for big in subsets(n, j + 1) {
            let mut value = P::zero();
            let mut terms = Vec::new();
            for (l, &b) in big.iter().enumerate() {
                let mut left = small.clone();
                left.push(b);
                let right: Vec<usize> = big
                    .iter()
                    .enumerate()
                    .filter(|(m, _)| *m != l)
                    .map(|(_, &x)| x)
                    .collect();
                let Some((neg_l, pl, sl)) = coord(&left) else {
                    continue;
                };
                let (_, pr, sr) = coord(&right).expect("distinct indices");
                let negative = neg_l ^ (l % 2 == 1);
                let term = pl * pr;
                value = if negative {
                    &value - &term
                } else {
                    &value + &term
                };
                terms.push(format!(
                    "{} {}{}",
                    if negative { "-" } else { "+" },
                    label(&sl),
                    label(&sr)
                ));
            }
            if !value.is_zero() {
                let mut relation = terms.join(" ");
                if let Some(rest) = relation.strip_prefix("+ ") {
                    relation = rest.to_string();
                }
                return Err(ModelError::Relation {
                    relation,
                    value: value.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Λ²₀ coordinates `(p12, p13, p14, p24, p34)` of an isotropic plane; `p23 = −p14`.
pub const LAGRANGIAN_LABELS: [[usize; 2]; 5] = [[0, 1], [0, 2], [0, 3], [1, 3], [2, 3]];

fn lagrangian_from_plucker(p6: &[P]) -> Vec<P> {
    // plucker order: 12 13 14 23 24 34
    vec![
        p6[0].clone(),
        p6[1].clone(),
        p6[2].clone(),
        p6[4].clone(),
        p6[5].clone(),
    ]
}

fn plucker_from_lagrangian(p5: &[P]) -> Vec<P> {
    vec![
        p5[0].clone(),
        p5[1].clone(),
        p5[2].clone(),
        -p5[2].clone(),
        p5[3].clone(),
        p5[4].clone(),
    ]
}

/// `p12·p34 − p13·p24 − p14²`, the quadric cut out by Lagrangian planes.
pub fn lagrangian_quadric(p5: &[P]) -> P {
    &(&(&p5[0] * &p5[4]) - &(&p5[1] * &p5[3])) - &(&p5[2] * &p5[2])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelPoint {
    Proj { coords: Vec<P> },
    Grass { j: usize, n: usize, plucker: Vec<P> },
    Flag { rows: PMat },
    Sp4Flag { rows: PMat },
    Sp4Line { coords: Vec<P> },
    Sp4Lagrangian { coords: Vec<P> },
    Su3Pair { x: Vec<P>, y: Vec<P> },
}

/// Raw input accepted by [`make_point`].
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawPoint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<P>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<PMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plucker: Option<Vec<P>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<P>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<P>>,
}

fn shape<T>(v: &[T], expected: usize) -> Result<(), ModelError> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(ModelError::Shape {
            got: v.len(),
            expected,
        })
    }
}

fn nonzero(v: &[P]) -> Result<(), ModelError> {
    if v.iter().all(|c| c.is_zero()) {
        Err(ModelError::ZeroVector)
    } else {
        Ok(())
    }
}

fn rows_independent(rows: &PMat, n: usize) -> Result<Vec<P>, ModelError> {
    for r in rows {
        shape(r, n)?;
    }
    let p = plucker_of(rows, n);
    if p.iter().all(|c| c.is_zero()) {
        return Err(ModelError::Dependent);
    }
    Ok(p)
}

fn missing(what: &str) -> ModelError {
    ModelError::Unsupported(format!("raw point needs `{what}`"))
}

pub fn make_point(kind: ModelKind, raw: RawPoint) -> Result<ModelPoint, ModelError> {
    kind.validate()?;
    let n = kind.group_size();
    match kind {
        ModelKind::Proj(_) | ModelKind::Sp4Line => {
            let c = raw.coords.ok_or_else(|| missing("coords"))?;
            shape(&c, n)?;
            nonzero(&c)?;
            Ok(if kind == ModelKind::Sp4Line {
                ModelPoint::Sp4Line { coords: c }
            } else {
                ModelPoint::Proj { coords: c }
            })
        }
        ModelKind::Grass(j, _) => {
            let plucker = match (raw.rows, raw.plucker) {
                (Some(rows), _) => {
                    shape(&rows, j)?;
                    rows_independent(&rows, n)?
                }
                (None, Some(p)) => {
                    shape(&p, subsets(n, j).len())?;
                    nonzero(&p)?;
                    p
                }
                _ => return Err(missing("rows or plucker")),
            };
            check_plucker(j, n, &plucker)?;
            Ok(ModelPoint::Grass { j, n, plucker })
        }
        ModelKind::Flag(_) => {
            let rows = raw.rows.ok_or_else(|| missing("rows"))?;
            shape(&rows, n - 1)?;
            rows_independent(&rows, n)?;
            Ok(ModelPoint::Flag { rows })
        }
        ModelKind::Sp4Flag => {
            let rows = raw.rows.ok_or_else(|| missing("rows"))?;
            shape(&rows, 2)?;
            rows_independent(&rows, 4)?;
            let w = bilinear(&symplectic_form(), &rows[0], &rows[1]);
            if !w.is_zero() {
                return Err(ModelError::Relation {
                    relation: "ω(v1, v2)".into(),
                    value: w.to_string(),
                });
            }
            Ok(ModelPoint::Sp4Flag { rows })
        }
        ModelKind::Sp4Lagrangian => {
            let c = raw.coords.ok_or_else(|| missing("coords"))?;
            shape(&c, 5)?;
            nonzero(&c)?;
            let qv = lagrangian_quadric(&c);
            if !qv.is_zero() {
                return Err(ModelError::Relation {
                    relation: "p12p34 - p13p24 - p14^2".into(),
                    value: qv.to_string(),
                });
            }
            Ok(ModelPoint::Sp4Lagrangian { coords: c })
        }
        ModelKind::Su3Pair => {
            let (x, y) = (
                raw.x.ok_or_else(|| missing("x"))?,
                raw.y.ok_or_else(|| missing("y"))?,
            );
            shape(&x, 3)?;
            shape(&y, 3)?;
            nonzero(&x)?;
            nonzero(&y)?;
            let f = unitary_pairing(&x, &y)?;
            if !f.is_zero() {
                return Err(ModelError::Relation {
                    relation: "x1τ(y3) + x2τ(y2) + x3τ(y1)".into(),
                    value: f.to_string(),
                });
            }
            Ok(ModelPoint::Su3Pair { x, y })
        }
    }
}

/// One fundamental-representation factor of a point: coordinates by weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    /// 1-based index of the fundamental weight.
    pub omega: usize,
    pub coords: Vec<(Vec<Q>, P)>,
}

impl ModelPoint {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelPoint::Proj { coords } => ModelKind::Proj(coords.len()),
            ModelPoint::Grass { j, n, .. } => ModelKind::Grass(*j, *n),
            ModelPoint::Flag { rows } => ModelKind::Flag(rows.len() + 1),
            ModelPoint::Sp4Flag { .. } => ModelKind::Sp4Flag,
            ModelPoint::Sp4Line { .. } => ModelKind::Sp4Line,
            ModelPoint::Sp4Lagrangian { .. } => ModelKind::Sp4Lagrangian,
            ModelPoint::Su3Pair { .. } => ModelKind::Su3Pair,
        }
    }

    /// The point's fundamental factors. For an SU₃ pair these are the two
    /// ℙ² views `x` and `y`, both labelled by ω₁.
    pub fn factors(&self) -> Vec<Factor> {
        let kind = self.kind();
        let sw = kind.standard_weights();
        let rel = kind.relative();
        let wedge = |idx: &[usize]| -> Vec<Q> {
            rel.absolute.project(
                &idx.iter()
                    .fold(linalg::zeros(sw[0].len()), |a, &i| linalg::add(&a, &sw[i])),
            )
        };
        let vector = |omega: usize, c: &[P]| Factor {
            omega,
            coords: c
                .iter()
                .enumerate()
                .map(|(i, x)| (wedge(&[i]), x.clone()))
                .collect(),
        };
        let exterior = |omega: usize, rows: &PMat, n: usize| Factor {
            omega,
            coords: subsets(n, rows.len())
                .iter()
                .zip(plucker_of(rows, n))
                .map(|(s, p)| (wedge(s), p))
                .collect(),
        };
        let lagrangian = |c: &[P]| Factor {
            omega: 2,
            coords: LAGRANGIAN_LABELS
                .iter()
                .zip(c)
                .map(|(s, p)| (wedge(s), p.clone()))
                .collect(),
        };
        match self {
            ModelPoint::Proj { coords } | ModelPoint::Sp4Line { coords } => vec![vector(1, coords)],
            ModelPoint::Grass { j, n, plucker } => vec![Factor {
                omega: *j,
                coords: subsets(*n, *j)
                    .iter()
                    .zip(plucker)
                    .map(|(s, p)| (wedge(s), p.clone()))
                    .collect(),
            }],
            ModelPoint::Flag { rows } => {
                let n = rows.len() + 1;
                (1..n)
                    .map(|k| exterior(k, &rows[..k].to_vec(), n))
                    .collect()
            }
            ModelPoint::Sp4Flag { rows } => {
                vec![
                    vector(1, &rows[0]),
                    lagrangian(&lagrangian_from_plucker(&plucker_of(rows, 4))),
                ]
            }
            ModelPoint::Sp4Lagrangian { coords } => vec![lagrangian(coords)],
            ModelPoint::Su3Pair { x, y } => vec![vector(1, x), vector(1, y)],
        }
    }

    /// Coordinates of one factor as a normalized weighted point (`factor` is 0-based).
    pub fn weighted_coordinates(&self, factor: usize) -> Result<WeightedPoint, ModelError> {
        Ok(self.weighted_coordinates_unscaled(factor)?.canonical())
    }

    /// As [`Self::weighted_coordinates`], keeping the representative's scale.
    pub fn weighted_coordinates_unscaled(
        &self,
        factor: usize,
    ) -> Result<WeightedPoint, ModelError> {
        let f = self
            .factors()
            .into_iter()
            .nth(factor)
            .ok_or(ModelError::NoFactor(factor))?;
        let entries = f
            .coords
            .into_iter()
            .map(|(weight, coord)| WeightedEntry {
                weight,
                index: 0,
                coord,
            })
            .collect();
        Ok(WeightedPoint::new(entries)?)
    }

    /// Extremal-weight coordinates for `λ = Σ n_j ω_j` (full coefficient
    /// vector): `x_{wλ} = Π_j p_{wω_j}^{n_j}`, after scaling λ to integral
    /// coefficients. The minimum of every shifted valuation is attained at
    /// extremal weights, so this suffices for all stability and interval data.
    pub fn weighted_for(&self, coeffs: &[Q]) -> Result<WeightedPoint, ModelError> {
        Ok(self.weighted_for_unscaled(coeffs)?.canonical())
    }

    /// As [`Self::weighted_for`], keeping the representative's scale.
    pub fn weighted_for_unscaled(&self, coeffs: &[Q]) -> Result<WeightedPoint, ModelError> {
        let kind = self.kind();
        if kind == ModelKind::Su3Pair {
            return Err(ModelError::Unsupported(
                "use the per-factor views of an SU3 pair".into(),
            ));
        }
        let rel = kind.relative();
        let abs: &RootDatum = &rel.absolute;
        shape(coeffs, abs.rank)?;
        if coeffs.iter().any(|c| c.is_negative()) || coeffs.iter().all(|c| c.is_zero()) {
            return Err(ModelError::Unsupported(
                "coefficients must be nonnegative and not all zero".into(),
            ));
        }
        let denom = coeffs
            .iter()
            .fold(num_bigint::BigInt::from(1), |a, c| a.lcm(c.denom()));
        let ints: Vec<u32> = coeffs
            .iter()
            .map(|c| {
                (c * Q::from_integer(denom.clone()))
                    .to_integer()
                    .to_u32()
                    .unwrap()
            })
            .collect();
        let factors = self.factors();
        let used: Vec<(usize, u32)> = (0..abs.rank)
            .filter(|&j| ints[j] > 0)
            .map(|j| (j, ints[j]))
            .collect();
        let lookup: Vec<Option<&Factor>> = used
            .iter()
            .map(|(j, _)| factors.iter().find(|f| f.omega == j + 1))
            .collect();
        if let Some(pos) = lookup.iter().position(|f| f.is_none()) {
            return Err(ModelError::NoFactor(used[pos].0 + 1));
        }
        // orbit of the tuple (ω_j)_{j used} under simultaneous reflections
        let start: Vec<Vec<Q>> = used
            .iter()
            .map(|(j, _)| abs.fundamental_weights[*j].clone())
            .collect();
        let mut seen: BTreeSet<Vec<Vec<Q>>> = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for a in &abs.simple_roots {
                let img: Vec<Vec<Q>> = t.iter().map(|w| crate::rootdata::reflect(a, w)).collect();
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        let mut entries = Vec::new();
        for t in seen {
            let mut weight = linalg::zeros(abs.ambient_dim);
            let mut coord = P::one();
            for ((w, (_, nj)), f) in t.iter().zip(&used).zip(&lookup) {
                weight = linalg::axpy(&weight, &qi(*nj as i64), w);
                let c = f
                    .unwrap()
                    .coords
                    .iter()
                    .find(|(fw, _)| fw == w)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(P::zero);
                coord = &coord * &c.pow(*nj);
            }
            entries.push(WeightedEntry {
                weight,
                index: 0,
                coord,
            });
        }
        Ok(WeightedPoint::new(entries)?)
    }

    /// The factor of an Sp₄ flag indexed by `j ∈ {1, 2}`.
    pub fn project(&self, j: usize) -> Result<ModelPoint, ModelError> {
        let ModelPoint::Sp4Flag { rows } = self else {
            return Err(ModelError::Unsupported(
                "projection is defined for sp4 flags".into(),
            ));
        };
        match j {
            1 => Ok(ModelPoint::Sp4Line {
                coords: rows[0].clone(),
            }),
            2 => Ok(ModelPoint::Sp4Lagrangian {
                coords: lagrangian_from_plucker(&plucker_of(rows, 4)),
            }),
            _ => Err(ModelError::NoFactor(j)),
        }
    }
}

/// Checks that `g` lies in the model group.
pub fn check_group(kind: ModelKind, g: &PMat) -> Result<(), ModelError> {
    let n = kind.group_size();
    shape(g, n)?;
    for r in g {
        shape(r, n)?;
    }
    let not_in = |m: &str| Err(ModelError::NotInGroup(m.into()));
    match kind.preset() {
        PresetName::Split(Family::C, 2) => {
            let om = symplectic_form();
            if matrix::mul(&matrix::mul(&matrix::transpose(g), &om), g) != om {
                return not_in("gᵀΩg ≠ Ω");
            }
        }
        PresetName::Su3 => {
            if matrix::det(g) != P::one() {
                return not_in("det ≠ 1");
            }
            let h = unitary_form();
            if matrix::mul(&matrix::mul(&matrix::transpose(g), &h), &matrix::tau(g)?) != h {
                return not_in("gᵀHτ(g) ≠ H");
            }
        }
        _ => {
            if matrix::det(g) != P::one() {
                return not_in("det ≠ 1");
            }
        }
    }
    Ok(())
}

/// `p'_I = Σ_J det(g_{I,J}) p_J`
fn exterior_act(g: &PMat, n: usize, k: usize, p: &[P]) -> Vec<P> {
    let subs = subsets(n, k);
    subs.iter()
        .map(|i| {
            subs.iter().zip(p).fold(P::zero(), |acc, (j, pj)| {
                if pj.is_zero() {
                    acc
                } else {
                    &acc + &(&matrix::sub_det(g, i, j) * pj)
                }
            })
        })
        .collect()
}

fn act_rows(g: &PMat, rows: &PMat) -> PMat {
    rows.iter().map(|r| matrix::apply(g, r)).collect()
}

/// `g · p`. For an SU₃ pair both entries move by `g`, which is the action
/// `(g, τ(g))` on `(x, τ(y))`.
pub fn act(g: &PMat, p: &ModelPoint) -> Result<ModelPoint, ModelError> {
    check_group(p.kind(), g)?;
    Ok(match p {
        ModelPoint::Proj { coords } => ModelPoint::Proj {
            coords: matrix::apply(g, coords),
        },
        ModelPoint::Sp4Line { coords } => ModelPoint::Sp4Line {
            coords: matrix::apply(g, coords),
        },
        ModelPoint::Grass { j, n, plucker } => ModelPoint::Grass {
            j: *j,
            n: *n,
            plucker: exterior_act(g, *n, *j, plucker),
        },
        ModelPoint::Flag { rows } => ModelPoint::Flag {
            rows: act_rows(g, rows),
        },
        ModelPoint::Sp4Flag { rows } => ModelPoint::Sp4Flag {
            rows: act_rows(g, rows),
        },
        ModelPoint::Sp4Lagrangian { coords } => ModelPoint::Sp4Lagrangian {
            coords: lagrangian_from_plucker(&exterior_act(
                g,
                4,
                2,
                &plucker_from_lagrangian(coords),
            )),
        },
        ModelPoint::Su3Pair { x, y } => ModelPoint::Su3Pair {
            x: matrix::apply(g, x),
            y: matrix::apply(g, y),
        },
    })
}

/// Whether `lim ε(s) g ε(s)⁻¹` exists as `s → 0`: every nonzero entry
/// `g_ij` needs `⟨w_i − w_j, ε⟩ ≥ 0` for the basis weights `w`.
pub fn p_epsilon_member(g: &PMat, eps: &[Q], kind: ModelKind) -> bool {
    let rel = kind.relative();
    let amb = rel.include(eps);
    let w: Vec<Q> = kind
        .standard_weights()
        .iter()
        .map(|wi| linalg::dot(wi, &amb))
        .collect();
    g.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, gij)| gij.is_zero() || !(&w[i] - &w[j]).is_negative())
    })
}

/// The torus element with ambient exponent vector `a` (relative coordinates
/// `z` map to `a = ι z`): `diag(t^{⟨w_i, a⟩})`.
pub fn torus_element(kind: ModelKind, a: &[Q]) -> PMat {
    let w = kind.standard_weights();
    let n = w.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        P::t_pow(linalg::dot(&w[i], a))
                    } else {
                        P::zero()
                    }
                })
                .collect()
        })
        .collect()
}

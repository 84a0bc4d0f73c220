//! Root systems of classical type, their Weyl groups and fundamental weights,
//! and relative root data given by a restriction to a split subtorus.
//!
//! Ambient conventions: type A_ℓ lives in the sum-zero hyperplane of ℚ^{ℓ+1},
//! types B, C, D in ℚ^ℓ. The inner product is the ambient dot product, and
//! characters and cocharacters share the ambient space through it.

use crate::linalg::{self, Mat};
use crate::rational::{primitive_unsigned, q, qi, serde_qmat, serde_qvec, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("unsupported root system {0}{1}")]
    Unsupported(Family, usize),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unsupported relative preset `{0}`")]
    UnsupportedPreset(String),
    #[error("index {0} is outside 1..={1}")]
    BadIndex(usize, usize),
    #[error("{0} coefficients supplied for {1} indices")]
    CoefficientCount(usize, usize),
    #[error("negative coefficient for ω_{0}")]
    NegativeCoefficient(usize),
    #[error("all coefficients are zero")]
    AllZero,
    #[error("vector has length {got}, expected {expected}")]
    Dimension { got: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, RootError> {
        match s {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            _ => Err(RootError::UnknownFamily(s.to_string())),
        }
    }
}

pub fn reflect(alpha: &[Q], v: &[Q]) -> Vec<Q> {
    let c = qi(2) * linalg::dot(v, alpha) / linalg::dot(alpha, alpha);
    linalg::axpy(v, &-c, alpha)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootDatum {
    pub family: Family,
    pub rank: usize,
    pub ambient_dim: usize,
    #[serde(with = "serde_qmat")]
    pub simple_roots: Vec<Vec<Q>>,
    #[serde(with = "serde_qmat")]
    pub roots: Vec<Vec<Q>>,
    #[serde(with = "serde_qmat")]
    pub fundamental_weights: Vec<Vec<Q>>,
}

impl RootDatum {
    pub fn build(family: Family, rank: usize) -> Result<Self, RootError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
        };
        if !ok || rank > 8 {
            return Err(RootError::Unsupported(family, rank));
        }
        let n = if family == Family::A { rank + 1 } else { rank };
        let e = |i: usize| linalg::unit(n, i);
        let mut simple: Vec<Vec<Q>> = (0..rank.min(n - 1))
            .map(|i| linalg::sub(&e(i), &e(i + 1)))
            .collect();
        match family {
            Family::A => {}
            Family::B => simple.push(e(rank - 1)),
            Family::C => simple.push(linalg::scale(&qi(2), &e(rank - 1))),
            Family::D => {
                simple.push(linalg::add(&e(rank - 2), &e(rank - 1)));
            }
        }
        let roots = closure(&simple, &simple);
        let cartan: Mat = simple
            .iter()
            .map(|a| simple.iter().map(|b| coroot_pairing(a, b)).collect())
            .collect();
        let inv = linalg::inverse(&cartan).expect("Cartan matrix is invertible");
        let fundamental_weights = inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&simple)
                    .fold(linalg::zeros(n), |acc, (c, a)| linalg::axpy(&acc, c, a))
            })
            .collect();
        Ok(Self {
            family,
            rank,
            ambient_dim: n,
            simple_roots: simple,
            roots,
            fundamental_weights,
        })
    }

    pub fn inner(&self, a: &[Q], b: &[Q]) -> Q {
        linalg::dot(a, b)
    }

    /// Orthogonal projection to the span of the roots (sum-zero part for type A).
    pub fn project(&self, v: &[Q]) -> Vec<Q> {
        if self.family != Family::A {
            return v.to_vec();
        }
        let mean = v.iter().fold(Q::zero(), |a, x| a + x) / qi(v.len() as i64);
        v.iter().map(|x| x - &mean).collect()
    }

    pub fn check_dim(&self, v: &[Q]) -> Result<(), RootError> {
        if v.len() == self.ambient_dim {
            Ok(())
        } else {
            Err(RootError::Dimension {
                got: v.len(),
                expected: self.ambient_dim,
            })
        }
    }

    pub fn positive_roots(&self) -> Vec<Vec<Q>> {
        let rho = self.rho();
        self.roots
            .iter()
            .filter(|a| linalg::dot(a, &rho).is_positive())
            .cloned()
            .collect()
    }

    pub fn rho(&self) -> Vec<Q> {
        self.fundamental_weights
            .iter()
            .fold(linalg::zeros(self.ambient_dim), |a, w| linalg::add(&a, w))
    }

    pub fn weyl_orbit(&self, lambda: &[Q]) -> Vec<Vec<Q>> {
        closure(&self.simple_roots, &[self.project(lambda)])
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl_orbit(&self.rho()).len()
    }

    /// `n_j = (λ, α_j^∨)`
    pub fn weight_coordinates(&self, lambda: &[Q]) -> Vec<Q> {
        self.simple_roots
            .iter()
            .map(|a| coroot_pairing(lambda, a))
            .collect()
    }

    /// `λ = Σ_{j∈J} n_j ω_j` with 1-based indices.
    pub fn dominant_weight(&self, j: &[usize], coeffs: &[Q]) -> Result<DominantWeight, RootError> {
        if j.len() != coeffs.len() {
            return Err(RootError::CoefficientCount(coeffs.len(), j.len()));
        }
        let mut full = vec![Q::zero(); self.rank];
        for (&idx, c) in j.iter().zip(coeffs) {
            if idx == 0 || idx > self.rank {
                return Err(RootError::BadIndex(idx, self.rank));
            }
            if c.is_negative() {
                return Err(RootError::NegativeCoefficient(idx));
            }
            full[idx - 1] = c.clone();
        }
        if full.iter().all(|c| c.is_zero()) {
            return Err(RootError::AllZero);
        }
        let weight = full
            .iter()
            .zip(&self.fundamental_weights)
            .fold(linalg::zeros(self.ambient_dim), |acc, (c, w)| {
                linalg::axpy(&acc, c, w)
            });
        let ample = j.iter().all(|&i| !full[i - 1].is_zero());
        let support: Vec<usize> = (1..=self.rank)
            .filter(|&i| !full[i - 1].is_zero())
            .collect();
        Ok(DominantWeight {
            weight,
            coeffs: full,
            ample,
            support,
        })
    }
}

fn coroot_pairing(v: &[Q], alpha: &[Q]) -> Q {
    qi(2) * linalg::dot(v, alpha) / linalg::dot(alpha, alpha)
}

/// Closure of `seeds` under reflections in `generators`.
fn closure(generators: &[Vec<Q>], seeds: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut seen: BTreeSet<Vec<Q>> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<Vec<Q>> = seeds.iter().cloned().collect();
    while let Some(v) = queue.pop_front() {
        for a in generators {
            let w = reflect(a, &v);
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominantWeight {
    #[serde(with = "serde_qvec")]
    pub weight: Vec<Q>,
    /// Coefficients on all ω_1..ω_ℓ.
    #[serde(with = "serde_qvec")]
    pub coeffs: Vec<Q>,
    /// True when every index of J has a positive coefficient (λ ∈ C(X)).
    pub ample: bool,
    pub support: Vec<usize>,
}

/// The discrete group of affine-root constants attached to a relative root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gamma {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "1/2Z")]
    HalfIntegers,
}

impl Gamma {
    pub fn contains(&self, n: &Q) -> bool {
        match self {
            Gamma::Integers => n.is_integer(),
            Gamma::HalfIntegers => (n * qi(2)).is_integer(),
        }
    }

    pub fn step(&self) -> Q {
        match self {
            Gamma::Integers => Q::one(),
            Gamma::HalfIntegers => q(1, 2),
        }
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gamma::Integers => "Z",
            Gamma::HalfIntegers => "1/2Z",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativeRoot {
    #[serde(with = "serde_qvec")]
    pub root: Vec<Q>,
    pub gamma: Gamma,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PresetName {
    Split(Family, usize),
    Su3,
    NonsplitC(usize),
    /// Inner form of type A: `SL_{s+1}` over a division algebra of degree `d`.
    InnerA {
        s: usize,
        d: usize,
    },
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetName::Split(fam, l) => write!(f, "split({fam},{l})"),
            PresetName::Su3 => write!(f, "su3"),
            PresetName::NonsplitC(l) => write!(f, "nonsplit_C({l})"),
            PresetName::InnerA { s, d } => write!(f, "inner_A({s},{d})"),
        }
    }
}

impl FromStr for PresetName {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, RootError> {
        let bad = || RootError::UnsupportedPreset(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "su3" {
            return Ok(PresetName::Su3);
        }
        let (head, rest) = t.split_once('(').ok_or_else(bad)?;
        let args: Vec<&str> = rest.strip_suffix(')').ok_or_else(bad)?.split(',').collect();
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        match (head, args.as_slice()) {
            ("split", [fam, l]) => Ok(PresetName::Split(fam.parse()?, num(l)?)),
            ("nonsplit_C", [l]) => Ok(PresetName::NonsplitC(num(l)?)),
            ("inner_A", [s, d]) => Ok(PresetName::InnerA {
                s: num(s)?,
                d: num(d)?,
            }),
            _ => Err(bad()),
        }
    }
}

/// A maximal split torus `S ⊂ T` described by an injective map of cocharacter
/// spaces `ι : ℚ^k → 𝒳_*(T)⊗ℚ`. Relative characters and cocharacters are
/// written in the coordinates dual to, resp. defined by, this map, so the
/// restriction of an absolute character is `r(β) = ιᵀβ` and the pairing is the
/// plain dot product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativeDatum {
    pub preset: String,
    pub absolute: RootDatum,
    /// Columns of ι, as ambient vectors.
    #[serde(with = "serde_qmat")]
    pub inclusion: Vec<Vec<Q>>,
    pub roots: Vec<RelativeRoot>,
    /// W_K-invariant metric on cocharacter coordinates, `½ ιᵀι`.
    #[serde(with = "serde_qmat")]
    pub gram: Mat,
    #[serde(with = "serde_qmat")]
    pub simple_roots: Vec<Vec<Q>>,
}

impl RelativeDatum {
    pub fn preset(name: &PresetName) -> Result<Self, RootError> {
        match *name {
            PresetName::Split(fam, l) => Ok(Self::split(RootDatum::build(fam, l)?)),
            PresetName::Su3 => {
                let abs = RootDatum::build(Family::A, 2)?;
                let iota = vec![vec![qi(1), qi(0), qi(-1)]];
                Ok(Self::assemble(name, abs, iota, |r| {
                    if r[0].abs().is_one() {
                        Gamma::HalfIntegers
                    } else {
                        Gamma::Integers
                    }
                }))
            }
            PresetName::NonsplitC(l) => {
                if l < 2 {
                    return Err(RootError::UnsupportedPreset(name.to_string()));
                }
                let abs = RootDatum::build(Family::C, l)?;
                let iota = (0..l / 2)
                    .map(|k| linalg::add(&linalg::unit(l, 2 * k), &linalg::unit(l, 2 * k + 1)))
                    .collect();
                Ok(Self::assemble(name, abs, iota, |_| Gamma::Integers))
            }
            PresetName::InnerA { s, d } => {
                if s < 1 || d < 1 {
                    return Err(RootError::UnsupportedPreset(name.to_string()));
                }
                let n = (s + 1) * d;
                let abs = RootDatum::build(Family::A, n - 1)?;
                let block = |b: usize| -> Vec<Q> {
                    (0..n)
                        .map(|i| if i / d == b { Q::one() } else { Q::zero() })
                        .collect()
                };
                let iota = (0..s).map(|b| linalg::sub(&block(b), &block(s))).collect();
                Ok(Self::assemble(name, abs, iota, |_| Gamma::Integers))
            }
        }
    }

    pub fn split(abs: RootDatum) -> Self {
        let n = abs.ambient_dim;
        let iota: Vec<Vec<Q>> = if abs.family == Family::A {
            (0..n - 1)
                .map(|i| linalg::sub(&linalg::unit(n, i), &linalg::unit(n, n - 1)))
                .collect()
        } else {
            (0..n).map(|i| linalg::unit(n, i)).collect()
        };
        let name = PresetName::Split(abs.family, abs.rank);
        Self::assemble(&name, abs, iota, |_| Gamma::Integers)
    }

    fn assemble(
        name: &PresetName,
        absolute: RootDatum,
        inclusion: Vec<Vec<Q>>,
        gamma: impl Fn(&[Q]) -> Gamma,
    ) -> Self {
        let restrict =
            |b: &[Q]| -> Vec<Q> { inclusion.iter().map(|c| linalg::dot(c, b)).collect() };
        let images: BTreeSet<Vec<Q>> = absolute
            .roots
            .iter()
            .map(|a| restrict(a))
            .filter(|r| !linalg::is_zero(r))
            .collect();
        let roots: Vec<RelativeRoot> = images
            .into_iter()
            .map(|r| RelativeRoot {
                gamma: gamma(&r),
                root: r,
            })
            .collect();
        let gram: Mat = inclusion
            .iter()
            .map(|a| {
                inclusion
                    .iter()
                    .map(|b| linalg::dot(a, b) * q(1, 2))
                    .collect()
            })
            .collect();
        let simple_roots = simple_system(&roots.iter().map(|r| r.root.clone()).collect::<Vec<_>>());
        Self {
            preset: name.to_string(),
            absolute,
            inclusion,
            roots,
            gram,
            simple_roots,
        }
    }

    pub fn rank(&self) -> usize {
        self.inclusion.len()
    }

    pub fn is_split(&self) -> bool {
        self.rank() == self.absolute.rank
    }

    /// `r(β)` in relative coordinates.
    pub fn restrict(&self, beta: &[Q]) -> Vec<Q> {
        self.inclusion
            .iter()
            .map(|c| linalg::dot(c, beta))
            .collect()
    }

    /// Relative cocharacter coordinates to the ambient cocharacter vector.
    pub fn include(&self, z: &[Q]) -> Vec<Q> {
        z.iter()
            .zip(&self.inclusion)
            .fold(linalg::zeros(self.absolute.ambient_dim), |acc, (c, col)| {
                linalg::axpy(&acc, c, col)
            })
    }

    /// Coordinates of an ambient cocharacter lying in the image of ι.
    pub fn coords_of(&self, ambient: &[Q]) -> Option<Vec<Q>> {
        let m = linalg::transpose(&self.inclusion);
        linalg::solve(&m, ambient)
    }

    /// The ambient character in the span of ι restricting to `chi`.
    pub fn ambient_character(&self, chi: &[Q]) -> Vec<Q> {
        let g2: Mat = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x * qi(2)).collect())
            .collect();
        let y = linalg::solve(&g2, chi).expect("ι is injective");
        self.include(&y)
    }

    pub fn relative_roots(&self) -> Vec<Vec<Q>> {
        self.roots.iter().map(|r| r.root.clone()).collect()
    }

    pub fn gamma(&self, root: &[Q]) -> Option<Gamma> {
        self.roots.iter().find(|r| r.root == root).map(|r| r.gamma)
    }

    pub fn norm2(&self, z: &[Q]) -> Q {
        linalg::dot(z, &linalg::mat_vec(&self.gram, z))
    }

    /// The coroot `a^∨` in cocharacter coordinates, `⟨a, a^∨⟩ = 2`.
    pub fn coroot(&self, a: &[Q]) -> Vec<Q> {
        let ginv_a = linalg::solve(&self.gram, a).expect("metric is nondegenerate");
        let c = qi(2) / linalg::dot(a, &ginv_a);
        linalg::scale(&c, &ginv_a)
    }

    pub fn reflect_cocharacter(&self, a: &[Q], z: &[Q]) -> Vec<Q> {
        linalg::axpy(z, &-linalg::dot(a, z), &self.coroot(a))
    }

    pub fn reflect_character(&self, a: &[Q], chi: &[Q]) -> Vec<Q> {
        linalg::axpy(chi, &-linalg::dot(chi, &self.coroot(a)), a)
    }

    pub fn relative_weyl_orbit_character(&self, chi: &[Q]) -> Vec<Vec<Q>> {
        let mut seen: BTreeSet<Vec<Q>> = BTreeSet::from([chi.to_vec()]);
        let mut queue = VecDeque::from([chi.to_vec()]);
        while let Some(v) = queue.pop_front() {
            for a in &self.simple_roots {
                let w = self.reflect_character(a, &v);
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Fundamental coweights: the dual basis to the simple relative roots.
    pub fn fundamental_coweights(&self) -> Vec<Vec<Q>> {
        let inv = linalg::inverse(&self.simple_roots).expect("simple roots form a basis");
        linalg::transpose(&inv)
    }

    /// The Weyl chambers, each given by its extreme rays in cocharacter coordinates.
    pub fn weyl_chambers(&self) -> Vec<Vec<Vec<Q>>> {
        let start = self.fundamental_coweights();
        let mut seen: BTreeSet<Vec<Vec<Q>>> = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(rays) = queue.pop_front() {
            for a in &self.simple_roots {
                let img: Vec<Vec<Q>> = rays
                    .iter()
                    .map(|z| self.reflect_cocharacter(a, z))
                    .collect();
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Simple roots of a (possibly non-reduced) root system given by all its roots.
fn simple_system(roots: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if roots.is_empty() {
        return Vec::new();
    }
    let k = roots[0].len();
    let mut h: Vec<Q> = (0..k).map(|i| qi(1_i64 << (3 * (k - i)))).collect();
    let mut bump = 1;
    while roots.iter().any(|r| linalg::dot(r, &h).is_zero()) {
        h[k - 1] += qi(bump);
        bump += 1;
    }
    let set: BTreeSet<Vec<Q>> = roots.iter().cloned().collect();
    let positive: Vec<Vec<Q>> = roots
        .iter()
        .filter(|r| linalg::dot(r, &h).is_positive())
        .cloned()
        .collect();
    let indivisible: Vec<Vec<Q>> = positive
        .iter()
        .filter(|r| !set.contains(&linalg::scale(&q(1, 2), r)))
        .cloned()
        .collect();
    let mut simple: Vec<Vec<Q>> = indivisible
        .iter()
        .filter(|a| {
            !positive.iter().any(|b| {
                let c = linalg::sub(a, b);
                set.contains(&c) && linalg::dot(&c, &h).is_positive()
            })
        })
        .cloned()
        .collect();
    simple.sort();
    simple
}

/// Normal directions of the hyperplanes through 0 spanned by subsets of `roots`.
pub fn spanned_hyperplanes(roots: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    let dirs: BTreeSet<Vec<Q>> = roots.iter().map(|r| primitive_unsigned(r)).collect();
    let dirs: Vec<Vec<Q>> = dirs.into_iter().collect();
    let mut normals: BTreeSet<Vec<Q>> = BTreeSet::new();
    if dim == 0 {
        return Vec::new();
    }
    if dim == 1 {
        return vec![vec![Q::one()]];
    }
    let mut stack: Vec<(usize, Vec<Vec<Q>>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if chosen.len() == dim - 1 {
            let ns = linalg::nullspace(&chosen, dim);
            if ns.len() == 1 {
                normals.insert(primitive_unsigned(&ns[0]));
            }
            continue;
        }
        for i in start..dirs.len() {
            let mut next = chosen.clone();
            next.push(dirs[i].clone());
            if linalg::rank(&next) == next.len() {
                stack.push((i + 1, next));
            }
        }
    }
    normals.into_iter().collect()
}

//! Finite Puiseux sums `Σ c_i t^{q_i}` with rational exponents and coefficients.
//!
//! This is the working valued field: `v(t) = 1`, the base field `K` is the
//! subring with integer exponents, and the residue field is ℚ.

use crate::rational::{fmt_q, parse_q, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValError {
    #[error("residue of an element with negative valuation {0}")]
    NegativeValuation(Q),
    #[error("exponent {0} is not in (1/2)Z")]
    NotHalfInteger(Q),
    #[error("division by zero")]
    ZeroDivisor,
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// Valuation in ℚ ∪ {+∞}; `Finite < Infinite`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Q),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Valuation::Finite(q) => Some(q),
            Valuation::Infinite => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, o: Valuation) -> Valuation {
        match (self, o) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => write!(f, "{q}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PuiseuxElement {
    terms: Vec<(Q, Q)>,
}

impl PuiseuxElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, Q::zero())
    }

    /// `c · t^e`
    pub fn monomial(c: Q, e: Q) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: vec![(e, c)],
            }
        }
    }

    pub fn t_pow(e: Q) -> Self {
        Self::monomial(Q::one(), e)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Q, Q)>>(terms: I) -> Self {
        let mut acc: BTreeMap<Q, Q> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_insert_with(Q::zero) += c;
        }
        Self {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e, c))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(Q, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => Valuation::Infinite,
        }
    }

    /// Leading `(exponent, coefficient)`.
    pub fn leading(&self) -> Option<&(Q, Q)> {
        self.terms.first()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// `self / (c · t^e)`
    pub fn monomial_div(&self, c: &Q, e: &Q) -> Result<Self, ValError> {
        if c.is_zero() {
            return Err(ValError::ZeroDivisor);
        }
        Ok(Self {
            terms: self.terms.iter().map(|(x, y)| (x - e, y / c)).collect(),
        })
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: &Q) -> Self {
        Self {
            terms: self.terms.iter().map(|(x, y)| (x + e, y.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(x, y)| (x.clone(), y * c)).collect(),
        }
    }

    /// Image in the residue field; requires valuation ≥ 0.
    pub fn residue(&self) -> Result<Q, ValError> {
        match self.terms.first() {
            None => Ok(Q::zero()),
            Some((e, _)) if e.is_negative() => Err(ValError::NegativeValuation(e.clone())),
            Some((e, c)) if e.is_zero() => Ok(c.clone()),
            Some(_) => Ok(Q::zero()),
        }
    }

    /// The order-two automorphism `t^{1/2} ↦ −t^{1/2}`.
    pub fn tau_twist(&self) -> Result<Self, ValError> {
        let two = Q::from_integer(2.into());
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let d = e * &two;
            if !d.is_integer() {
                return Err(ValError::NotHalfInteger(e.clone()));
            }
            let odd = d.to_integer() % 2 != 0.into();
            out.push((e.clone(), if odd { -c.clone() } else { c.clone() }));
        }
        Ok(Self { terms: out })
    }

    /// Membership in the base field `K` (integer exponents only).
    pub fn is_k_rational(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_integer())
    }

    /// Keeps the terms with exponent strictly below `bound`.
    pub fn truncate_below(&self, bound: &Q) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e < bound)
                .cloned()
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The terms of `1/self` with exponent below `precision`.
    pub fn inverse_truncated(&self, precision: &Q) -> Result<Self, ValError> {
        let (e0, c0) = self.terms.first().cloned().ok_or(ValError::ZeroDivisor)?;
        // self = c0 t^e0 (1 + δ), v(δ) > 0
        let delta = &self.monomial_div(&c0, &e0)? - &Self::one();
        let rel = precision + &e0;
        let minus_delta = -&delta;
        let mut acc = Self::one().truncate_below(&rel);
        if let Some((step, _)) = delta.leading().cloned() {
            let mut power = Self::one();
            let mut reach = Q::zero();
            loop {
                reach += &step;
                if reach >= rel {
                    break;
                }
                power = (&power * &minus_delta).truncate_below(&rel);
                acc = &acc + &power;
            }
        }
        acc.monomial_div(&c0, &e0)
            .map(|x| x.truncate_below(precision))
    }

    /// Parses on a common exponent lattice: returns `(N, X_k)` with
    /// `self = Σ_k t^{k/N} X_k`, `X_k ∈ K`.
    fn lattice_components(&self, n: &num_bigint::BigInt) -> BTreeMap<num_bigint::BigInt, Self> {
        use num_integer::Integer;
        let nq = Q::from_integer(n.clone());
        let mut comps: BTreeMap<num_bigint::BigInt, Vec<(Q, Q)>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let scaled = (e * &nq).to_integer();
            let k = scaled.mod_floor(n);
            let shift = Q::new(k.clone(), n.clone());
            comps.entry(k).or_default().push((e - shift, c.clone()));
        }
        comps
            .into_iter()
            .map(|(k, ts)| (k, Self::from_terms(ts)))
            .collect()
    }

    fn exponent_denominator_lcm(&self) -> num_bigint::BigInt {
        use num_integer::Integer;
        self.terms
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, (e, _)| acc.lcm(e.denom()))
    }
}

/// Whether the ratio `b / a` lies in `K`, for `a ≠ 0`, decided without division:
/// over the lattice `t^{k/N}` the components of `a` and `b` must be `K`-proportional.
pub fn ratio_is_k_rational(a: &PuiseuxElement, b: &PuiseuxElement) -> bool {
    use num_integer::Integer;
    let n = a
        .exponent_denominator_lcm()
        .lcm(&b.exponent_denominator_lcm());
    let ca = a.lattice_components(&n);
    let cb = b.lattice_components(&n);
    let keys: std::collections::BTreeSet<_> = ca.keys().chain(cb.keys()).cloned().collect();
    let z = PuiseuxElement::zero();
    for i in &keys {
        for j in &keys {
            let lhs = cb.get(i).unwrap_or(&z) * ca.get(j).unwrap_or(&z);
            let rhs = cb.get(j).unwrap_or(&z) * ca.get(i).unwrap_or(&z);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

impl Add for &PuiseuxElement {
    type Output = PuiseuxElement;
    fn add(self, o: &PuiseuxElement) -> PuiseuxElement {
        let (a, b) = (&self.terms, &o.terms);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                let c = &a[i].1 + &b[j].1;
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
        PuiseuxElement { terms: out }
    }
}

impl Neg for &PuiseuxElement {
    type Output = PuiseuxElement;
    fn neg(self) -> PuiseuxElement {
        PuiseuxElement {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &PuiseuxElement {
    type Output = PuiseuxElement;
    fn sub(self, o: &PuiseuxElement) -> PuiseuxElement {
        self + &(-o)
    }
}

impl Mul for &PuiseuxElement {
    type Output = PuiseuxElement;
    fn mul(self, o: &PuiseuxElement) -> PuiseuxElement {
        PuiseuxElement::from_terms(
            self.terms
                .iter()
                .flat_map(|(e1, c1)| o.terms.iter().map(move |(e2, c2)| (e1 + e2, c1 * c2))),
        )
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for PuiseuxElement {
            type Output = PuiseuxElement;
            fn $m(self, o: PuiseuxElement) -> PuiseuxElement { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for PuiseuxElement {
    type Output = PuiseuxElement;
    fn neg(self) -> PuiseuxElement {
        -&self
    }
}

impl From<i64> for PuiseuxElement {
    fn from(n: i64) -> Self {
        Self::constant(crate::rational::qi(n))
    }
}

impl fmt::Display for PuiseuxElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if e.is_one() {
                write!(f, "t")?;
            } else if e.is_integer() && e.is_positive() {
                write!(f, "t^{e}")?;
            } else {
                write!(f, "t^({e})")?;
            }
        }
        Ok(())
    }
}

/// Accepts sums like `1 + t^(1/2) - 3/2*t^2`, `t^{-1}`, `2t`.
impl FromStr for PuiseuxElement {
    type Err = ValError;

    fn from_str(s: &str) -> Result<Self, ValError> {
        Parser {
            src: s,
            chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
        .expr()
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn fail(&self, reason: &str) -> ValError {
        ValError::Parse {
            input: self.src.to_string(),
            reason: format!("{reason} at offset {}", self.pos),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PuiseuxElement, ValError> {
        let mut terms = Vec::new();
        let mut sign = Q::one();
        if self.eat('-') {
            sign = -sign;
        } else {
            self.eat('+');
        }
        loop {
            let (e, c) = self.term()?;
            terms.push((e, c * &sign));
            if self.eat('+') {
                sign = Q::one();
            } else if self.eat('-') {
                sign = -Q::one();
            } else {
                break;
            }
        }
        if self.pos != self.chars.len() {
            return Err(self.fail("unexpected character"));
        }
        Ok(PuiseuxElement::from_terms(terms))
    }

    fn number(&mut self) -> Option<String> {
        let start = self.pos;
        if matches!(self.peek(), Some('-'))
            && self
                .chars
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos > start
            && self.peek() == Some('/')
            && self
                .chars
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn rational(&mut self) -> Result<Q, ValError> {
        let close = if self.eat('(') {
            Some(')')
        } else if self.eat('{') {
            Some('}')
        } else {
            None
        };
        let lit = self
            .number()
            .ok_or_else(|| self.fail("expected a number"))?;
        if let Some(c) = close {
            if !self.eat(c) {
                return Err(self.fail("unbalanced bracket"));
            }
        }
        parse_q(&lit).map_err(|_| self.fail("bad rational"))
    }

    fn term(&mut self) -> Result<(Q, Q), ValError> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit() || c == '(') {
            Some(self.rational()?)
        } else {
            None
        };
        self.eat('*');
        if self.eat('t') {
            let e = if self.eat('^') {
                self.rational()?
            } else {
                Q::one()
            };
            Ok((e, coeff.unwrap_or_else(Q::one)))
        } else {
            coeff
                .map(|c| (Q::zero(), c))
                .ok_or_else(|| self.fail("expected a term"))
        }
    }
}

impl Serialize for PuiseuxElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(e, c)| [fmt_q(e), fmt_q(c)]))
    }
}

/// Accepts the canonical pair list, an integer, or a string expression.
impl<'de> Deserialize<'de> for PuiseuxElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Int(i64),
            Expr(String),
            Pairs(Vec<(String, String)>),
        }
        use serde::de::Error;
        match Wire::deserialize(d)? {
            Wire::Int(n) => Ok(PuiseuxElement::from(n)),
            Wire::Expr(s) => s.parse().map_err(D::Error::custom),
            Wire::Pairs(ps) => {
                let mut terms = Vec::with_capacity(ps.len());
                for (e, c) in ps {
                    terms.push((
                        parse_q(&e).map_err(D::Error::custom)?,
                        parse_q(&c).map_err(D::Error::custom)?,
                    ));
                }
                Ok(PuiseuxElement::from_terms(terms))
            }
        }
    }
}

/// Square matrices over the field.
pub mod matrix {
    use super::PuiseuxElement as P;

    pub type PMat = Vec<Vec<P>>;

    pub fn identity(n: usize) -> PMat {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { P::one() } else { P::zero() })
                    .collect()
            })
            .collect()
    }

    pub fn from_ints(rows: &[&[i64]]) -> PMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| P::from(x)).collect())
            .collect()
    }

    pub fn mul(a: &PMat, b: &PMat) -> PMat {
        let n = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| {
                        row.iter()
                            .zip(b)
                            .fold(P::zero(), |acc, (x, brow)| &acc + &(x * &brow[j]))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn apply(a: &PMat, v: &[P]) -> Vec<P> {
        a.iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(P::zero(), |acc, (x, y)| &acc + &(x * y))
            })
            .collect()
    }

    pub fn transpose(a: &PMat) -> PMat {
        if a.is_empty() {
            return Vec::new();
        }
        (0..a[0].len())
            .map(|j| a.iter().map(|r| r[j].clone()).collect())
            .collect()
    }

    fn minor_matrix(a: &PMat, skip_row: usize, skip_col: usize) -> PMat {
        a.iter()
            .enumerate()
            .filter(|(i, _)| *i != skip_row)
            .map(|(_, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip_col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect()
    }

    /// Cofactor expansion; the matrices here are at most 4×4.
    pub fn det(a: &PMat) -> P {
        match a.len() {
            0 => P::one(),
            1 => a[0][0].clone(),
            2 => &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]),
            n => (0..n).fold(P::zero(), |acc, j| {
                if a[0][j].is_zero() {
                    return acc;
                }
                let term = &a[0][j] * &det(&minor_matrix(a, 0, j));
                if j % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                }
            }),
        }
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn sub_det(a: &PMat, rows: &[usize], cols: &[usize]) -> P {
        let m: PMat = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect())
            .collect();
        det(&m)
    }

    pub fn adjugate(a: &PMat) -> PMat {
        let n = a.len();
        if n == 1 {
            return identity(1);
        }
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = det(&minor_matrix(a, j, i));
                        if (i + j) % 2 == 0 {
                            c
                        } else {
                            -c
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Inverse of a determinant-one matrix (the adjugate).
    pub fn inverse_det_one(a: &PMat) -> Option<PMat> {
        (det(a) == P::one()).then(|| adjugate(a))
    }

    pub fn tau(a: &PMat) -> Result<PMat, super::ValError> {
        a.iter()
            .map(|r| r.iter().map(|x| x.tau_twist()).collect())
            .collect()
    }
}

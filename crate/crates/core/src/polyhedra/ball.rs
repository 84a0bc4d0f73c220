//! Minimal enclosing balls in a rational inner-product space (Welzl).

use crate::linalg::{self, Mat};
use crate::rational::Q;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: Vec<Q>,
    pub radius2: Q,
}

pub struct Metric<'a> {
    gram: Option<&'a Mat>,
}

impl<'a> Metric<'a> {
    pub fn euclidean() -> Self {
        Self { gram: None }
    }

    pub fn gram(g: &'a Mat) -> Self {
        Self { gram: Some(g) }
    }

    pub fn inner(&self, a: &[Q], b: &[Q]) -> Q {
        match self.gram {
            None => linalg::dot(a, b),
            Some(g) => linalg::dot(a, &linalg::mat_vec(g, b)),
        }
    }

    pub fn dist2(&self, a: &[Q], b: &[Q]) -> Q {
        let d = linalg::sub(a, b);
        self.inner(&d, &d)
    }
}

/// The smallest ball with every point of `support` on its boundary, centered
/// in their affine hull.
fn circumball(support: &[&Vec<Q>], metric: &Metric) -> Option<Ball> {
    let p0 = support.first()?;
    let diffs: Vec<Vec<Q>> = support[1..].iter().map(|p| linalg::sub(p, p0)).collect();
    let m: Mat = diffs
        .iter()
        .map(|a| {
            diffs
                .iter()
                .map(|b| metric.inner(a, b) * Q::from_integer(2.into()))
                .collect()
        })
        .collect();
    let rhs: Vec<Q> = diffs.iter().map(|a| metric.inner(a, a)).collect();
    let mu = if diffs.is_empty() {
        Vec::new()
    } else {
        linalg::solve(&m, &rhs)?
    };
    let center = mu
        .iter()
        .zip(&diffs)
        .fold((*p0).clone(), |acc, (c, d)| linalg::axpy(&acc, c, d));
    let radius2 = metric.dist2(&center, p0);
    Some(Ball { center, radius2 })
}

fn contains(ball: &Option<Ball>, p: &[Q], metric: &Metric) -> bool {
    ball.as_ref()
        .is_some_and(|b| metric.dist2(&b.center, p) <= b.radius2)
}

fn welzl<'p>(
    points: &[&'p Vec<Q>],
    boundary: &mut Vec<&'p Vec<Q>>,
    dim: usize,
    metric: &Metric,
) -> Option<Ball> {
    if points.is_empty() || boundary.len() == dim + 1 {
        return circumball(boundary, metric);
    }
    let (p, rest) = points.split_last().unwrap();
    let ball = welzl(rest, boundary, dim, metric);
    if contains(&ball, p, metric) {
        return ball;
    }
    boundary.push(p);
    let ball = welzl(rest, boundary, dim, metric);
    boundary.pop();
    ball
}

/// Exact minimal enclosing ball; `None` only for an empty input.
pub fn min_enclosing_ball(points: &[Vec<Q>], metric: &Metric) -> Option<Ball> {
    let mut uniq: Vec<&Vec<Q>> = points.iter().collect();
    uniq.sort();
    uniq.dedup();
    let first = uniq.first()?;
    let dim = first.len();
    let ball = welzl(&uniq, &mut Vec::new(), dim, metric);
    debug_assert!(ball
        .as_ref()
        .is_some_and(|b| uniq.iter().all(|p| metric.dist2(&b.center, p) <= b.radius2)));
    ball.or_else(|| {
        Some(Ball {
            center: (*first).clone(),
            radius2: Q::zero(),
        })
    })
}

//! Double description for polyhedral cones `{x : a_i·x ≥ 0}`.

use crate::linalg;
use crate::rational::{primitive, primitive_unsigned, Q};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// A cone as `lin(lines) + cone(rays)`; rays are extreme modulo the lines.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConeGens {
    pub lines: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Q>>,
}

impl ConeGens {
    pub fn is_zero_cone(&self) -> bool {
        self.lines.is_empty() && self.rays.is_empty()
    }

    /// All generators with lines listed in both directions.
    pub fn signed_generators(&self) -> Vec<Vec<Q>> {
        let mut g = self.rays.clone();
        for l in &self.lines {
            g.push(l.clone());
            g.push(linalg::neg(l));
        }
        g
    }
}

/// Generators of `{x ∈ ℚ^dim : a·x ≥ 0 for all a in constraints}`.
pub fn generators(constraints: &[Vec<Q>], dim: usize) -> ConeGens {
    let mut lines: Vec<Vec<Q>> = (0..dim).map(|i| linalg::unit(dim, i)).collect();
    let mut rays: Vec<Vec<Q>> = Vec::new();
    let mut done: Vec<Vec<Q>> = Vec::new();
    for a in constraints {
        if linalg::is_zero(a) {
            continue;
        }
        if let Some(p) = lines.iter().position(|l| !linalg::dot(a, l).is_zero()) {
            let mut l0 = lines.remove(p);
            let mut s0 = linalg::dot(a, &l0);
            if s0.is_negative() {
                l0 = linalg::neg(&l0);
                s0 = -s0;
            }
            let fix = |v: &Vec<Q>| -> Vec<Q> {
                let s = linalg::dot(a, v);
                if s.is_zero() {
                    v.clone()
                } else {
                    linalg::axpy(v, &(-s / &s0), &l0)
                }
            };
            lines = lines.iter().map(fix).collect();
            rays = rays.iter().map(fix).collect();
            rays.push(l0);
        } else {
            let free_dim = dim - lines.len();
            let signs: Vec<Q> = rays.iter().map(|r| linalg::dot(a, r)).collect();
            let mut next: Vec<Vec<Q>> = rays
                .iter()
                .zip(&signs)
                .filter(|(_, s)| !s.is_negative())
                .map(|(r, _)| r.clone())
                .collect();
            for (i, p) in rays.iter().enumerate() {
                if !signs[i].is_positive() {
                    continue;
                }
                for (j, n) in rays.iter().enumerate() {
                    if !signs[j].is_negative() {
                        continue;
                    }
                    let common: Vec<Vec<Q>> = done
                        .iter()
                        .filter(|c| linalg::dot(c, p).is_zero() && linalg::dot(c, n).is_zero())
                        .cloned()
                        .collect();
                    if free_dim >= 2 && linalg::rank(&common) + 2 < free_dim {
                        continue;
                    }
                    let combo =
                        linalg::sub(&linalg::scale(&signs[i], n), &linalg::scale(&signs[j], p));
                    next.push(combo);
                }
            }
            rays = next;
        }
        rays = dedupe(rays.iter().map(|r| primitive(r)));
        done.push(a.clone());
    }
    ConeGens {
        lines: canonical_lines(&lines, dim),
        rays: dedupe(rays.into_iter().filter(|r| !linalg::is_zero(r))),
    }
}

fn dedupe(it: impl Iterator<Item = Vec<Q>>) -> Vec<Vec<Q>> {
    it.collect::<BTreeSet<_>>().into_iter().collect()
}

/// Reduced echelon basis of a subspace, so equal spans give equal output.
pub fn canonical_lines(lines: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    if lines.is_empty() {
        return Vec::new();
    }
    let (r, _) = linalg::rref(lines, dim);
    r.iter().map(|row| primitive_unsigned(row)).collect()
}

/// H-representation of `lin(lines) + cone(rays)`: `(equalities, inequalities)`
/// meaning `e·x = 0` and `f·x ≥ 0`.
pub fn facets(gens: &ConeGens, dim: usize) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let mut cons: Vec<Vec<Q>> = gens.rays.clone();
    for l in &gens.lines {
        cons.push(l.clone());
        cons.push(linalg::neg(l));
    }
    let dual = generators(&cons, dim);
    (dual.lines, dual.rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn ve(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn quadrant_and_halfplane() {
        let g = generators(&[ve(&[1, 0]), ve(&[0, 1])], 2);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays, vec![ve(&[0, 1]), ve(&[1, 0])]);
        let h = generators(&[ve(&[1, 0])], 2);
        assert_eq!(h.lines, vec![ve(&[0, 1])]);
        assert_eq!(h.rays, vec![ve(&[1, 0])]);
        let z = generators(&[ve(&[1, 0]), ve(&[-1, 0]), ve(&[0, 1]), ve(&[0, -1])], 2);
        assert!(z.is_zero_cone());
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over the square with vertices (±1, ±1, 1)
        let cons = vec![
            ve(&[1, 0, 1]),
            ve(&[-1, 0, 1]),
            ve(&[0, 1, 1]),
            ve(&[0, -1, 1]),
        ];
        let g = generators(&cons, 3);
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert_eq!(r[2], qi(1));
        }
        let (eq, ineq) = facets(&g, 3);
        assert!(eq.is_empty());
        let a: BTreeSet<_> = ineq.into_iter().collect();
        let b: BTreeSet<_> = cons.into_iter().collect();
        assert_eq!(a, b);
    }
}

//! Exact two-phase simplex with Bland's rule.

use super::PolyError;
use crate::rational::Q;
use num_traits::{One, Signed, Zero};
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Q,
        x: Vec<Q>,
    },
    /// A feasible point and a ray along which the objective grows without bound.
    Unbounded {
        x: Vec<Q>,
        ray: Vec<Q>,
    },
    Infeasible,
}

/// Pivot ceiling from `BTGIT_LP_PIVOT_LIMIT`; unlimited when unset.
pub fn pivot_limit() -> Option<usize> {
    static LIMIT: OnceLock<Option<usize>> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("BTGIT_LP_PIVOT_LIMIT")
            .ok()
            .and_then(|s| s.trim().parse().ok())
    })
}

#[derive(Debug, Clone)]
pub struct Lp {
    nonneg: Vec<bool>,
    rows: Vec<(Vec<Q>, Rel, Q)>,
}

impl Lp {
    /// `n` free variables.
    pub fn new(n: usize) -> Self {
        Self {
            nonneg: vec![false; n],
            rows: Vec::new(),
        }
    }

    pub fn with_nonneg(nonneg: Vec<bool>) -> Self {
        Self {
            nonneg,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.nonneg.len()
    }

    pub fn add(&mut self, a: Vec<Q>, rel: Rel, b: Q) -> &mut Self {
        debug_assert_eq!(a.len(), self.nonneg.len());
        self.rows.push((a, rel, b));
        self
    }

    pub fn feasible_point(&self) -> Result<Option<Vec<Q>>, PolyError> {
        match self.maximize(&vec![Q::zero(); self.num_vars()])? {
            LpOutcome::Optimal { x, .. } => Ok(Some(x)),
            LpOutcome::Unbounded { x, .. } => Ok(Some(x)),
            LpOutcome::Infeasible => Ok(None),
        }
    }

    pub fn maximize(&self, c: &[Q]) -> Result<LpOutcome, PolyError> {
        // Standard-form columns: one per nonneg variable, two per free variable,
        // then one slack/surplus per inequality, then artificials.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::new();
        let mut ncols = 0;
        for &nn in &self.nonneg {
            if nn {
                col_of.push((ncols, None));
                ncols += 1;
            } else {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let nstruct = ncols;
        let m = self.rows.len();
        let mut rows: Vec<Vec<Q>> = Vec::with_capacity(m);
        let mut rhs: Vec<Q> = Vec::with_capacity(m);
        let mut rels = Vec::with_capacity(m);
        for (a, rel, b) in &self.rows {
            let mut row = vec![Q::zero(); nstruct];
            for (j, x) in a.iter().enumerate() {
                let (p, n) = col_of[j];
                row[p] = x.clone();
                if let Some(n) = n {
                    row[n] = -x.clone();
                }
            }
            let (mut row, mut b, mut rel) = (row, b.clone(), *rel);
            if b.is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
                rel = match rel {
                    Rel::Le => Rel::Ge,
                    Rel::Ge => Rel::Le,
                    Rel::Eq => Rel::Eq,
                };
            }
            rows.push(row);
            rhs.push(b);
            rels.push(rel);
        }
        let nslack = rels.iter().filter(|r| **r != Rel::Eq).count();
        let nart = rels.iter().filter(|r| **r != Rel::Le).count();
        let total = nstruct + nslack + nart;
        let mut basis = vec![0; m];
        let (mut s, mut art) = (nstruct, nstruct + nslack);
        for (i, rel) in rels.iter().enumerate() {
            rows[i].resize(total, Q::zero());
            match rel {
                Rel::Le => {
                    rows[i][s] = Q::one();
                    basis[i] = s;
                    s += 1;
                }
                Rel::Ge => {
                    rows[i][s] = -Q::one();
                    s += 1;
                    rows[i][art] = Q::one();
                    basis[i] = art;
                    art += 1;
                }
                Rel::Eq => {
                    rows[i][art] = Q::one();
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        let mut tab = Tableau {
            rows,
            rhs,
            basis,
            pivots: 0,
            limit: pivot_limit(),
        };
        let first_art = nstruct + nslack;
        if nart > 0 {
            let cost: Vec<Q> = (0..total)
                .map(|j| if j >= first_art { -Q::one() } else { Q::zero() })
                .collect();
            let allowed = vec![true; total];
            tab.optimize(&cost, &allowed)?;
            let infeas = tab
                .basis
                .iter()
                .zip(&tab.rhs)
                .any(|(&b, r)| b >= first_art && !r.is_zero());
            if infeas {
                return Ok(LpOutcome::Infeasible);
            }
            let mut i = 0;
            while i < tab.rows.len() {
                if tab.basis[i] >= first_art {
                    match (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                        Some(j) => {
                            tab.pivot(i, j)?;
                            i += 1;
                        }
                        None => {
                            tab.rows.remove(i);
                            tab.rhs.remove(i);
                            tab.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut cost = vec![Q::zero(); total];
        for (j, cj) in c.iter().enumerate() {
            let (p, n) = col_of[j];
            cost[p] = cj.clone();
            if let Some(n) = n {
                cost[n] = -cj.clone();
            }
        }
        let allowed: Vec<bool> = (0..total).map(|j| j < first_art).collect();
        let status = tab.optimize(&cost, &allowed)?;
        let y = tab.solution(total);
        let to_x = |y: &[Q]| -> Vec<Q> {
            col_of
                .iter()
                .map(|&(p, n)| match n {
                    Some(n) => &y[p] - &y[n],
                    None => y[p].clone(),
                })
                .collect()
        };
        let x = to_x(&y);
        match status {
            None => {
                let value = c.iter().zip(&x).fold(Q::zero(), |acc, (a, b)| acc + a * b);
                Ok(LpOutcome::Optimal { value, x })
            }
            Some(col) => {
                let mut dy = vec![Q::zero(); total];
                dy[col] = Q::one();
                for (i, &b) in tab.basis.iter().enumerate() {
                    dy[b] = -tab.rows[i][col].clone();
                }
                Ok(LpOutcome::Unbounded { x, ray: to_x(&dy) })
            }
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    pivots: usize,
    limit: Option<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) -> Result<(), PolyError> {
        self.pivots += 1;
        if let Some(l) = self.limit {
            if self.pivots > l {
                return Err(PolyError::PivotLimit(l));
            }
        }
        let inv = Q::one() / &self.rows[r][c];
        self.rows[r].iter_mut().for_each(|x| *x *= &inv);
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Maximizes `cost·y`; returns the entering column of an unbounded ray, if any.
    fn optimize(&mut self, cost: &[Q], allowed: &[bool]) -> Result<Option<usize>, PolyError> {
        loop {
            let mut entering = None;
            for j in 0..cost.len() {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        d -= &cost[b] * &self.rows[i][j];
                    }
                }
                if d.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return Ok(None) };
            let mut best: Option<(Q, usize)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][c];
                    let better = match &best {
                        None => true,
                        Some((r, bi)) => {
                            ratio < *r || (ratio == *r && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            match best {
                None => return Ok(Some(c)),
                Some((_, r)) => self.pivot(r, c)?,
            }
        }
    }

    fn solution(&self, total: usize) -> Vec<Q> {
        let mut y = vec![Q::zero(); total];
        for (i, &b) in self.basis.iter().enumerate() {
            y[b] = self.rhs[i].clone();
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn small_programs() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0 -> (8/5, 6/5)
        let mut lp = Lp::with_nonneg(vec![true, true]);
        lp.add(vec![qi(1), qi(2)], Rel::Le, qi(4))
            .add(vec![qi(3), qi(1)], Rel::Le, qi(6));
        match lp.maximize(&[qi(1), qi(1)]).unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, q(14, 5));
                assert_eq!(x, vec![q(8, 5), q(6, 5)]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn unbounded_and_infeasible() {
        let mut lp = Lp::new(2);
        lp.add(vec![qi(1), qi(-1)], Rel::Eq, qi(0));
        match lp.maximize(&[qi(1), qi(0)]).unwrap() {
            LpOutcome::Unbounded { ray, .. } => {
                assert!(ray[0].is_positive());
                assert_eq!(ray[0], ray[1]);
            }
            o => panic!("{o:?}"),
        }
        let mut bad = Lp::new(1);
        bad.add(vec![qi(1)], Rel::Ge, qi(2))
            .add(vec![qi(1)], Rel::Le, qi(1));
        assert_eq!(bad.maximize(&[qi(0)]).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::new(2);
        lp.add(vec![qi(1), qi(1)], Rel::Eq, qi(1))
            .add(vec![qi(2), qi(2)], Rel::Eq, qi(2))
            .add(vec![qi(1), qi(0)], Rel::Le, q(1, 3));
        match lp.maximize(&[qi(1), qi(0)]).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(1, 3)),
            o => panic!("{o:?}"),
        }
    }
}

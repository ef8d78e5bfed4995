//! Dense two-phase primal simplex over the rationals with Bland's rule.
//! Small problems only: every pivot recomputes reduced costs.

use super::{Matrix, Q};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Relation,
    pub rhs: Q,
}

/// `maximize objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Q::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        let n = self.num_vars;
        let m = self.constraints.len();
        // Column layout: originals, one slack/surplus per inequality, artificials.
        let mut n_slack = 0;
        let mut n_art = 0;
        let mut rows: Vec<(Vec<Q>, Relation, Q)> = Vec::with_capacity(m);
        for c in &self.constraints {
            let (coeffs, rel, rhs) = if c.rhs.is_negative() {
                let flipped = match c.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), flipped, -c.rhs.clone())
            } else {
                (c.coeffs.clone(), c.rel, c.rhs.clone())
            };
            if rel != Relation::Eq {
                n_slack += 1;
            }
            if rel != Relation::Le {
                n_art += 1;
            }
            rows.push((coeffs, rel, rhs));
        }
        let width = n + n_slack + n_art;
        let mut tab: Matrix = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut si, mut ai) = (n, n + n_slack);
        for (coeffs, rel, rhs) in rows {
            let mut row = coeffs;
            row.resize(width + 1, Q::zero());
            match rel {
                Relation::Le => {
                    row[si] = Q::one();
                    basis.push(si);
                    si += 1;
                }
                Relation::Ge => {
                    row[si] = -Q::one();
                    si += 1;
                    row[ai] = Q::one();
                    basis.push(ai);
                    ai += 1;
                }
                Relation::Eq => {
                    row[ai] = Q::one();
                    basis.push(ai);
                    ai += 1;
                }
            }
            row[width] = rhs;
            tab.push(row);
        }
        let art_start = n + n_slack;

        if n_art > 0 {
            let mut obj1 = vec![Q::zero(); width];
            for v in obj1.iter_mut().skip(art_start) {
                *v = -Q::one();
            }
            let allowed = vec![true; width];
            // Phase 1 is bounded by construction.
            let _ = simplex(&mut tab, &mut basis, &obj1, &allowed);
            let val: Q = basis
                .iter()
                .zip(&tab)
                .filter(|(&b, _)| b >= art_start)
                .map(|(_, r)| r[width].clone())
                .sum();
            if val.is_positive() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-valued artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < tab.len() {
                if basis[i] >= art_start {
                    if let Some(j) = (0..art_start).find(|&j| !tab[i][j].is_zero()) {
                        pivot(&mut tab, &mut basis, i, j);
                        i += 1;
                    } else {
                        tab.remove(i);
                        basis.remove(i);
                    }
                } else {
                    i += 1;
                }
            }
        }

        let mut obj2 = vec![Q::zero(); width];
        obj2[..n].clone_from_slice(&self.objective);
        let allowed: Vec<bool> = (0..width).map(|j| j < art_start).collect();
        if simplex(&mut tab, &mut basis, &obj2, &allowed).is_err() {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Q::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                x[b] = tab[i][width].clone();
            }
        }
        let value = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }
}

fn pivot(tab: &mut Matrix, basis: &mut [usize], r: usize, c: usize) {
    let inv = Q::one() / &tab[r][c];
    for v in tab[r].iter_mut() {
        *v *= &inv;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
    basis[r] = c;
}

/// Maximize `obj . x` from a feasible basis. `Err` means unbounded.
fn simplex(tab: &mut Matrix, basis: &mut [usize], obj: &[Q], allowed: &[bool]) -> Result<(), ()> {
    let width = obj.len();
    loop {
        let entering = (0..width).find(|&j| {
            if !allowed[j] || basis.contains(&j) {
                return false;
            }
            let mut rc = obj[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !tab[i][j].is_zero() && !obj[b].is_zero() {
                    rc -= &obj[b] * &tab[i][j];
                }
            }
            rc.is_positive()
        });
        let Some(j) = entering else {
            return Ok(());
        };
        let mut best: Option<(usize, Q)> = None;
        for i in 0..tab.len() {
            if tab[i][j].is_positive() {
                let ratio = &tab[i][width] / &tab[i][j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = best else {
            return Err(());
        };
        pivot(tab, basis, r, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, q_frac};

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![q(3), q(5)];
        lp.add(vec![q(1), q(0)], Relation::Le, q(4));
        lp.add(vec![q(0), q(2)], Relation::Le, q(12));
        lp.add(vec![q(3), q(2)], Relation::Le, q(18));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal { x: vec![q(2), q(6)], value: q(36) }
        );
    }

    #[test]
    fn equality_and_infeasibility() {
        let mut lp = LinearProgram::new(2);
        lp.add(vec![q(1), q(1)], Relation::Eq, q(1));
        lp.add(vec![q(1), q(-1)], Relation::Eq, q(0));
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => assert_eq!(x, vec![q_frac(1, 2), q_frac(1, 2)]),
            o => panic!("{o:?}"),
        }
        let mut bad = LinearProgram::new(1);
        bad.add(vec![q(1)], Relation::Ge, q(2));
        bad.add(vec![q(1)], Relation::Le, q(1));
        assert_eq!(bad.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_and_redundant_rows() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![q(1), q(0)];
        lp.add(vec![q(1), q(-1)], Relation::Ge, q(-3));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
        let mut red = LinearProgram::new(2);
        red.objective = vec![q(0), q(1)];
        red.add(vec![q(1), q(1)], Relation::Eq, q(2));
        red.add(vec![q(2), q(2)], Relation::Eq, q(4));
        match red.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(2)),
            o => panic!("{o:?}"),
        }
    }
}

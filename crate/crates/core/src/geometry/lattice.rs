use super::point::{LatticePoint, SignedSupport};
use crate::error::{Error, Result};
use crate::exact::{solve_unique, Matrix};
use crate::exact::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Injective affine map from the affine lattice spanned by a support onto
/// `Z^d`: `p = base + sum_j z_j * basis[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineLatticeMap {
    pub base: Vec<i64>,
    /// LLL-reduced basis of the difference lattice, one row per reduced
    /// coordinate. A short, nearly orthogonal basis keeps the critical
    /// system well conditioned.
    pub basis: Vec<Vec<i64>>,
}

impl AffineLatticeMap {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn apply(&self, p: &LatticePoint) -> Result<LatticePoint> {
        let cols: Matrix = (0..self.base.len())
            .map(|i| self.basis.iter().map(|row| Q::from_integer(row[i].into())).collect())
            .collect();
        let v: Vec<Q> = p.0.iter().zip(&self.base).map(|(a, b)| Q::from_integer((a - b).into())).collect();
        let z = solve_unique(&cols, &v).ok_or_else(|| Error::Geometry(format!("{p} is off the affine hull")))?;
        z.iter()
            .map(|q| {
                q.is_integer()
                    .then(|| q.to_integer().to_i64())
                    .flatten()
                    .ok_or_else(|| Error::Geometry(format!("{p} is off the support lattice")))
            })
            .collect::<Result<Vec<i64>>>()
            .map(LatticePoint)
    }

    pub fn inverse(&self, z: &LatticePoint) -> LatticePoint {
        let mut p = self.base.clone();
        for (k, row) in z.0.iter().zip(&self.basis) {
            for (pi, ri) in p.iter_mut().zip(row) {
                *pi += k * ri;
            }
        }
        LatticePoint(p)
    }
}

fn hermite_rows(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if r == rows.len() {
            break;
        }
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            if rows[r][c].is_zero() {
                rows.swap(r, i);
                continue;
            }
            let (a, b) = (rows[r][c].clone(), rows[i][c].clone());
            let e = a.extended_gcd(&b);
            let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
            let new_r: Vec<BigInt> =
                rows[r].iter().zip(&rows[i]).map(|(u, v)| &e.x * u + &e.y * v).collect();
            let new_i: Vec<BigInt> =
                rows[r].iter().zip(&rows[i]).map(|(u, v)| &ag * v - &bg * u).collect();
            rows[r] = new_r;
            rows[i] = new_i;
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for v in rows[r].iter_mut() {
                *v = -v.clone();
            }
        }
        for k in 0..r {
            let q = rows[k][c].div_floor(&rows[r][c]);
            if !q.is_zero() {
                let sub: Vec<BigInt> = rows[r].iter().map(|v| &q * v).collect();
                for (x, s) in rows[k].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &Matrix) -> (Matrix, Matrix) {
    let mut star: Matrix = Vec::with_capacity(b.len());
    let mut mu = vec![vec![Q::zero(); b.len()]; b.len()];
    for i in 0..b.len() {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&b[i], &star[j]) / dot(&star[j], &star[j]);
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        star.push(v);
    }
    (star, mu)
}

/// LLL reduction with `delta = 3/4` of linearly independent integer rows.
fn lll(mut b: Matrix) -> Vec<Vec<BigInt>> {
    let delta = Q::new(3.into(), 4.into());
    let (mut star, mut mu) = gram_schmidt(&b);
    let mut k = 1;
    while k < b.len() {
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if !r.is_zero() {
                let sub: Vec<Q> = b[j].iter().map(|v| &r * v).collect();
                for (x, s) in b[k].iter_mut().zip(sub) {
                    *x -= s;
                }
                (star, mu) = gram_schmidt(&b);
            }
        }
        let lhs = dot(&star[k], &star[k]);
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * dot(&star[k - 1], &star[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (star, mu) = gram_schmidt(&b);
            k = (k - 1).max(1);
        }
    }
    b.iter().map(|r| r.iter().map(|v| v.to_integer()).collect()).collect()
}

/// Re-express a support in coordinates of its own affine lattice, so that the
/// result is full-dimensional in `Z^d`. Copositivity, nonseparability and
/// the critical point structure are unchanged.
pub fn reduce_to_full_dim(support: &SignedSupport) -> Result<(AffineLatticeMap, SignedSupport)> {
    let all = support.all();
    let base = all[0].0.clone();
    let n = support.n();
    let rows: Vec<Vec<BigInt>> = all[1..]
        .iter()
        .map(|p| p.0.iter().zip(&base).map(|(a, b)| BigInt::from(a - b)).collect())
        .collect();
    let hnf = hermite_rows(rows, n);
    let basis = lll(hnf.iter().map(|r| r.iter().map(|v| Q::from_integer(v.clone())).collect()).collect())
        .iter()
        .map(|r| r.iter().map(|v| v.to_i64()).collect::<Option<Vec<i64>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Geometry("lattice basis overflows i64".into()))?;
    let map = AffineLatticeMap { base, basis };
    let map_all = |v: &[LatticePoint]| v.iter().map(|p| map.apply(p)).collect::<Result<Vec<_>>>();
    let reduced = SignedSupport::new(map_all(support.a_plus())?, map_all(support.a_minus())?)?;
    Ok((map, reduced))
}

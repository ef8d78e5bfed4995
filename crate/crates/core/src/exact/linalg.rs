use super::Q;
use num_traits::{One, Zero};

/// Dense row-major rational matrix.
pub type Matrix = Vec<Vec<Q>>;

/// Reduced row echelon form. Returns the reduced matrix and its pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / &a[r][c];
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Determinant of a square matrix.
pub fn det(m: &Matrix) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Basis of the right nullspace of `m` (with `cols` columns).
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Q>> {
    if m.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
    }
    let (r, piv) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &pc) in piv.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// Solve `a x = b` when the solution exists and is unique.
pub fn solve_unique(a: &Matrix, b: &[Q]) -> Option<Vec<Q>> {
    let cols = a.first().map_or(0, |r| r.len());
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.contains(&cols) || piv.len() != cols {
        return None;
    }
    Some((0..cols).map(|i| r[i][cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn determinant_and_rank() {
        let a = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(det(&a), q(5));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), q(-1));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 1, -1], &[0, 2, -1]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot: Q = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn unique_solution_or_none() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve_unique(&a, &[q(2), q(0)]).unwrap(), vec![q(1), q(1)]);
        let s = m(&[&[1, 1], &[2, 2]]);
        assert!(solve_unique(&s, &[q(1), q(3)]).is_none());
        assert!(solve_unique(&s, &[q(1), q(2)]).is_none());
    }
}

use crate::exact::{rref, Q};
use num_traits::Zero;

/// Affine coordinates on the affine hull of a point set.
///
/// The chart projects onto `d` coordinate axes chosen so that the projection
/// is injective on the hull; integer points stay integer.
#[derive(Debug, Clone)]
pub struct AffineChart {
    n: usize,
    base: Vec<Q>,
    coords: Vec<usize>,
    // Direction vectors, one per chart coordinate, equal to e_j on `coords`.
    dirs: Vec<Vec<Q>>,
}

impl AffineChart {
    pub fn from_points(points: &[Vec<Q>]) -> Self {
        let n = points.first().map_or(0, |p| p.len());
        let base = points.first().cloned().unwrap_or_default();
        let diffs: Vec<Vec<Q>> = points
            .iter()
            .skip(1)
            .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        let (r, piv) = if diffs.is_empty() { (vec![], vec![]) } else { rref(&diffs) };
        let dirs = r.into_iter().take(piv.len()).collect();
        AffineChart { n, base, coords: piv, dirs }
    }

    pub fn from_lattice(points: &[Vec<i64>]) -> Self {
        Self::from_points(&points.iter().map(|p| to_q(p)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn project(&self, p: &[Q]) -> Vec<Q> {
        self.coords.iter().map(|&c| p[c].clone()).collect()
    }

    pub fn project_lattice(&self, p: &[i64]) -> Vec<Q> {
        self.coords.iter().map(|&c| Q::from_integer(p[c].into())).collect()
    }

    pub fn lift(&self, u: &[Q]) -> Vec<Q> {
        let mut x = self.base.clone();
        for (j, d) in self.dirs.iter().enumerate() {
            let coef = &u[j] - &self.base[self.coords[j]];
            if coef.is_zero() {
                continue;
            }
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += &coef * di;
            }
        }
        x
    }

    /// Whether `p` lies on the affine hull.
    pub fn contains(&self, p: &[Q]) -> bool {
        self.lift(&self.project(p)) == p
    }

    /// Ambient functional agreeing with the chart functional `v` on the hull.
    pub fn lift_functional(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.n];
        for (j, &c) in self.coords.iter().enumerate() {
            out[c] = v[j].clone();
        }
        out
    }
}

pub(crate) fn to_q(p: &[i64]) -> Vec<Q> {
    p.iter().map(|&v| Q::from_integer(v.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn chart_round_trip_on_plane_in_space() {
        let pts = vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![2, 3, 1]];
        let ch = AffineChart::from_lattice(&pts);
        assert_eq!(ch.dim(), 2);
        for p in &pts {
            let pq = to_q(p);
            assert!(ch.contains(&pq));
            assert_eq!(ch.lift(&ch.project(&pq)), pq);
        }
        assert!(!ch.contains(&[q(0), q(0), q(0)]));
    }

    #[test]
    fn chart_on_diagonal_segment() {
        let ch = AffineChart::from_lattice(&[vec![0, 0], vec![2, 2], vec![1, 1]]);
        assert_eq!(ch.dim(), 1);
        assert_eq!(ch.lift(&[q(5)]), vec![q(5), q(5)]);
    }
}

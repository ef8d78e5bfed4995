use super::chart::to_q;
use super::point::LatticePoint;
use crate::error::{Error, Result};
use crate::exact::{rank, solve_unique, Matrix, Q};
use num_traits::One;

/// Barycentric coordinates of `b` with respect to the vertices of `simplex`.
pub fn barycentric_coordinates(simplex: &[LatticePoint], b: &LatticePoint) -> Result<Vec<Q>> {
    barycentric_coordinates_q(simplex, &to_q(&b.0))
}

/// As [`barycentric_coordinates`] for a rational point.
pub fn barycentric_coordinates_q(simplex: &[LatticePoint], b: &[Q]) -> Result<Vec<Q>> {
    if simplex.is_empty() {
        return Err(Error::Geometry("empty simplex".into()));
    }
    let n = simplex[0].dim();
    if b.len() != n || simplex.iter().any(|p| p.dim() != n) {
        return Err(Error::Geometry("dimension mismatch".into()));
    }
    let k = simplex.len();
    let mut m: Matrix = vec![vec![Q::one(); k]];
    for i in 0..n {
        m.push(simplex.iter().map(|p| Q::from_integer(p.0[i].into())).collect());
    }
    if rank(&m) != k {
        return Err(Error::Geometry("simplex vertices are affinely dependent".into()));
    }
    let mut rhs = vec![Q::one()];
    rhs.extend(b.iter().cloned());
    solve_unique(&m, &rhs)
        .ok_or_else(|| Error::Geometry("point is not in the affine span of the simplex".into()))
}

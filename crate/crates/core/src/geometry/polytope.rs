//! Convex hulls by exhaustive facet search. A candidate hyperplane is spanned
//! by every affinely independent d-subset of the points, so the cost is
//! O(C(m, d) * m * d^3) exact operations for m points of affine dimension d.

use super::chart::{to_q, AffineChart};
use super::point::{LatticePoint, SignedSupport};
use crate::error::{Error, Result};
use crate::exact::{nullspace, Q};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};

/// Above this many candidate subsets the enumeration refuses to run.
pub(crate) const SUBSET_BUDGET: u128 = 5_000_000;

/// A face of a lattice polytope. `points` index the input list; the face is
/// cut out by `normal . x + offset = 0` with every other point strictly
/// positive. The whole polytope has the zero normal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub points: Vec<usize>,
    pub dim: usize,
    #[serde(skip)]
    pub normal: Vec<Q>,
    #[serde(skip)]
    pub offset: Q,
}

impl Face {
    pub fn contains_index(&self, i: usize) -> bool {
        self.points.binary_search(&i).is_ok()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Facet {
    pub normal: Vec<Q>,
    pub offset: Q,
    pub members: Vec<usize>,
}

impl Facet {
    pub fn eval(&self, x: &[Q]) -> Q {
        dot(&self.normal, x) + &self.offset
    }
}

/// Hull of a point set in its own affine chart.
#[derive(Debug, Clone)]
pub(crate) struct Hull {
    pub chart: AffineChart,
    pub pts: Vec<Vec<Q>>,
    pub facets: Vec<Facet>,
}

pub(crate) fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u128::MAX / 1024 {
            return u128::MAX;
        }
    }
    r
}

/// Calls `f` on every k-subset of 0..n in lexicographic order; `f` returns
/// false to stop early.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Hyperplane `normal . x + offset = 0` through `d` points of R^d, if they
/// are affinely independent.
pub(crate) fn hyperplane_through(pts: &[&Vec<Q>]) -> Option<(Vec<Q>, Q)> {
    let d = pts[0].len();
    let rows: Vec<Vec<Q>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    let ns = nullspace(&rows, d);
    if ns.len() != 1 {
        return None;
    }
    let normal = ns.into_iter().next().unwrap();
    let offset = -dot(&normal, pts[0]);
    Some((normal, offset))
}

impl Hull {
    pub fn new(points: &[Vec<Q>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Geometry("empty point set".into()));
        }
        let chart = AffineChart::from_points(points);
        let pts: Vec<Vec<Q>> = points.iter().map(|p| chart.project(p)).collect();
        let d = chart.dim();
        let m = pts.len();
        let mut facets = Vec::new();
        if d > 0 {
            if binomial(m, d) > SUBSET_BUDGET {
                return Err(Error::Geometry(format!(
                    "hull of {m} points in dimension {d} exceeds the enumeration budget"
                )));
            }
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            for_each_subset(m, d, |s| {
                let sel: Vec<&Vec<Q>> = s.iter().map(|&i| &pts[i]).collect();
                let Some((normal, offset)) = hyperplane_through(&sel) else {
                    return true;
                };
                let vals: Vec<Q> = pts.iter().map(|p| dot(&normal, p) + &offset).collect();
                let members: Vec<usize> = (0..m).filter(|&i| vals[i].is_zero()).collect();
                if !seen.insert(members.clone()) {
                    return true;
                }
                let pos = vals.iter().any(|v| v.is_positive());
                let neg = vals.iter().any(|v| v.is_negative());
                if pos && neg {
                    return true;
                }
                let (normal, offset) = if neg {
                    (normal.iter().map(|v| -v).collect(), -offset)
                } else {
                    (normal, offset)
                };
                facets.push(Facet { normal, offset, members });
                true
            });
        }
        Ok(Hull { chart, pts, facets })
    }

    pub fn from_lattice(points: &[LatticePoint]) -> Result<Self> {
        Self::new(&points.iter().map(|p| to_q(&p.0)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Closed containment of a chart-coordinate point.
    pub fn contains_proj(&self, x: &[Q]) -> bool {
        self.facets.iter().all(|f| !f.eval(x).is_negative())
    }

    /// Relative-interior containment of a chart-coordinate point.
    pub fn interior_proj(&self, x: &[Q]) -> bool {
        self.facets.iter().all(|f| f.eval(x).is_positive())
    }

    /// Closed containment of an ambient point.
    pub fn contains(&self, x: &[Q]) -> bool {
        self.chart.contains(x) && self.contains_proj(&self.chart.project(x))
    }

    /// Relative-interior containment of an ambient point.
    pub fn relint_contains(&self, x: &[Q]) -> bool {
        self.chart.contains(x) && self.interior_proj(&self.chart.project(x))
    }

    fn face_from_members(&self, members: Vec<usize>) -> Face {
        let d = self.dim();
        let mut normal = vec![Q::zero(); d];
        let mut offset = Q::zero();
        for f in &self.facets {
            if members.iter().all(|i| f.members.binary_search(i).is_ok()) {
                for (a, b) in normal.iter_mut().zip(&f.normal) {
                    *a += b;
                }
                offset += &f.offset;
            }
        }
        let sub: Vec<Vec<Q>> = members.iter().map(|&i| self.pts[i].clone()).collect();
        let dim = AffineChart::from_points(&sub).dim();
        Face {
            points: members,
            dim,
            normal: self.chart.lift_functional(&normal),
            offset,
        }
    }

    pub fn faces(&self) -> Vec<Face> {
        let all: Vec<usize> = (0..self.pts.len()).collect();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        sets.insert(all);
        let mut frontier: Vec<Vec<usize>> = self.facets.iter().map(|f| f.members.clone()).collect();
        while let Some(s) = frontier.pop() {
            if s.is_empty() || !sets.insert(s.clone()) {
                continue;
            }
            for f in &self.facets {
                let inter: Vec<usize> =
                    s.iter().copied().filter(|i| f.members.binary_search(i).is_ok()).collect();
                if !inter.is_empty() && !sets.contains(&inter) {
                    frontier.push(inter);
                }
            }
        }
        let mut faces: Vec<Face> = sets.into_iter().map(|m| self.face_from_members(m)).collect();
        faces.sort_by(|a, b| (a.dim, &a.points).cmp(&(b.dim, &b.points)));
        faces
    }

    /// Members of the smallest face whose hull contains the chart points `xs`.
    pub fn smallest_face_members(&self, xs: &[Vec<Q>]) -> Vec<usize> {
        let mut members: Vec<usize> = (0..self.pts.len()).collect();
        for f in &self.facets {
            if xs.iter().all(|x| f.eval(x).is_zero()) {
                members.retain(|i| f.members.binary_search(i).is_ok());
            }
        }
        members
    }
}

/// Dimension of the affine hull.
pub fn affine_dim(points: &[LatticePoint]) -> Result<usize> {
    if points.is_empty() {
        return Err(Error::Geometry("affine dimension of an empty set".into()));
    }
    let pts: Vec<Vec<Q>> = points.iter().map(|p| to_q(&p.0)).collect();
    Ok(AffineChart::from_points(&pts).dim())
}

/// Indices of the vertices of the convex hull.
pub fn hull_vertices(points: &[LatticePoint]) -> Result<Vec<usize>> {
    let hull = Hull::from_lattice(points)?;
    if hull.dim() == 0 {
        return Ok(vec![0]);
    }
    Ok((0..points.len())
        .filter(|&i| {
            let mut members: Vec<usize> = (0..points.len()).collect();
            for f in hull.facets.iter().filter(|f| f.members.binary_search(&i).is_ok()) {
                members.retain(|j| f.members.binary_search(j).is_ok());
            }
            members == [i]
        })
        .collect())
}

/// All nonempty faces of `conv(A)`, indices into `support.all()`, sorted by
/// dimension. The last entry is the polytope itself.
pub fn enumerate_faces(support: &SignedSupport) -> Result<Vec<Face>> {
    Ok(Hull::from_lattice(&support.all())?.faces())
}

/// The inclusion-minimal face of `conv(A)` containing the points of `subset`.
pub fn smallest_face_containing(support: &SignedSupport, subset: &[LatticePoint]) -> Result<Face> {
    let hull = Hull::from_lattice(&support.all())?;
    let mut xs = Vec::new();
    for p in subset {
        let pq = to_q(&p.0);
        if p.dim() != support.n() || !hull.contains(&pq) {
            return Err(Error::Geometry(format!("{p} does not lie in the Newton polytope")));
        }
        xs.push(hull.chart.project(&pq));
    }
    let members = hull.smallest_face_members(&xs);
    Ok(hull.face_from_members(members))
}

/// Faces of `gamma` meeting the negative support.
pub fn truncation_face_set(gamma: &Face, support: &SignedSupport) -> Result<Vec<Face>> {
    if support.a_minus().is_empty() {
        return Ok(Vec::new());
    }
    Ok(enumerate_faces(support)?
        .into_iter()
        .filter(|f| f.points.iter().all(|i| gamma.contains_index(*i)))
        .filter(|f| f.points.iter().any(|&i| support.is_minus(i)))
        .collect())
}

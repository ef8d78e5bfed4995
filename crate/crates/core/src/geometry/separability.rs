//! Nonseparability of a signed support.
//!
//! `A-` is nonseparable from `A+` when it sits in the relative interior of
//! `conv(A+)` and some full-dimensional chamber of the common refinement of
//! all simplices on `A+` contains it. Chambers are searched through the
//! cells of the arrangement of spanning hyperplanes that touch the first
//! negative point `b1`: any chamber containing `A-` contains `b1` and hence
//! one of these cells. Hyperplanes through `b1` are resolved in index order,
//! positive side first, so the chamber that is found is deterministic.

use super::chart::{to_q, AffineChart};
use super::point::SignedSupport;
use super::polytope::{binomial, dot, for_each_subset, hyperplane_through, Hull, SUBSET_BUDGET};
use crate::error::{Error, Result};
use crate::exact::{q, solve_unique, LinearProgram, LpOutcome, Matrix, Relation, Q};
use crate::geometry::LatticePoint;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SideSign {
    Neg,
    Zero,
    Pos,
}

impl SideSign {
    fn of(v: &Q) -> Self {
        if v.is_positive() {
            SideSign::Pos
        } else if v.is_negative() {
            SideSign::Neg
        } else {
            SideSign::Zero
        }
    }
}

/// A hyperplane spanned by points of `A+`, with the side of each point of `A-`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperplaneReport {
    /// Lexicographically first spanning subset, indices into `a_plus`.
    pub spanning: Vec<usize>,
    /// All points of `a_plus` on the hyperplane.
    pub members: Vec<usize>,
    /// Side of each point of `a_minus`.
    pub minus_sides: Vec<SideSign>,
}

impl HyperplaneReport {
    pub fn splits_minus(&self) -> bool {
        self.minus_sides.contains(&SideSign::Pos) && self.minus_sides.contains(&SideSign::Neg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SeparabilityDiagnostic {
    /// A negative point is not in the relative interior of `conv(A+)`.
    NotInRelativeInterior { point: LatticePoint },
    /// No chamber contains all of `A-`. `split` names a spanning hyperplane
    /// with negative points strictly on both sides, when there is one.
    NoCommonCell { split: Option<HyperplaneReport> },
}

/// Interior point of the chosen chamber `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellWitness {
    /// Ambient coordinates.
    pub point: Vec<Q>,
    /// Side of `point` for every hyperplane of [`spanning_hyperplanes`],
    /// in the same order. Never `Zero`.
    pub sides: Vec<SideSign>,
}

/// The simplices of `A+` whose relative interior contains the chamber, with
/// the barycentric coordinates of every negative point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexFamily {
    /// Vertex indices into `a_plus`, sorted.
    pub simplices: Vec<Vec<usize>>,
    /// `lambda[k][j][v]`: coordinate of `a_minus[j]` at vertex `simplices[k][v]`.
    pub lambda: Vec<Vec<Vec<Q>>>,
}

struct Hyperplane {
    normal: Vec<Q>,
    offset: Q,
    report: HyperplaneReport,
}

impl Hyperplane {
    fn eval(&self, x: &[Q]) -> Q {
        dot(&self.normal, x) + &self.offset
    }
}

struct Setup {
    chart: AffineChart,
    plus: Vec<Vec<Q>>,
    minus: Vec<Vec<Q>>,
}

fn setup(support: &SignedSupport) -> Result<std::result::Result<Setup, SeparabilityDiagnostic>> {
    if support.a_minus().is_empty() {
        return Err(Error::Geometry("separability needs a nonempty negative support".into()));
    }
    let all: Vec<Vec<Q>> = support.all().iter().map(|p| to_q(&p.0)).collect();
    let chart = AffineChart::from_points(&all);
    let plus_amb: Vec<Vec<Q>> = support.a_plus().iter().map(|p| to_q(&p.0)).collect();
    let hull = Hull::new(&plus_amb)?;
    for b in support.a_minus() {
        if hull.dim() != chart.dim() || !hull.relint_contains(&to_q(&b.0)) {
            return Ok(Err(SeparabilityDiagnostic::NotInRelativeInterior { point: b.clone() }));
        }
    }
    let plus = plus_amb.iter().map(|p| chart.project(p)).collect();
    let minus = support.a_minus().iter().map(|p| chart.project_lattice(&p.0)).collect();
    Ok(Ok(Setup { chart, plus, minus }))
}

fn hyperplanes(s: &Setup) -> Result<Vec<Hyperplane>> {
    let d = s.chart.dim();
    if binomial(s.plus.len(), d) > SUBSET_BUDGET {
        return Err(Error::Geometry("too many spanning hyperplanes to enumerate".into()));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for_each_subset(s.plus.len(), d, |sub| {
        let sel: Vec<&Vec<Q>> = sub.iter().map(|&i| &s.plus[i]).collect();
        if let Some((normal, offset)) = hyperplane_through(&sel) {
            let members: Vec<usize> = (0..s.plus.len())
                .filter(|&i| (dot(&normal, &s.plus[i]) + &offset).is_zero())
                .collect();
            if seen.insert(members.clone()) {
                let minus_sides =
                    s.minus.iter().map(|b| SideSign::of(&(dot(&normal, b) + &offset))).collect();
                out.push(Hyperplane {
                    normal,
                    offset,
                    report: HyperplaneReport { spanning: sub.to_vec(), members, minus_sides },
                });
            }
        }
        true
    });
    Ok(out)
}

/// Inverse of the homogeneous vertex matrix of a simplex, or `None` when degenerate.
fn simplex_solver(verts: &[&Vec<Q>]) -> Option<Matrix> {
    let k = verts.len();
    let mut m: Matrix = vec![vec![Q::one(); k]];
    for i in 0..verts[0].len() {
        m.push(verts.iter().map(|v| v[i].clone()).collect());
    }
    let mut inv = vec![vec![Q::zero(); k]; k];
    for c in 0..k {
        let e: Vec<Q> = (0..k).map(|r| if r == c { Q::one() } else { Q::zero() }).collect();
        let col = solve_unique(&m, &e)?;
        for r in 0..k {
            inv[r][c] = col[r].clone();
        }
    }
    Some(inv)
}

fn bary(inv: &Matrix, x: &[Q]) -> Vec<Q> {
    inv.iter()
        .map(|row| row[0].clone() + row[1..].iter().zip(x).map(|(a, b)| a * b).sum::<Q>())
        .collect()
}

struct SimplexData {
    verts: Vec<usize>,
    inv: Matrix,
    minus_bary: Vec<Vec<Q>>,
}

fn simplices(s: &Setup) -> Result<Vec<SimplexData>> {
    let d = s.chart.dim();
    if binomial(s.plus.len(), d + 1) > SUBSET_BUDGET {
        return Err(Error::Geometry("too many simplices to enumerate".into()));
    }
    let mut out = Vec::new();
    for_each_subset(s.plus.len(), d + 1, |sub| {
        let verts: Vec<&Vec<Q>> = sub.iter().map(|&i| &s.plus[i]).collect();
        if let Some(inv) = simplex_solver(&verts) {
            let minus_bary = s.minus.iter().map(|b| bary(&inv, b)).collect();
            out.push(SimplexData { verts: sub.to_vec(), inv, minus_bary });
        }
        true
    });
    Ok(out)
}

/// Direction `u` with `sign_H * <n_H, u> > 0` for every constrained hyperplane.
fn open_cone_point(normals: &[(&Vec<Q>, bool)], d: usize) -> Option<Vec<Q>> {
    if normals.is_empty() {
        return Some(vec![Q::zero(); d]);
    }
    // Variables: u+ (d), u- (d), s.
    let mut lp = LinearProgram::new(2 * d + 1);
    lp.objective[2 * d] = Q::one();
    for (n, pos) in normals {
        let sgn = if *pos { q(1) } else { q(-1) };
        let mut row = Vec::with_capacity(2 * d + 1);
        row.extend(n.iter().map(|v| v * &sgn));
        row.extend(n.iter().map(|v| -(v * &sgn)));
        row.push(q(-1));
        lp.add(row, Relation::Ge, Q::zero());
    }
    for i in 0..2 * d + 1 {
        let mut row = vec![Q::zero(); 2 * d + 1];
        row[i] = Q::one();
        lp.add(row, Relation::Le, Q::one());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            Some((0..d).map(|i| &x[i] - &x[d + i]).collect())
        }
        _ => None,
    }
}

struct Search<'a> {
    setup: &'a Setup,
    hps: &'a [Hyperplane],
    simps: &'a [SimplexData],
    through: Vec<usize>,
    b1: Vec<Q>,
}

impl Search<'_> {
    fn leaf(&self, u: &[Q]) -> Option<Vec<Q>> {
        let mut eps = Q::one();
        for h in self.hps {
            let nu = dot(&h.normal, u);
            let val = h.eval(&self.b1);
            if !val.is_zero() && !nu.is_zero() {
                let lim = val.abs() / nu.abs() / q(2);
                if lim < eps {
                    eps = lim;
                }
            }
        }
        let qpt: Vec<Q> = self.b1.iter().zip(u).map(|(b, ui)| b + &eps * ui).collect();
        let chamber: Vec<&SimplexData> = self
            .simps
            .iter()
            .filter(|s| bary(&s.inv, &qpt).iter().all(|v| v.is_positive()))
            .collect();
        let ok = !chamber.is_empty()
            && chamber
                .iter()
                .all(|s| s.minus_bary.iter().all(|l| l.iter().all(|v| !v.is_negative())));
        ok.then_some(qpt)
    }

    fn dfs(&self, chosen: &mut Vec<bool>) -> Option<Vec<Q>> {
        let d = self.setup.chart.dim();
        let normals: Vec<(&Vec<Q>, bool)> = chosen
            .iter()
            .enumerate()
            .map(|(i, &p)| (&self.hps[self.through[i]].normal, p))
            .collect();
        let u = open_cone_point(&normals, d)?;
        if chosen.len() == self.through.len() {
            return self.leaf(&u);
        }
        for side in [true, false] {
            chosen.push(side);
            let r = self.dfs(chosen);
            chosen.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }
}

/// Outcome of the nonseparability test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separability {
    Nonseparable(CellWitness),
    Separable(SeparabilityDiagnostic),
}

/// Full nonseparability analysis: a chamber witness, or why there is none.
pub fn separability(support: &SignedSupport) -> Result<Separability> {
    let s = match setup(support)? {
        Ok(s) => s,
        Err(diag) => return Ok(Separability::Separable(diag)),
    };
    let hps = hyperplanes(&s)?;
    let simps = simplices(&s)?;
    let b1 = s.minus[0].clone();
    let through = (0..hps.len()).filter(|&i| hps[i].eval(&b1).is_zero()).collect();
    let search = Search { setup: &s, hps: &hps, simps: &simps, through, b1 };
    match search.dfs(&mut Vec::new()) {
        Some(qpt) => {
            let sides = hps.iter().map(|h| SideSign::of(&h.eval(&qpt))).collect();
            Ok(Separability::Nonseparable(CellWitness { point: s.chart.lift(&qpt), sides }))
        }
        None => Ok(Separability::Separable(SeparabilityDiagnostic::NoCommonCell {
            split: hps.into_iter().map(|h| h.report).find(|r| r.splits_minus()),
        })),
    }
}

/// Whether the support is nonseparable, with a diagnostic when it is not.
pub fn is_nonseparable(support: &SignedSupport) -> Result<(bool, Option<SeparabilityDiagnostic>)> {
    Ok(match separability(support)? {
        Separability::Nonseparable(_) => (true, None),
        Separability::Separable(d) => (false, Some(d)),
    })
}

/// Interior point of the deterministic chamber containing `A-`.
pub fn find_cell_witness(support: &SignedSupport) -> Result<CellWitness> {
    match separability(support)? {
        Separability::Nonseparable(w) => Ok(w),
        Separability::Separable(d) => {
            Err(Error::Contract(format!("support is separable: {d:?}")))
        }
    }
}

/// Spanning hyperplanes of `A+` in the affine hull of the support.
pub fn spanning_hyperplanes(support: &SignedSupport) -> Result<Vec<HyperplaneReport>> {
    if support.a_minus().is_empty() {
        return Err(Error::Geometry("no negative support".into()));
    }
    let all: Vec<Vec<Q>> = support.all().iter().map(|p| to_q(&p.0)).collect();
    let chart = AffineChart::from_points(&all);
    let s = Setup {
        plus: support.a_plus().iter().map(|p| chart.project_lattice(&p.0)).collect(),
        minus: support.a_minus().iter().map(|p| chart.project_lattice(&p.0)).collect(),
        chart,
    };
    Ok(hyperplanes(&s)?.into_iter().map(|h| h.report).collect())
}

/// The simplices `Lambda(A+, D)` of the chamber through `witness`.
pub fn simplices_containing_cell(support: &SignedSupport, witness: &CellWitness) -> Result<SimplexFamily> {
    let s = match setup(support)? {
        Ok(s) => s,
        Err(d) => return Err(Error::Contract(format!("support is separable: {d:?}"))),
    };
    if !s.chart.contains(&witness.point) {
        return Err(Error::Contract("witness is off the affine hull".into()));
    }
    let qpt = s.chart.project(&witness.point);
    let mut fam = SimplexFamily { simplices: Vec::new(), lambda: Vec::new() };
    for sd in simplices(&s)? {
        if !bary(&sd.inv, &qpt).iter().all(|v| v.is_positive()) {
            continue;
        }
        if sd.minus_bary.iter().any(|l| l.iter().any(|v| v.is_negative())) {
            return Err(Error::Contract("witness chamber does not contain the negative support".into()));
        }
        fam.simplices.push(sd.verts);
        fam.lambda.push(sd.minus_bary);
    }
    if fam.simplices.is_empty() {
        return Err(Error::Contract("witness is not interior to conv(A+)".into()));
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_frac;

    fn sup(plus: &[&[i64]], minus: &[&[i64]]) -> SignedSupport {
        let f = |v: &[&[i64]]| v.iter().map(|p| LatticePoint(p.to_vec())).collect();
        SignedSupport::new(f(plus), f(minus)).unwrap()
    }

    #[test]
    fn square_center_has_two_simplices() {
        let s = sup(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]], &[&[1, 1]]);
        assert!(is_nonseparable(&s).unwrap().0);
        let w = find_cell_witness(&s).unwrap();
        let fam = simplices_containing_cell(&s, &w).unwrap();
        assert_eq!(fam.simplices.len(), 2);
        for l in &fam.lambda {
            let tot: Q = l[0].iter().sum();
            assert_eq!(tot, Q::one());
            assert!(l[0].contains(&q_frac(1, 2)));
        }
    }

    #[test]
    fn diagonal_pairs() {
        let plus: &[&[i64]] = &[&[0, 0], &[4, 0], &[0, 4], &[4, 4]];
        // The anti-diagonal triangulation puts these in different triangles.
        assert!(!is_nonseparable(&sup(plus, &[&[1, 1], &[3, 3]])).unwrap().0);
        // Both points lie in the closed top chamber.
        assert!(is_nonseparable(&sup(plus, &[&[1, 3], &[3, 3]])).unwrap().0);
        // The diagonal x1 = x2 separates these.
        let (ok, diag) = is_nonseparable(&sup(plus, &[&[1, 3], &[3, 1]])).unwrap();
        assert!(!ok);
        assert!(matches!(diag, Some(SeparabilityDiagnostic::NoCommonCell { .. })));
    }

    #[test]
    fn boundary_point_is_not_interior() {
        let s = sup(&[&[0, 0], &[2, 0], &[0, 2]], &[&[1, 0]]);
        match is_nonseparable(&s).unwrap() {
            (false, Some(SeparabilityDiagnostic::NotInRelativeInterior { point })) => {
                assert_eq!(point, LatticePoint(vec![1, 0]))
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn split_by_hyperplane_extension_is_still_nonseparable() {
        // The line through (0,0) and (2,1) separates the two negative points
        // only beyond (2,1), where no segment of A+ runs.
        let s = sup(&[&[0, 0], &[4, 0], &[4, 4], &[0, 4], &[2, 1]], &[&[3, 1], &[3, 2]]);
        let hs = spanning_hyperplanes(&s).unwrap();
        assert!(hs.iter().any(|h| h.splits_minus()));
        assert!(is_nonseparable(&s).unwrap().0);
    }

    #[test]
    fn pentagon_chamber() {
        // Regular-ish pentagon with a central negative point.
        let s = sup(&[&[0, 0], &[4, 0], &[6, 4], &[2, 7], &[-2, 4]], &[&[2, 3]]);
        let w = find_cell_witness(&s).unwrap();
        let fam = simplices_containing_cell(&s, &w).unwrap();
        assert_eq!(fam.simplices.len(), 5);
    }

    #[test]
    fn lower_dimensional_support() {
        let s = sup(&[&[0, 0, 1], &[2, 0, 1], &[0, 2, 1], &[2, 2, 1]], &[&[1, 1, 1]]);
        let w = find_cell_witness(&s).unwrap();
        assert_eq!(w.point[2], q(1));
        assert_eq!(simplices_containing_cell(&s, &w).unwrap().simplices.len(), 2);
    }
}

//! Closed forms and brute-force searches used to cross-check the main
//! algorithms. They share no geometry or numerics with the library proper.

use crate::error::{Error, Result};
use crate::exact::Q;
use crate::geometry::{LatticePoint, SignedSupport};
use crate::signomial::Signomial;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Nonsigned coefficients of
/// `c0 + c1 x1^2 + c2 x2^2 + c3 x1^2 x2^2 - c4 x1 x2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareSupportCoeffs {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl SquareSupportCoeffs {
    pub fn to_text(&self) -> String {
        format!(
            "{:e} + {:e}*x1^2 + {:e}*x2^2 + {:e}*x1^2*x2^2 - {:e}*x1*x2",
            self.c0, self.c1, self.c2, self.c3, self.c4
        )
    }
}

/// `(t_-, t_+)`, the positive roots of the eliminant in `t`; `t* = t_+`.
pub fn square_tstar(c: &SquareSupportCoeffs) -> (f64, f64) {
    let s = c.c0 * c.c3 + c.c1 * c.c2;
    let g = 2.0 * (c.c0 * c.c1 * c.c2 * c.c3).sqrt();
    let k = c.c4 * c.c4;
    let t1 = 4.0 * (s + g) / k;
    // AM-GM makes this nonnegative up to rounding.
    let t2 = (4.0 * (s - g) / k).max(0.0);
    (t2.sqrt(), t1.sqrt())
}

fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for k in col..n {
                    let v = &f * &a[col][k];
                    a[r][k] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn qi(v: i64) -> Q {
    Q::from_integer(v.into())
}

fn lifted(p: &[i64]) -> Vec<Q> {
    std::iter::once(Q::one()).chain(p.iter().map(|&v| qi(v))).collect()
}

/// Affine coordinates of `b` with respect to `n + 1` affinely independent points.
fn affine_coords(pts: &[&[i64]], b: &[Q]) -> Option<Vec<Q>> {
    let m = pts.len();
    let a: Vec<Vec<Q>> = (0..m)
        .map(|r| pts.iter().map(|p| if r == 0 { Q::one() } else { qi(p[r - 1]) }).collect())
        .collect();
    let rhs = std::iter::once(Q::one()).chain(b.iter().cloned()).collect();
    solve(a, rhs)
}

/// `Theta / d` for a full-dimensional circuit: the `t*` of a single circuit.
pub fn circuit_tstar(positive: &[(LatticePoint, f64)], negative: &(LatticePoint, f64)) -> Result<f64> {
    let pts: Vec<&[i64]> = positive.iter().map(|(p, _)| p.0.as_slice()).collect();
    if pts.len() != negative.0 .0.len() + 1 {
        return Err(Error::Input("circuit is not full-dimensional".into()));
    }
    let b: Vec<Q> = negative.0 .0.iter().map(|&v| qi(v)).collect();
    let lambda = affine_coords(&pts, &b).ok_or_else(|| Error::Input("degenerate circuit".into()))?;
    if lambda.iter().any(|l| !l.is_positive()) {
        return Err(Error::Input("negative exponent is not interior".into()));
    }
    let mut theta = 1.0;
    for ((_, c), l) in positive.iter().zip(&lambda) {
        let l = crate::exact::to_f64(l);
        theta *= (c / l).powf(l);
    }
    Ok(theta / negative.1)
}

fn eval_grad_hess(terms: &[(Vec<f64>, f64)], y: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
    let n = y.len();
    let mut v = 0.0;
    let mut g = vec![0.0; n];
    let mut h = vec![vec![0.0; n]; n];
    for (e, c) in terms {
        let m = c * e.iter().zip(y).map(|(a, b)| a * b).sum::<f64>().exp();
        v += m;
        for i in 0..n {
            g[i] += e[i] * m;
            for j in 0..n {
                h[i][j] += e[i] * e[j] * m;
            }
        }
    }
    (v, g, h)
}

fn cholesky_solve(h: &[Vec<f64>], g: &[f64]) -> Option<Vec<f64>> {
    let n = g.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = h[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut z = vec![0.0; n];
    for i in 0..n {
        z[i] = (g[i] - (0..i).map(|k| l[i][k] * z[k]).sum::<f64>()) / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        x[i] = (z[i] - (i + 1..n).map(|k| l[k][i] * x[k]).sum::<f64>()) / l[i][i];
    }
    Some(x)
}

/// Smallest value of `f` found on log-uniform samples of `bounds`, after
/// refining the best ten samples with twenty Newton steps in log coordinates.
pub fn grid_min(f: &Signomial, bounds: &[(f64, f64)], samples: usize, seed: u64) -> (f64, Vec<f64>) {
    let terms: Vec<(Vec<f64>, f64)> =
        f.terms().into_iter().map(|(p, c)| (p.0.iter().map(|&v| v as f64).collect(), c)).collect();
    let value = |y: &[f64]| eval_grad_hess(&terms, y).0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let logs: Vec<(f64, f64)> = bounds.iter().map(|(a, b)| (a.ln(), b.ln())).collect();
    let mut pool: Vec<(f64, Vec<f64>)> = (0..samples.max(1))
        .map(|_| {
            let y: Vec<f64> = logs.iter().map(|(a, b)| rng.gen_range(*a..=*b)).collect();
            (value(&y), y)
        })
        .collect();
    pool.sort_by(|a, b| a.0.total_cmp(&b.0));
    pool.truncate(10);
    let mut best = pool[0].clone();
    for (mut v, mut y) in pool {
        for _ in 0..20 {
            let (_, g, h) = eval_grad_hess(&terms, &y);
            let dir = cholesky_solve(&h, &g).unwrap_or_else(|| g.clone());
            let mut step = 1.0;
            let mut moved = false;
            while step > 1e-12 {
                let cand: Vec<f64> = y.iter().zip(&dir).map(|(a, d)| a - step * d).collect();
                let cv = value(&cand);
                if cv < v {
                    v = cv;
                    y = cand;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if v < best.0 {
            best = (v, y);
        }
    }
    (best.0, best.1.iter().map(|v| v.exp()).collect())
}

fn rank_lifted(pts: &[&[i64]]) -> usize {
    let mut m: Vec<Vec<Q>> = pts.iter().map(|p| lifted(p)).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            let f = &m[r][c] / &m[rank][c];
            for k in c..cols {
                let v = &f * &m[rank][k];
                m[r][k] -= v;
            }
        }
        rank += 1;
    }
    rank
}

/// Signs of the affine dependence of a circuit, or `None` if `pts` is not one.
fn circuit_signs(pts: &[&[i64]]) -> Option<Vec<i32>> {
    let k = pts.len();
    if rank_lifted(pts) != k - 1 {
        return None;
    }
    // Reduced row echelon form of the lifted points as columns; the single
    // free column gives the dependence.
    let rows = pts[0].len() + 1;
    let mut m: Vec<Vec<Q>> = (0..rows).map(|r| pts.iter().map(|p| lifted(p)[r].clone()).collect()).collect();
    let mut pivots = Vec::new();
    for c in 0..k {
        let r0 = pivots.len();
        let Some(p) = (r0..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(r0, p);
        let inv = Q::one() / &m[r0][c];
        for v in m[r0].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != r0 && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for cc in 0..k {
                    let v = &f * &m[r0][cc];
                    m[r][cc] -= v;
                }
            }
        }
        pivots.push(c);
    }
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let mut x = vec![Q::zero(); k];
    x[free] = Q::one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -m[r][free].clone();
    }
    let signs: Vec<i32> = x.iter().map(|v| if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 }).collect();
    if signs.contains(&0) {
        return None;
    }
    Some(signs)
}

struct Config {
    pts: Vec<Vec<i64>>,
    d: usize,
}

impl Config {
    fn point(&self, i: usize) -> &[i64] {
        &self.pts[i]
    }

    /// Two simplices meet in a common face iff no circuit has its positive
    /// part in one and its negative part in the other.
    fn proper(&self, s: &[usize], t: &[usize]) -> bool {
        let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
        u.sort_unstable();
        u.dedup();
        let mut ok = true;
        for size in 2..=(self.d + 2).min(u.len()) {
            subsets(u.len(), size, &mut |idx| {
                let sel: Vec<usize> = idx.iter().map(|&i| u[i]).collect();
                let pts: Vec<&[i64]> = sel.iter().map(|&i| self.point(i)).collect();
                if let Some(sg) = circuit_signs(&pts) {
                    for flip in [1, -1] {
                        let plus_in_s = sel.iter().zip(&sg).all(|(i, v)| v * flip < 0 || s.contains(i));
                        let minus_in_t = sel.iter().zip(&sg).all(|(i, v)| v * flip > 0 || t.contains(i));
                        if plus_in_s && minus_in_t {
                            ok = false;
                            return false;
                        }
                    }
                }
                true
            });
            if !ok {
                return false;
            }
        }
        true
    }

    fn coords(&self, s: &[usize], b: &[Q]) -> Vec<Q> {
        let pts: Vec<&[i64]> = s.iter().map(|&i| self.point(i)).collect();
        affine_coords(&pts, b).expect("simplex is full-dimensional")
    }

    fn contains_closed(&self, s: &[usize], b: &[Q]) -> bool {
        self.coords(s, b).iter().all(|v| !v.is_negative())
    }

    /// Side of `p` relative to the facet `s \ {s[k]}`, oriented so that
    /// `s[k]` is positive.
    fn side(&self, s: &[usize], k: usize, p: &[i64]) -> i32 {
        let pq: Vec<Q> = p.iter().map(|&v| qi(v)).collect();
        let c = &self.coords(s, &pq)[k];
        if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        }
    }
}

fn subsets(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            let go = rec(i + 1, n, k, cur, f);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Nonseparability by brute force: every triangulation of `A+` using all
/// of its points must have a closed cell containing `A-`. Negative points
/// outside the interior of `conv(A+)` make the answer `false`.
pub fn brute_force_nonseparable(support: &SignedSupport) -> Result<bool> {
    let d = support.n();
    let pts: Vec<Vec<i64>> = support.a_plus().iter().map(|p| p.0.clone()).collect();
    if d > 3 || pts.len() > 8 {
        return Err(Error::Input("brute force is limited to n <= 3 and |A+| <= 8".into()));
    }
    let refs: Vec<&[i64]> = pts.iter().map(|v| v.as_slice()).collect();
    if rank_lifted(&refs) != d + 1 {
        return Err(Error::Input("A+ must be full-dimensional".into()));
    }
    let cfg = Config { pts, d };
    let np = cfg.pts.len();

    let mut simplices: Vec<Vec<usize>> = Vec::new();
    subsets(np, d + 1, &mut |idx| {
        let verts: Vec<&[i64]> = idx.iter().map(|&i| cfg.point(i)).collect();
        if rank_lifted(&verts) == d + 1 {
            let empty = (0..np).filter(|i| !idx.contains(i)).all(|i| {
                let p: Vec<Q> = cfg.point(i).iter().map(|&v| qi(v)).collect();
                !cfg.contains_closed(idx, &p)
            });
            if empty {
                simplices.push(idx.to_vec());
            }
        }
        true
    });

    let minus: Vec<Vec<Q>> =
        support.a_minus().iter().map(|b| b.0.iter().map(|&v| qi(v)).collect()).collect();
    let interior = minus.iter().all(|b| {
        simplices.iter().any(|s| cfg.contains_closed(s, b)) && !on_hull_boundary(&cfg, &simplices, b)
    });
    if !interior {
        return Ok(false);
    }

    let seed = generic_point(&cfg);
    let first: Vec<&Vec<usize>> = simplices
        .iter()
        .filter(|s| cfg.coords(s, &seed).iter().all(|v| v.is_positive()))
        .collect();
    let good = |s: &[usize]| minus.iter().all(|b| cfg.contains_closed(s, b));
    let mut all_ok = true;
    for s0 in first {
        let mut chosen = vec![s0.clone()];
        if !extend(&cfg, &simplices, &mut chosen, &good, &mut all_ok) {
            break;
        }
    }
    Ok(all_ok)
}

fn on_hull_boundary(cfg: &Config, simplices: &[Vec<usize>], b: &[Q]) -> bool {
    // A point is on the boundary iff it lies on a facet hyperplane with all
    // of A+ on one side.
    for s in simplices {
        let c = cfg.coords(s, b);
        for k in 0..s.len() {
            if !c[k].is_zero() {
                continue;
            }
            let sides: Vec<i32> = (0..cfg.pts.len()).map(|i| cfg.side(s, k, cfg.point(i))).collect();
            if sides.iter().all(|&v| v >= 0) {
                return true;
            }
        }
    }
    false
}

/// A rational point in the interior of `conv(A+)` off every hyperplane
/// spanned by points of `A+`.
fn generic_point(cfg: &Config) -> Vec<Q> {
    let np = cfg.pts.len();
    let d = cfg.d;
    let centroid: Vec<Q> =
        (0..d).map(|j| cfg.pts.iter().map(|p| qi(p[j])).sum::<Q>() / qi(np as i64)).collect();
    let mut scale = Q::new(1.into(), 7.into());
    loop {
        let p: Vec<Q> = (0..d).map(|j| &centroid[j] + &scale * qi(1 + 3 * j as i64 * (j as i64 + 1))).collect();
        let mut generic = true;
        subsets(np, d, &mut |idx| {
            let mut m: Vec<Vec<Q>> = idx.iter().map(|&i| lifted(cfg.point(i))).collect();
            m.push(std::iter::once(Q::one()).chain(p.iter().cloned()).collect());
            if det(m) .is_zero() {
                let verts: Vec<&[i64]> = idx.iter().map(|&i| cfg.point(i)).collect();
                if rank_lifted(&verts) == d {
                    generic = false;
                    return false;
                }
            }
            true
        });
        if generic {
            return p;
        }
        scale = scale / qi(3);
    }
}

fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Q::zero() };
        if p != c {
            m.swap(c, p);
            d = -d;
        }
        d *= m[c][c].clone();
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let v = &f * &m[c][k];
                m[r][k] -= v;
            }
        }
    }
    d
}

/// Depth-first completion of a partial triangulation across its open
/// facets. Returns `false` once a triangulation without a good cell is found.
fn extend(
    cfg: &Config,
    simplices: &[Vec<usize>],
    chosen: &mut Vec<Vec<usize>>,
    good: &dyn Fn(&[usize]) -> bool,
    all_ok: &mut bool,
) -> bool {
    let open = open_facet(cfg, chosen);
    let Some((facet, away)) = open else {
        if !chosen.iter().any(|s| good(s)) {
            *all_ok = false;
            return false;
        }
        return true;
    };
    for cand in simplices {
        if chosen.contains(cand) || !facet.iter().all(|i| cand.contains(i)) {
            continue;
        }
        let apex = *cand.iter().find(|i| !facet.contains(i)).unwrap();
        if side_of_facet(cfg, &facet, away, apex) >= 0 {
            continue;
        }
        if chosen.iter().all(|s| cfg.proper(s, cand)) {
            chosen.push(cand.clone());
            let go = extend(cfg, simplices, chosen, good, all_ok);
            chosen.pop();
            if !go {
                return false;
            }
        }
    }
    true
}

/// Sign of `p` relative to `aff(facet)`, positive on the side of `away`.
fn side_of_facet(cfg: &Config, facet: &[usize], away: usize, p: usize) -> i32 {
    let mut s = facet.to_vec();
    s.push(away);
    cfg.side(&s, s.len() - 1, cfg.point(p))
}

/// A facet used by exactly one chosen simplex and not on the hull boundary,
/// with the apex of that simplex.
fn open_facet(cfg: &Config, chosen: &[Vec<usize>]) -> Option<(Vec<usize>, usize)> {
    let mut best: Option<(Vec<usize>, usize)> = None;
    for s in chosen {
        for k in 0..s.len() {
            let facet: Vec<usize> = s.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| *v).collect();
            let shared = chosen.iter().filter(|t| facet.iter().all(|i| t.contains(i))).count();
            if shared > 1 {
                continue;
            }
            let beyond = (0..cfg.pts.len()).any(|p| side_of_facet(cfg, &facet, s[k], p) < 0);
            if beyond && best.as_ref().map_or(true, |(f, _)| facet < *f) {
                best = Some((facet, s[k]));
            }
        }
    }
    best
}

//! Critical system `F(c, x) = C (c * x^A)` of a lifted signomial and the
//! parameter homotopy used to track its positive solution, both in
//! logarithmic coordinates `z = (tau, y) = (log t, log x)`.

use super::Signomial;
use crate::error::{Error, Result};
use crate::exact::{q, to_f64, LinearProgram, LpOutcome, Relation, Q};
use crate::geometry::{affine_dim, LatticePoint, SignedSupport};
use crate::numeric::{compensated_sum, max_norm};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Largest exponent accepted before `exp` is treated as an overflow.
const EXP_LIMIT: f64 = 700.0;

/// Positive integer heights on the negative support; zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightFunction {
    heights: BTreeMap<LatticePoint, u32>,
}

impl HeightFunction {
    /// `h = 1` on every negative exponent.
    pub fn uniform(support: &SignedSupport) -> Self {
        HeightFunction { heights: support.a_minus().iter().map(|b| (b.clone(), 1)).collect() }
    }

    /// Heights listed in the canonical order of `a_minus`.
    pub fn from_minus(support: &SignedSupport, hs: &[u32]) -> Result<Self> {
        if hs.len() != support.a_minus().len() {
            return Err(Error::Input(format!(
                "{} heights given for {} negative terms",
                hs.len(),
                support.a_minus().len()
            )));
        }
        if hs.contains(&0) {
            return Err(Error::Input("heights on negative terms must be at least 1".into()));
        }
        Ok(HeightFunction {
            heights: support.a_minus().iter().cloned().zip(hs.iter().copied()).collect(),
        })
    }

    /// `uniform`, a single integer for all negative terms, or a comma list in
    /// the canonical order of the negative terms.
    pub fn parse(spec: &str, support: &SignedSupport) -> Result<Self> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("uniform") {
            return Ok(Self::uniform(support));
        }
        let hs: Vec<u32> = spec
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Input(format!("bad height specification '{spec}'")))?;
        if hs.len() == 1 && support.a_minus().len() != 1 {
            return Self::from_minus(support, &vec![hs[0]; support.a_minus().len()]);
        }
        Self::from_minus(support, &hs)
    }

    pub fn get(&self, p: &LatticePoint) -> u32 {
        self.heights.get(p).copied().unwrap_or(0)
    }

    /// The heights carried along an exponent map, e.g. truncation (identity
    /// on kept points) or lattice reduction.
    pub fn transport(
        &self,
        target: &SignedSupport,
        map: impl Fn(&LatticePoint) -> Result<LatticePoint>,
    ) -> Result<Self> {
        let mut heights = BTreeMap::new();
        for (p, &h) in &self.heights {
            let m = map(p)?;
            if target.a_minus().binary_search(&m).is_ok() {
                heights.insert(m, h);
            }
        }
        let out = HeightFunction { heights };
        out.check(target)?;
        Ok(out)
    }

    fn check(&self, support: &SignedSupport) -> Result<()> {
        for b in support.a_minus() {
            if self.get(b) == 0 {
                return Err(Error::Input(format!("no height for negative exponent {b}")));
            }
        }
        for p in self.heights.keys() {
            if support.a_minus().binary_search(p).is_err() {
                return Err(Error::Input(format!("height given for {p}, which is not a negative exponent")));
            }
        }
        Ok(())
    }

    /// Heights in the canonical order of `support.all()`.
    pub fn canonical(&self, support: &SignedSupport) -> Vec<u32> {
        support.all().iter().map(|p| self.get(p)).collect()
    }
}

/// Residual of a system and the magnitude sum of each row, used to scale it.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Evaluation {
    /// Max over rows of `|value| / scale`.
    pub fn scaled_norm(&self) -> f64 {
        self.value
            .iter()
            .zip(&self.scale)
            .map(|(v, s)| if *s > 0.0 { v.abs() / s } else { v.abs() })
            .fold(0.0, f64::max)
    }
}

/// Critical system of the lifted signomial `f_t`.
#[derive(Debug, Clone)]
pub struct CriticalSystem {
    n: usize,
    exps: Vec<Vec<i64>>,
    sigma: Vec<i64>,
    heights: Vec<u32>,
    c: Vec<f64>,
}

/// Assemble the critical system of `f` lifted by `h`.
pub fn build_critical_system(f: &Signomial, h: &HeightFunction) -> Result<CriticalSystem> {
    h.check(f.support())?;
    let support = f.support();
    Ok(CriticalSystem {
        n: f.n(),
        exps: support.all().into_iter().map(|p| p.0).collect(),
        sigma: (0..f.len()).map(|i| if support.is_minus(i) { -1 } else { 1 }).collect(),
        heights: h.canonical(support),
        c: f.nonsigned(),
    })
}

impl CriticalSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of equations and unknowns, `n + 1`.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn num_terms(&self) -> usize {
        self.exps.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn exponents(&self) -> &[Vec<i64>] {
        &self.exps
    }

    pub fn signs(&self) -> &[i64] {
        &self.sigma
    }

    /// The exponent matrix `A` (n x m).
    pub fn a_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.exps.iter().map(|e| e[i]).collect()).collect()
    }

    /// `C = A_hat diag(sigma)` ((n+1) x m).
    pub fn c_matrix(&self) -> Vec<Vec<i64>> {
        (0..=self.n).map(|i| (0..self.exps.len()).map(|a| self.entry(i, a)).collect()).collect()
    }

    #[inline]
    pub(crate) fn entry(&self, i: usize, a: usize) -> i64 {
        if i == 0 {
            self.sigma[a]
        } else {
            self.sigma[a] * self.exps[a][i - 1]
        }
    }

    /// Exponent `h(a) tau + <a, y>` of every term.
    pub(crate) fn log_monomials(&self, z: &[f64]) -> Vec<f64> {
        self.exps
            .iter()
            .zip(&self.heights)
            .map(|(e, &h)| h as f64 * z[0] + e.iter().zip(&z[1..]).map(|(a, y)| *a as f64 * y).sum::<f64>())
            .collect()
    }

    fn terms(&self, coefs: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.size() {
            return Err(Error::Input(format!("expected {} coordinates", self.size())));
        }
        self.log_monomials(z)
            .into_iter()
            .zip(coefs)
            .map(|(arg, c)| {
                if arg > EXP_LIMIT || !arg.is_finite() {
                    Err(Error::Numeric("exponential overflow".into()))
                } else {
                    Ok(c * arg.exp())
                }
            })
            .collect()
    }

    /// `F(coefs * t^h, x)` at `z = (tau, y)`.
    pub fn eval_with(&self, coefs: &[f64], z: &[f64]) -> Result<Evaluation> {
        let w = self.terms(coefs, z)?;
        let mut value = Vec::with_capacity(self.size());
        let mut scale = Vec::with_capacity(self.size());
        for i in 0..self.size() {
            value.push(compensated_sum((0..w.len()).map(|a| self.entry(i, a) as f64 * w[a])));
            scale.push((0..w.len()).map(|a| (self.entry(i, a) as f64 * w[a]).abs()).sum());
        }
        Ok(Evaluation { value, scale })
    }

    /// Jacobian in `(tau, y)`.
    pub fn jacobian_with(&self, coefs: &[f64], z: &[f64]) -> Result<Vec<Vec<f64>>> {
        let w = self.terms(coefs, z)?;
        let m = w.len();
        Ok((0..self.size())
            .map(|i| {
                let mut row = Vec::with_capacity(self.size());
                row.push(compensated_sum((0..m).map(|a| self.entry(i, a) as f64 * self.heights[a] as f64 * w[a])));
                for j in 0..self.n {
                    row.push(compensated_sum((0..m).map(|a| self.entry(i, a) as f64 * self.exps[a][j] as f64 * w[a])));
                }
                row
            })
            .collect())
    }

    pub fn eval(&self, z: &[f64]) -> Result<Evaluation> {
        self.eval_with(&self.c, z)
    }

    pub fn jacobian(&self, z: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.jacobian_with(&self.c, z)
    }
}

/// `H(s, z) = F((s c + (1 - s) c_hat) * t^h, x)`.
#[derive(Debug, Clone)]
pub struct ParameterHomotopy {
    pub system: CriticalSystem,
    pub start: Vec<f64>,
    start_exact: Vec<Q>,
}

impl ParameterHomotopy {
    /// `start` must solve the start system at `z = 0` exactly.
    pub fn new(system: CriticalSystem, start: Vec<Q>) -> Result<Self> {
        if start.len() != system.num_terms() {
            return Err(Error::Input("start coefficient vector has the wrong length".into()));
        }
        for i in 0..system.size() {
            let r: Q = (0..start.len()).map(|a| q(system.entry(i, a)) * &start[a]).sum();
            if !r.is_zero() {
                return Err(Error::Contract("start coefficients do not solve the start system".into()));
            }
        }
        let start_f: Vec<f64> = start.iter().map(to_f64).collect();
        let ph = ParameterHomotopy { system, start: start_f, start_exact: start };
        let res = ph.eval(0.0, &vec![0.0; ph.system.size()])?;
        if max_norm(&res.value) > 1e-12 {
            return Err(Error::Numeric("start residual above 1e-12 after rounding".into()));
        }
        Ok(ph)
    }

    pub fn start_exact(&self) -> &[Q] {
        &self.start_exact
    }

    pub fn target(&self) -> &[f64] {
        &self.system.c
    }

    pub fn coefficients_at(&self, s: f64) -> Vec<f64> {
        if s == 1.0 {
            return self.system.c.clone();
        }
        self.system.c.iter().zip(&self.start).map(|(c, h)| s * c + (1.0 - s) * h).collect()
    }

    pub fn eval(&self, s: f64, z: &[f64]) -> Result<Evaluation> {
        self.system.eval_with(&self.coefficients_at(s), z)
    }

    /// Jacobian in `z` and the derivative in `s`.
    pub fn jac(&self, s: f64, z: &[f64]) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        let jz = self.system.jacobian_with(&self.coefficients_at(s), z)?;
        let diff: Vec<f64> = self.system.c.iter().zip(&self.start).map(|(c, h)| c - h).collect();
        let ds = self.system.eval_with(&diff, z)?.value;
        Ok((jz, ds))
    }
}

/// Start coefficients: the convex coordinates of `b1` with respect to
/// `A+` maximizing the smallest one, `1` at `b1` and `0` at other negative
/// points. Exact. The support must be full-dimensional.
pub fn starting_coefficients(support: &SignedSupport) -> Result<Vec<Q>> {
    let n = support.n();
    if support.a_minus().is_empty() {
        return Err(Error::Input("no negative terms".into()));
    }
    if affine_dim(&support.all())? != n {
        return Err(Error::Contract("support is not full-dimensional".into()));
    }
    let plus = support.a_plus();
    let b1 = &support.a_minus()[0];
    let k = plus.len();
    let mut lp = LinearProgram::new(k + 1);
    lp.objective[k] = Q::one();
    for a in 0..k {
        let mut row = vec![Q::zero(); k + 1];
        row[a] = Q::one();
        row[k] = -Q::one();
        lp.add(row, Relation::Ge, Q::zero());
    }
    let mut ones = vec![Q::one(); k + 1];
    ones[k] = Q::zero();
    lp.add(ones, Relation::Eq, Q::one());
    for j in 0..n {
        let mut row: Vec<Q> = plus.iter().map(|a| q(a.0[j])).collect();
        row.push(Q::zero());
        lp.add(row, Relation::Eq, q(b1.0[j]));
    }
    match lp.solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let mut out: Vec<Q> = x[..k].to_vec();
            out.push(Q::one());
            out.extend((1..support.a_minus().len()).map(|_| Q::zero()));
            Ok(out)
        }
        _ => Err(Error::Input(format!("{b1} is not in the interior of conv(A+)"))),
    }
}

//! Signomials with integer exponents, their truncations and critical systems.

mod parse;
mod system;

pub use parse::{parse_json, parse_polynomial, parse_text, to_json, to_text};
pub use system::{
    build_critical_system, starting_coefficients, CriticalSystem, Evaluation, HeightFunction,
    ParameterHomotopy,
};

use crate::error::{Error, Result};
use crate::exact::{to_f64, Q};
use crate::geometry::{hull_vertices, reduce_to_full_dim, AffineLatticeMap, Face, LatticePoint, SignedSupport};
use crate::numeric::compensated_sum;
use num_traits::Zero;
use serde::Serialize;

/// `f = sum_{A+} c_a x^a - sum_{A-} c_b x^b` with coefficients in canonical
/// support order (`a_plus` first, each block sorted).
#[derive(Debug, Clone, PartialEq)]
pub struct Signomial {
    support: SignedSupport,
    coeffs: Vec<f64>,
    exact: Option<Vec<Q>>,
}

/// Outcome of the sign-pattern precheck.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignClass {
    TriviallyCopositive,
    TriviallyNegative,
    NeedsCriterion,
}

impl Signomial {
    /// Build from signed terms. Zero or non-finite coefficients and repeated
    /// exponents are rejected.
    pub fn new(terms: Vec<(LatticePoint, f64)>) -> Result<Self> {
        Self::build(terms.into_iter().map(|(p, c)| (p, c, None)).collect())
    }

    /// Build from exact signed coefficients; the float coefficients are the
    /// nearest binary64 values.
    pub fn from_exact(terms: Vec<(LatticePoint, Q)>) -> Result<Self> {
        Self::build(terms.into_iter().map(|(p, c)| (p, to_f64(&c), Some(c))).collect())
    }

    fn build(terms: Vec<(LatticePoint, f64, Option<Q>)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Input("polynomial has no terms".into()));
        }
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (p, c, e) in &terms {
            if !c.is_finite() {
                return Err(Error::Input(format!("coefficient of x^{p} is not finite")));
            }
            let zero = e.as_ref().map_or(*c == 0.0, |q| q.is_zero());
            if zero || *c == 0.0 {
                return Err(Error::Input(format!("coefficient of x^{p} is zero")));
            }
            if *c > 0.0 {
                plus.push(p.clone());
            } else {
                minus.push(p.clone());
            }
        }
        if plus.is_empty() {
            return Err(Error::Input(
                "no positive terms: the polynomial is negative on the whole orthant".into(),
            ));
        }
        let support = SignedSupport::new(plus, minus)?;
        let mut coeffs = vec![0.0; terms.len()];
        let all_exact = terms.iter().all(|t| t.2.is_some());
        let mut exact = vec![Q::zero(); terms.len()];
        for (p, c, e) in terms {
            let i = support.index_of(&p).expect("term in support");
            coeffs[i] = c;
            if let Some(e) = e {
                exact[i] = e;
            }
        }
        Ok(Signomial { support, coeffs, exact: all_exact.then_some(exact) })
    }

    pub fn support(&self) -> &SignedSupport {
        &self.support
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.support.n()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Signed coefficients in canonical order.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Absolute values of the coefficients in canonical order.
    pub fn nonsigned(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.abs()).collect()
    }

    /// Exact signed coefficients, when every input literal was rational.
    pub fn exact(&self) -> Option<&[Q]> {
        self.exact.as_deref()
    }

    /// `(exponent, signed coefficient)` in canonical order.
    pub fn terms(&self) -> Vec<(LatticePoint, f64)> {
        self.support.all().into_iter().zip(self.coeffs.iter().copied()).collect()
    }

    fn select(&self, keep: &[usize], map: impl Fn(&LatticePoint) -> Result<LatticePoint>) -> Result<Signomial> {
        let all = self.support.all();
        let mut terms = Vec::with_capacity(keep.len());
        for &i in keep {
            let p = map(&all[i])?;
            let e = self.exact.as_ref().map(|e| e[i].clone());
            terms.push((p, self.coeffs[i], e));
        }
        if terms.is_empty() {
            return Err(Error::Input("truncation has empty support".into()));
        }
        Signomial::build(terms)
    }

    /// Re-express in the lattice coordinates of the support's affine hull.
    pub fn reduce_to_full_dim(&self) -> Result<(AffineLatticeMap, Signomial)> {
        let (map, _) = reduce_to_full_dim(&self.support)?;
        let keep: Vec<usize> = (0..self.len()).collect();
        let g = self.select(&keep, |p| map.apply(p))?;
        Ok((map, g))
    }
}

/// `f(x)` with compensated summation.
pub fn evaluate(f: &Signomial, x: &[f64]) -> Result<f64> {
    if x.len() != f.n() {
        return Err(Error::Input(format!("expected {} coordinates, got {}", f.n(), x.len())));
    }
    if x.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Input("evaluation point must be strictly positive".into()));
    }
    Ok(compensated_sum(
        f.support
            .all()
            .iter()
            .zip(&f.coeffs)
            .map(|(p, c)| c * monomial(x, &p.0)),
    ))
}

pub(crate) fn monomial(x: &[f64], e: &[i64]) -> f64 {
    x.iter().zip(e).map(|(xi, &ei)| xi.powi(ei as i32)).product()
}

/// Classify by the signs at hull vertices.
pub fn sign_precheck(f: &Signomial) -> Result<SignClass> {
    if f.support.a_minus().is_empty() {
        return Ok(SignClass::TriviallyCopositive);
    }
    let verts = hull_vertices(&f.support.all())?;
    if verts.iter().any(|&i| f.support.is_minus(i)) {
        return Ok(SignClass::TriviallyNegative);
    }
    Ok(SignClass::NeedsCriterion)
}

/// Restriction of `f` to the terms on `gamma`.
pub fn truncate(f: &Signomial, gamma: &Face) -> Result<Signomial> {
    if gamma.points.iter().any(|&i| i >= f.len()) {
        return Err(Error::Input("face does not belong to this support".into()));
    }
    f.select(&gamma.points, |p| Ok(p.clone()))
}

/// `w -> f(x_star * w)`: each coefficient is multiplied by `x_star^a`.
pub fn rescale_to_one(f: &Signomial, x_star: &[f64]) -> Result<Signomial> {
    if x_star.len() != f.n() || x_star.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Input("rescaling point must be strictly positive".into()));
    }
    let terms = f
        .terms()
        .into_iter()
        .map(|(p, c)| {
            let m = monomial(x_star, &p.0);
            (p, c * m)
        })
        .collect();
    Signomial::new(terms)
}

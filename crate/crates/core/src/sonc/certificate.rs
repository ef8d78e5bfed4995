use super::circuit::{circuit_number, CircuitPolynomial};
use super::delta::{solve_delta, DeltaSolution};
use crate::certify::certify_endpoint;
use crate::error::{Error, Result};
use crate::exact::{rationalize, solve_unique, to_f64, Matrix, Q};
use crate::geometry::{simplices_containing_cell, LatticePoint};
use crate::numeric::compensated_sum;
use crate::signomial::{monomial, sign_precheck, HeightFunction, SignClass, Signomial};
use crate::tracker::{build_homotopy, prepare_nonseparable, track_single_path, TrackerConfig};
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const NEAR_BOUNDARY: &str = "NEAR-BOUNDARY";

#[derive(Debug, Clone)]
pub struct SoncCertificate {
    pub circuits: Vec<CircuitPolynomial>,
    pub target: Signomial,
    /// Largest coefficient mismatch between the circuit sum and `target`,
    /// relative to the largest target coefficient.
    pub residual: f64,
    /// `Theta - d` per circuit; `None` for single monomials.
    pub margins: Vec<Option<f64>>,
    pub warnings: Vec<String>,
    /// The `t*` the circuits were built at; `None` for trivial inputs.
    pub t_star: Option<f64>,
    pub delta: Option<DeltaSolution>,
}

impl SoncCertificate {
    pub fn to_json(&self) -> Value {
        let term = |(e, c): &(LatticePoint, f64)| json!({ "e": e, "c": c });
        let circuits: Vec<Value> = self
            .circuits
            .iter()
            .map(|q| {
                json!({
                    "plus": q.positive.iter().map(term).collect::<Vec<_>>(),
                    "minus": q.negative.as_ref().map(term),
                })
            })
            .collect();
        json!({
            "circuits": circuits,
            "residual": self.residual,
            "margins": self.margins,
            "warnings": self.warnings,
            "t_star": self.t_star,
            "delta": self.delta,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub residual: f64,
    /// Exponent where the circuit sum is furthest from the target.
    pub worst_exponent: Option<LatticePoint>,
    /// Circuits that are invalid or have `d > Theta (1 + 1e-10)`.
    pub failing_circuits: Vec<usize>,
    pub messages: Vec<String>,
}

fn monomials(f: &Signomial, keep: impl Fn(usize) -> bool) -> Vec<CircuitPolynomial> {
    f.terms()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep(*i))
        .map(|(_, t)| CircuitPolynomial { positive: vec![t], negative: None })
        .collect()
}

/// Rationalize the rescaled coefficients and move the positive ones by the
/// least-norm correction that makes the all-ones point an exact singular zero.
fn singular_coefficients(plus: &[LatticePoint], minus: &[LatticePoint], approx: &[f64]) -> Result<Vec<Q>> {
    let mut c: Vec<Q> = approx.iter().map(|v| rationalize(*v, 1e-12)).collect();
    let hat = |p: &LatticePoint| -> Vec<Q> {
        std::iter::once(Q::from_integer(1.into()))
            .chain(p.0.iter().map(|v| Q::from_integer((*v).into())))
            .collect()
    };
    let m = plus[0].0.len() + 1;
    let cols: Vec<Vec<Q>> = plus.iter().map(hat).collect();
    let mut r = vec![Q::zero(); m];
    for (j, b) in minus.iter().enumerate() {
        for (ri, bi) in r.iter_mut().zip(hat(b)) {
            *ri += &c[plus.len() + j] * bi;
        }
    }
    for (a, col) in cols.iter().enumerate() {
        for (ri, ai) in r.iter_mut().zip(col) {
            *ri -= &c[a] * ai;
        }
    }
    let gram: Matrix = (0..m)
        .map(|i| (0..m).map(|k| cols.iter().map(|col| &col[i] * &col[k]).sum()).collect())
        .collect();
    let u = solve_unique(&gram, &r).ok_or_else(|| Error::Contract("positive support is not full-dimensional".into()))?;
    for (a, col) in cols.iter().enumerate() {
        let d: Q = col.iter().zip(&u).map(|(x, y)| x * y).sum();
        c[a] += d;
        if !c[a].is_positive() {
            return Err(Error::Numeric("singular-point correction made a coefficient nonpositive".into()));
        }
    }
    Ok(c)
}

/// Certificate that `f` is a sum of nonnegative circuit polynomials, built
/// from the singular zero of `f_{t*}`.
pub fn sonc_certificate(f: &Signomial, h: &HeightFunction, cfg: &TrackerConfig) -> Result<SoncCertificate> {
    match sign_precheck(f)? {
        SignClass::TriviallyNegative => {
            return Err(Error::NotCopositive("a vertex of the Newton polytope has a negative coefficient".into()))
        }
        SignClass::TriviallyCopositive => {
            let mut cert = SoncCertificate {
                circuits: monomials(f, |_| true),
                target: f.clone(),
                residual: 0.0,
                margins: vec![None; f.len()],
                warnings: vec![],
                t_star: None,
                delta: None,
            };
            cert.residual = verify_certificate(&cert).residual;
            return Ok(cert);
        }
        SignClass::NeedsCriterion => {}
    }
    let (rp, witness) = prepare_nonseparable(f, h)?;
    let ph = build_homotopy(&rp)?;
    let track = track_single_path(&ph, cfg);
    if !track.converged {
        return Err(Error::Numeric(format!("path tracking failed: {:?}", track.failure_reason)));
    }
    let t_star = track.t_star;
    let mut warnings = Vec::new();
    let bx = certify_endpoint(&ph.system, &track.tau_y);
    if bx.unique && bx.t_interval.hi < 1.0 {
        return Err(Error::NotCopositive(format!("t* in {} is below 1", bx.t_interval)));
    }
    if !bx.unique || bx.t_interval.contains(1.0) {
        warnings.push(format!("{NEAR_BOUNDARY}: t* = {t_star:.17e} is not certified away from 1"));
    }

    let g = &rp.reduced;
    let sup = g.support();
    let (plus, minus) = (sup.a_plus(), sup.a_minus());
    let np = plus.len();
    let w = &track.x_star;
    let hts = rp.heights.canonical(sup);
    let nonsigned = g.nonsigned();
    let approx: Vec<f64> = sup
        .all()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let tpow = if i < np { 1.0 } else { t_star.powi(hts[i] as i32) };
            nonsigned[i] * tpow * monomial(w, &p.0)
        })
        .collect();
    let c = singular_coefficients(plus, minus, &approx)?;
    let family = simplices_containing_cell(sup, &witness)?;
    let delta = solve_delta(&family, sup, &c)?;

    let mut circuits = Vec::new();
    for &k in &delta.support_j {
        let dk = &delta.delta[k];
        for (j, b) in minus.iter().enumerate() {
            let cb = &c[np + j];
            let positive = family.simplices[k]
                .iter()
                .zip(&family.lambda[k][j])
                .filter(|(_, l)| l.is_positive())
                .map(|(&a, l)| {
                    let coef = to_f64(&(dk * l * cb)) / monomial(w, &plus[a].0);
                    (rp.map.inverse(&plus[a]), coef)
                })
                .collect();
            let d = to_f64(dk) * nonsigned[np + j];
            circuits.push(CircuitPolynomial { positive, negative: Some((rp.map.inverse(b), d)) });
        }
    }
    let on_gamma: Vec<bool> = (0..f.len()).map(|i| rp.gamma.contains_index(i)).collect();
    circuits.extend(monomials(f, |i| !on_gamma[i]));
    let margins = circuits
        .iter()
        .map(|q| q.negative.as_ref().map(|(_, d)| circuit_number(q).map_or(f64::NAN, |t| t - d)))
        .collect();
    let mut cert = SoncCertificate {
        circuits,
        target: f.clone(),
        residual: 0.0,
        margins,
        warnings,
        t_star: Some(t_star),
        delta: Some(delta),
    };
    cert.residual = verify_certificate(&cert).residual;
    Ok(cert)
}

/// Recompute the circuit sum and every circuit inequality from scratch.
pub fn verify_certificate(cert: &SoncCertificate) -> VerificationReport {
    let mut sums: BTreeMap<LatticePoint, Vec<f64>> = BTreeMap::new();
    let mut failing = Vec::new();
    let mut messages = Vec::new();
    for (i, q) in cert.circuits.iter().enumerate() {
        for (e, c) in &q.positive {
            if !(*c > 0.0) {
                failing.push(i);
                messages.push(format!("circuit {i}: nonpositive coefficient at {e}"));
            }
            sums.entry(e.clone()).or_default().push(*c);
        }
        if let Some((b, d)) = &q.negative {
            sums.entry(b.clone()).or_default().push(-d);
            match circuit_number(q) {
                Ok(theta) if *d <= theta * (1.0 + 1e-10) => {}
                Ok(theta) => {
                    failing.push(i);
                    messages.push(format!("circuit {i}: d = {d:e} exceeds Theta = {theta:e}"));
                }
                Err(e) => {
                    failing.push(i);
                    messages.push(format!("circuit {i}: {e}"));
                }
            }
        }
    }
    let target: BTreeMap<LatticePoint, f64> = cert.target.terms().into_iter().collect();
    let scale = target.values().fold(0.0f64, |m, c| m.max(c.abs())).max(f64::MIN_POSITIVE);
    let mut residual = 0.0f64;
    let mut worst = None;
    let keys: std::collections::BTreeSet<&LatticePoint> = sums.keys().chain(target.keys()).collect();
    for e in keys {
        let s = sums.get(e).map_or(0.0, |v| compensated_sum(v.iter().copied()));
        let err = (s - target.get(e).copied().unwrap_or(0.0)).abs() / scale;
        if err > residual || err.is_nan() {
            residual = err;
            worst = Some(e.clone());
        }
    }
    let ok_sum = residual <= 1e-8;
    if !ok_sum {
        messages.push(format!("coefficient mismatch {residual:e} at {}", worst.as_ref().unwrap()));
    }
    failing.dedup();
    VerificationReport {
        pass: ok_sum && failing.is_empty(),
        residual,
        worst_exponent: worst,
        failing_circuits: failing,
        messages,
    }
}

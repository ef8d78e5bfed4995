use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::geometry::{barycentric_coordinates, LatticePoint};
use crate::signomial::{build_critical_system, HeightFunction, Signomial};
use serde::Serialize;

/// `sum_i c_i x^{a_i} - d x^b` with affinely independent `a_i`; `negative`
/// holds `(b, d)` with `d > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitPolynomial {
    pub positive: Vec<(LatticePoint, f64)>,
    pub negative: Option<(LatticePoint, f64)>,
}

/// `Theta = prod (c_i / lambda_i)^lambda_i` where `lambda` are the
/// barycentric coordinates of `b`; computed in log space.
pub fn circuit_number(circuit: &CircuitPolynomial) -> Result<f64> {
    let (b, _) = circuit
        .negative
        .as_ref()
        .ok_or_else(|| Error::Input("circuit has no negative term".into()))?;
    let pts: Vec<LatticePoint> = circuit.positive.iter().map(|(p, _)| p.clone()).collect();
    let lambda = barycentric_coordinates(&pts, b)?;
    if lambda.iter().any(|l| !crate::exact::is_positive(l)) {
        return Err(Error::Input(format!("{b} is not in the relative interior of the circuit")));
    }
    let log: f64 = circuit
        .positive
        .iter()
        .zip(&lambda)
        .map(|((_, c), l)| {
            let l = to_f64(l);
            l * (c.ln() - l.ln())
        })
        .sum();
    Ok(log.exp())
}

/// No negative term, or `d <= Theta (1 + 1e-12)`.
pub fn is_circuit_copositive(circuit: &CircuitPolynomial) -> bool {
    match &circuit.negative {
        None => true,
        Some((_, d)) => circuit_number(circuit).is_ok_and(|t| *d <= t * (1.0 + 1e-12)),
    }
}

/// Split `f`, whose positive exponents are affinely independent and which
/// is singular at the all-ones point, into one circuit per negative term:
/// `q_b = c_b (sum_a lambda^b_a x^a - x^b)`.
pub fn extended_circuit_decomposition(f: &Signomial) -> Result<Vec<CircuitPolynomial>> {
    let plus = f.support().a_plus();
    let sys = build_critical_system(f, &HeightFunction::uniform(f.support()))?;
    let res = sys.eval(&vec![0.0; f.n() + 1])?;
    if res.scaled_norm() > 1e-8 {
        return Err(Error::Input(format!(
            "not singular at the all-ones point (scaled residual {:.2e})",
            res.scaled_norm()
        )));
    }
    let coeffs = f.nonsigned();
    let k = plus.len();
    let mut out = Vec::new();
    for (j, b) in f.support().a_minus().iter().enumerate() {
        let lambda = barycentric_coordinates(plus, b)?;
        let cb = coeffs[k + j];
        let positive = plus
            .iter()
            .zip(&lambda)
            .filter(|(_, l)| crate::exact::is_positive(l))
            .map(|(a, l)| (a.clone(), cb * to_f64(l)))
            .collect();
        out.push(CircuitPolynomial { positive, negative: Some((b.clone(), cb)) });
    }
    Ok(out)
}

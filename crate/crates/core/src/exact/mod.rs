//! Exact rational arithmetic: dense linear algebra and a simplex LP solver.

mod linalg;
mod lp;

pub use linalg::{det, nullspace, rank, rref, solve_unique, Matrix};
pub use lp::{Constraint, LinearProgram, LpOutcome, Relation};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

/// Exact value of a finite float.
pub fn q_from_f64(x: f64) -> Option<Q> {
    Q::from_f64(x)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerator/denominator: divide in the log domain.
        let (n, d) = (x.numer(), x.denom());
        let ln = |v: &BigInt| {
            let bits = v.bits() as i64;
            let shift = (bits - 60).max(0);
            let top = (v.abs() >> shift as usize).to_f64().unwrap_or(0.0);
            top.ln() + shift as f64 * std::f64::consts::LN_2
        };
        let s = if x.is_negative() { -1.0 } else { 1.0 };
        s * (ln(n) - ln(d)).exp()
    })
}

/// Best rational approximation by continued fractions, stopping once the
/// relative error is at most `rel_tol`.
pub fn rationalize(x: f64, rel_tol: f64) -> Q {
    if x == 0.0 || !x.is_finite() {
        return Q::zero();
    }
    let target = x.abs();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = target;
    let mut best = Q::from_f64(target).unwrap();
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from_f64(a).unwrap();
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        let cand = Q::new(h2.clone(), k2.clone());
        if ((to_f64(&cand) - target) / target).abs() <= rel_tol {
            best = cand;
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac <= 0.0 {
            best = Q::new(h1.clone(), k1.clone());
            break;
        }
        r = 1.0 / frac;
    }
    if x < 0.0 {
        -best
    } else {
        best
    }
}

/// Parse a decimal literal such as `-1.25e-3` into an exact rational.
pub fn parse_decimal(s: &str) -> Option<Q> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp)
        .parse()
        .ok()?;
    let e = exp - fp.len() as i64;
    if e.unsigned_abs() > 4000 {
        return None;
    }
    let ten = BigInt::from(10);
    let mut v = Q::from_integer(digits);
    let p = Q::from_integer(num_traits::pow(ten, e.unsigned_abs() as usize));
    if e >= 0 {
        v *= p;
    } else {
        v /= p;
    }
    Some(if neg { -v } else { v })
}

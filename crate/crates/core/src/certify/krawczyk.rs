//! Krawczyk test for the critical system at `s = 1`:
//! `K(B) = m - Y G(m) + (I - Y J(B)) (B - m)` with `Y` an approximate
//! inverse of `J(m)`. `K(B)` inside the interior of `B` proves that `B`
//! holds exactly one zero. After success the box is contracted by
//! iterating `B <- K(B) ∩ B`.

use super::Interval;
use crate::numeric::Lu;
use crate::signomial::CriticalSystem;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifiedBox {
    pub center: Vec<f64>,
    pub radius: Vec<f64>,
    pub unique: bool,
    /// Final enclosure in `(tau, y)`.
    pub enclosure: Vec<Interval>,
    /// Outward `exp` of the `tau` component.
    pub t_interval: Interval,
    /// Radius at which the Krawczyk test first succeeded.
    pub certified_radius: Option<f64>,
}

fn terms(sys: &CriticalSystem, b: &[Interval]) -> Vec<Interval> {
    sys.exponents()
        .iter()
        .zip(sys.heights())
        .zip(sys.coefficients())
        .map(|((e, &h), &c)| {
            let mut arg = b[0].scale(h as f64);
            for (a, y) in e.iter().zip(&b[1..]) {
                if *a != 0 {
                    arg = arg + y.scale(*a as f64);
                }
            }
            arg.exp().scale(c)
        })
        .collect()
}

fn sum(it: impl Iterator<Item = Interval>) -> Interval {
    it.fold(Interval::point(0.0), |a, b| a + b)
}

fn eval_box(sys: &CriticalSystem, b: &[Interval]) -> Vec<Interval> {
    let w = terms(sys, b);
    (0..sys.size())
        .map(|i| sum((0..w.len()).map(|a| w[a].scale(sys.entry(i, a) as f64))))
        .collect()
}

fn jac_box(sys: &CriticalSystem, b: &[Interval]) -> Vec<Vec<Interval>> {
    let w = terms(sys, b);
    let m = w.len();
    (0..sys.size())
        .map(|i| {
            (0..sys.size())
                .map(|k| {
                    sum((0..m).map(|a| {
                        let weight = if k == 0 { sys.heights()[a] as i64 } else { sys.exponents()[a][k - 1] };
                        w[a].scale((sys.entry(i, a) * weight) as f64)
                    }))
                })
                .collect()
        })
        .collect()
}

/// `K(B)`, or `None` when the midpoint Jacobian is singular or something overflows.
fn krawczyk_image(sys: &CriticalSystem, b: &[Interval]) -> Option<Vec<Interval>> {
    let n = b.len();
    let m: Vec<f64> = b.iter().map(|i| i.mid()).collect();
    let jm = sys.jacobian(&m).ok()?;
    let y = Lu::new(&jm)?.inverse();
    if y.iter().flatten().any(|v| !v.is_finite()) {
        return None;
    }
    let mp: Vec<Interval> = m.iter().map(|&v| Interval::point(v)).collect();
    let g = eval_box(sys, &mp);
    let jb = jac_box(sys, b);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let yg = sum((0..n).map(|j| g[j].scale(y[i][j])));
        let mut acc = Interval::point(m[i]) - yg;
        for k in 0..n {
            let yj = sum((0..n).map(|j| jb[j][k].scale(y[i][j])));
            let coef = Interval::point(if i == k { 1.0 } else { 0.0 }) - yj;
            acc = acc + coef * (b[k] - Interval::point(m[k]));
        }
        if !acc.is_finite() {
            return None;
        }
        out.push(acc);
    }
    Some(out)
}

fn t_interval(tau: &Interval) -> Interval {
    tau.exp()
}

/// Try radii `r0, 4 r0, 16 r0, r0/4, r0/16, r0/64` around `center`.
pub fn krawczyk_certify(sys: &CriticalSystem, center: &[f64], initial_radius: f64) -> CertifiedBox {
    let factors = [1.0, 4.0, 16.0, 0.25, 1.0 / 16.0, 1.0 / 64.0];
    for f in factors {
        let r = initial_radius * f;
        let b: Vec<Interval> = center.iter().map(|&c| Interval::around(c, r)).collect();
        let Some(k) = krawczyk_image(sys, &b) else { continue };
        if !k.iter().zip(&b).all(|(ki, bi)| ki.strictly_inside(bi)) {
            continue;
        }
        let mut cur = k;
        for _ in 0..40 {
            let Some(next) = krawczyk_image(sys, &cur) else { break };
            let Some(inter) = next
                .iter()
                .zip(&cur)
                .map(|(a, b)| a.intersect(b))
                .collect::<Option<Vec<_>>>()
            else {
                break;
            };
            let old: f64 = cur.iter().map(|i| i.width()).fold(0.0, f64::max);
            let new: f64 = inter.iter().map(|i| i.width()).fold(0.0, f64::max);
            cur = inter;
            if new >= 0.9 * old {
                break;
            }
        }
        return CertifiedBox {
            center: center.to_vec(),
            radius: vec![r; center.len()],
            unique: true,
            t_interval: t_interval(&cur[0]),
            enclosure: cur,
            certified_radius: Some(r),
        };
    }
    let r = initial_radius;
    CertifiedBox {
        center: center.to_vec(),
        radius: vec![r; center.len()],
        unique: false,
        enclosure: center.iter().map(|&c| Interval::around(c, r)).collect(),
        t_interval: t_interval(&Interval::around(center[0], r)),
        certified_radius: None,
    }
}

/// Certify a tracked endpoint with a radius tied to the residual.
pub fn certify_endpoint(sys: &CriticalSystem, center: &[f64]) -> CertifiedBox {
    let scale = center.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    krawczyk_certify(sys, center, 1e-9 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signomial::{build_critical_system, parse_text, HeightFunction};

    fn system(src: &str) -> CriticalSystem {
        let f = parse_text(src).unwrap();
        build_critical_system(&f, &HeightFunction::uniform(f.support())).unwrap()
    }

    #[test]
    fn square_center_box() {
        let sys = system("1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2");
        let b = certify_endpoint(&sys, &[4f64.ln(), 0.0, 0.0]);
        assert!(b.unique);
        assert!(b.t_interval.contains(4.0));
        assert!(b.t_interval.width() <= 1e-6);
        assert!(!b.t_interval.contains(1.0));
        for (e, c) in b.enclosure.iter().zip(&b.center) {
            assert!(e.contains(*c) || e.width() < 1e-12);
        }
    }

    #[test]
    fn far_center_fails() {
        let sys = system("1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2");
        let b = krawczyk_certify(&sys, &[0.5, 0.3, -0.2], 1e-9);
        assert!(!b.unique);
    }

    #[test]
    fn halving_radius_never_widens() {
        let sys = system("1 + x1^2 + x2^2 + x1^2*x2^2 - 3*x1*x2");
        let z = [(4.0f64 / 3.0).ln(), 0.0, 0.0];
        let a = krawczyk_certify(&sys, &z, 1e-6);
        let b = krawczyk_certify(&sys, &z, 5e-7);
        assert!(a.unique && b.unique);
        assert!(b.t_interval.width() <= a.t_interval.width() * (1.0 + 1e-9) + 1e-15);
    }
}

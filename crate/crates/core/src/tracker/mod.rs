//! Predictor-corrector tracking of the positive solution path of a
//! parameter homotopy, in logarithmic coordinates.

mod fallback;
mod solve;

pub use fallback::{face_system, fallback_multistart, FallbackCandidate};
pub use solve::{
    build_homotopy, prepare_nonseparable, reduce_problem, solve_tstar_nonseparable, ReducedProblem,
};

use crate::error::{Error, Result};
use crate::numeric::Lu;
use crate::signomial::ParameterHomotopy;
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Tolerance on the row-scaled residual max-norm.
    pub newton_tol: f64,
    pub newton_max_iters: usize,
    /// Cap on step attempts, accepted or not.
    pub max_steps: usize,
    pub step_expand: f64,
    pub step_shrink: f64,
    /// Record every accepted step.
    pub trace: bool,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            initial_step: 0.05,
            min_step: 1e-10,
            max_step: 0.2,
            newton_tol: 1e-12,
            newton_max_iters: 8,
            max_steps: 10_000,
            step_expand: 1.5,
            step_shrink: 0.5,
            trace: false,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.min_step
            && self.min_step <= self.initial_step
            && self.initial_step <= self.max_step
            && self.newton_tol > 0.0
            && self.newton_max_iters > 0
            && self.step_expand > 1.0
            && 0.0 < self.step_shrink
            && self.step_shrink < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Input("inconsistent tracker configuration".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FailureReason {
    StepUnderflow,
    SingularJacobian,
    Overflow,
    MaxSteps,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub s: f64,
    pub z: Vec<f64>,
    pub step: f64,
    pub newton_iters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackResult {
    pub t_star: f64,
    pub x_star: Vec<f64>,
    /// `(tau, y)` at the end of the path.
    pub tau_y: Vec<f64>,
    pub converged: bool,
    pub steps_taken: usize,
    pub newton_iters_total: usize,
    pub failure_reason: Option<FailureReason>,
    /// Row-scaled residual max-norm at the returned point.
    pub residual: f64,
    #[serde(skip)]
    pub trace: Vec<TracePoint>,
}

enum CorrectorError {
    Singular,
    Overflow,
    Diverged,
}

/// Newton at fixed `s`. Each iteration must reduce the residual, the first
/// one by at least half.
fn correct(ph: &ParameterHomotopy, s: f64, mut z: Vec<f64>, tol: f64, max_iters: usize) -> std::result::Result<(Vec<f64>, usize), CorrectorError> {
    let eval = |z: &[f64]| ph.eval(s, z).map_err(|_| CorrectorError::Overflow);
    let mut ev = eval(&z)?;
    let mut prev = ev.scaled_norm();
    if prev <= tol {
        return Ok((z, 0));
    }
    for k in 1..=max_iters {
        let (jz, _) = ph.jac(s, &z).map_err(|_| CorrectorError::Overflow)?;
        let lu = Lu::new(&jz).ok_or(CorrectorError::Singular)?;
        let rhs: Vec<f64> = ev.value.iter().map(|v| -v).collect();
        let dz = lu.solve(&rhs);
        if dz.iter().any(|v| !v.is_finite()) {
            return Err(CorrectorError::Singular);
        }
        for (zi, d) in z.iter_mut().zip(&dz) {
            *zi += d;
        }
        ev = eval(&z)?;
        let r = ev.scaled_norm();
        if r <= tol {
            return Ok((z, k));
        }
        if (k == 1 && r >= 0.5 * prev) || r >= prev {
            return Err(CorrectorError::Diverged);
        }
        prev = r;
    }
    Err(CorrectorError::Diverged)
}

/// Best-effort Newton polish of a system at `s`; returns the point with the
/// smallest residual seen.
pub(crate) fn polish(ph: &ParameterHomotopy, s: f64, z: Vec<f64>, target: f64, max_iters: usize) -> (Vec<f64>, f64, usize) {
    let mut best = z.clone();
    let mut best_r = ph.eval(s, &z).map_or(f64::INFINITY, |e| e.scaled_norm());
    let mut cur = z;
    let mut iters = 0;
    for _ in 0..max_iters {
        if best_r <= target {
            break;
        }
        let Ok(ev) = ph.eval(s, &cur) else { break };
        let Ok((jz, _)) = ph.jac(s, &cur) else { break };
        let Some(lu) = Lu::new(&jz) else { break };
        let dz = lu.solve(&ev.value.iter().map(|v| -v).collect::<Vec<_>>());
        for (zi, d) in cur.iter_mut().zip(&dz) {
            *zi += d;
        }
        iters += 1;
        let r = ph.eval(s, &cur).map_or(f64::INFINITY, |e| e.scaled_norm());
        if r < best_r {
            best_r = r;
            best = cur.clone();
        } else {
            break;
        }
    }
    (best, best_r, iters)
}

/// Track the path of `ph` from `(s, z) = (0, 0)` to `s = 1`.
pub fn track_single_path(ph: &ParameterHomotopy, cfg: &TrackerConfig) -> TrackResult {
    let dim = ph.system.size();
    let mut s = 0.0f64;
    let mut z = vec![0.0; dim];
    let mut h = cfg.initial_step;
    let mut easy = 0;
    let mut attempts = 0;
    let mut steps = 0;
    let mut iters_total = 0;
    let mut trace = Vec::new();
    let mut failure = None;

    while s < 1.0 {
        if attempts >= cfg.max_steps {
            failure = Some(FailureReason::MaxSteps);
            break;
        }
        attempts += 1;
        let (jz, ds) = match ph.jac(s, &z) {
            Ok(v) => v,
            Err(_) => {
                failure = Some(FailureReason::Overflow);
                break;
            }
        };
        debug_assert!(jz[0][0] < 0.0, "t-derivative of the lifted signomial must be negative");
        let Some(lu) = Lu::new(&jz) else {
            failure = Some(FailureReason::SingularJacobian);
            break;
        };
        let v = lu.solve(&ds.iter().map(|d| -d).collect::<Vec<_>>());
        let hh = h.min(1.0 - s);
        let s1 = if s + hh >= 1.0 { 1.0 } else { s + hh };
        let zp: Vec<f64> = z.iter().zip(&v).map(|(zi, vi)| zi + (s1 - s) * vi).collect();
        match correct(ph, s1, zp, cfg.newton_tol, cfg.newton_max_iters) {
            Ok((z1, it)) => {
                s = s1;
                z = z1;
                steps += 1;
                iters_total += it;
                if cfg.trace {
                    trace.push(TracePoint { s, z: z.clone(), step: hh, newton_iters: it });
                }
                easy += 1;
                if easy >= 2 {
                    h = (h * cfg.step_expand).min(cfg.max_step);
                    easy = 0;
                }
            }
            Err(e) => {
                easy = 0;
                h *= cfg.step_shrink;
                if h < cfg.min_step {
                    failure = Some(match e {
                        CorrectorError::Overflow => FailureReason::Overflow,
                        CorrectorError::Singular => FailureReason::SingularJacobian,
                        CorrectorError::Diverged => FailureReason::StepUnderflow,
                    });
                    break;
                }
            }
        }
    }

    let (z, residual) = if failure.is_none() {
        let (zp, r, it) = polish(ph, 1.0, z, 1e-13, 10);
        iters_total += it;
        (zp, r)
    } else {
        let r = ph.eval(s, &z).map_or(f64::INFINITY, |e| e.scaled_norm());
        (z, r)
    };
    TrackResult {
        t_star: z[0].exp(),
        x_star: z[1..].iter().map(|y| y.exp()).collect(),
        converged: failure.is_none() && residual <= cfg.newton_tol,
        tau_y: z,
        steps_taken: steps,
        newton_iters_total: iters_total,
        failure_reason: failure,
        residual,
        trace,
    }
}

/// Write a trace as CSV with columns `s, tau, y1..yn, step, newton_iters`.
pub fn write_trace_csv(trace: &[TracePoint], mut out: impl Write) -> std::io::Result<()> {
    let n = trace.first().map_or(0, |p| p.z.len().saturating_sub(1));
    let mut header = vec!["s".to_string(), "tau".to_string()];
    header.extend((1..=n).map(|i| format!("y{i}")));
    header.push("step".into());
    header.push("newton_iters".into());
    writeln!(out, "{}", header.join(","))?;
    for p in trace {
        let mut row = vec![format!("{:e}", p.s)];
        row.extend(p.z.iter().map(|v| format!("{v:e}")));
        row.push(format!("{:e}", p.step));
        row.push(p.newton_iters.to_string());
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signomial::{parse_text, HeightFunction};

    fn tstar(src: &str) -> TrackResult {
        let f = parse_text(src).unwrap();
        solve_tstar_nonseparable(&f, &HeightFunction::uniform(f.support()), &TrackerConfig::default()).unwrap()
    }

    fn spread(eps: f64) -> String {
        let theta = (10.0f64 / 9.0).powf(0.9) * 40f64.powf(0.1);
        format!("1 + x1^40 + x2^40 + x3^40 + x4^40 - {:e}*x1*x2*x3*x4", theta + eps)
    }

    #[test]
    fn square_center_reaches_four() {
        let r = tstar("1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2");
        assert!(r.converged, "{r:?}");
        assert!((r.t_star - 4.0).abs() < 1e-8);
        assert!(r.x_star.iter().all(|x| (x - 1.0).abs() < 1e-8));
    }

    #[test]
    fn square_closed_form() {
        let c = [1.0f64, 2.0, 3.0, 4.0, 5.0];
        // a_plus order (0,0), (0,2), (2,0), (2,2): c0 x^0 + c2 x2^2 + c1 x1^2 + c3 x1^2 x2^2.
        let r = tstar(&format!("{} + {}*x1^2 + {}*x2^2 + {}*x1^2*x2^2 - {}*x1*x2", c[0], c[1], c[2], c[3], c[4]));
        let tp = (4.0 * (c[0] * c[3] + c[1] * c[2]) + 8.0 * (c[0] * c[1] * c[2] * c[3]).sqrt()).sqrt() / c[4];
        assert!((r.t_star - tp).abs() < 1e-8 * tp, "{} vs {tp}", r.t_star);
    }

    #[test]
    fn spread_circuit_value() {
        let r = tstar(&spread(1e-7));
        assert!(r.converged);
        assert!((r.t_star - 0.999999937105563).abs() < 1e-9, "{}", r.t_star);
        let b = tstar(&spread(0.0));
        assert!((b.t_star - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trace_records_accepted_steps() {
        let f = parse_text("1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2").unwrap();
        let cfg = TrackerConfig { trace: true, ..TrackerConfig::default() };
        let (rp, _) = prepare_nonseparable(&f, &HeightFunction::uniform(f.support())).unwrap();
        let ph = build_homotopy(&rp).unwrap();
        let r = track_single_path(&ph, &cfg);
        assert_eq!(r.trace.len(), r.steps_taken);
        assert_eq!(r.trace.last().unwrap().s, 1.0);
        let mut buf = Vec::new();
        write_trace_csv(&r.trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("s,tau,y1,y2,step,newton_iters\n"));
        assert_eq!(text.lines().count(), r.steps_taken + 1);
        // Determinism.
        assert_eq!(track_single_path(&ph, &cfg), r);
    }

    #[test]
    fn separable_support_is_a_contract_error() {
        let f = parse_text("1 + x1^4 + x2^4 + x1^4*x2^4 - x1*x2 - x1^3*x2^3").unwrap();
        let e = solve_tstar_nonseparable(&f, &HeightFunction::uniform(f.support()), &TrackerConfig::default());
        assert!(matches!(e, Err(crate::Error::Contract(_))));
    }

    #[test]
    fn fallback_recovers_square_value() {
        let f = parse_text("1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2").unwrap();
        let h = HeightFunction::uniform(f.support());
        let faces = crate::geometry::enumerate_faces(f.support()).unwrap();
        let gamma = faces.last().unwrap();
        let j = crate::geometry::truncation_face_set(gamma, f.support()).unwrap();
        let c = fallback_multistart(&f, &h, &j, &TrackerConfig::default(), 200, 7);
        assert!(c.iter().any(|c| (c.t - 4.0).abs() < 1e-8));
        assert_eq!(c, fallback_multistart(&f, &h, &j, &TrackerConfig::default(), 200, 7));
    }
}

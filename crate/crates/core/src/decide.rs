//! The full decision procedure: prechecks, reduction to the smallest face,
//! single-path tracking for nonseparable supports, the multistart fallback
//! otherwise, and certification of the result.

use crate::certify::{certify_endpoint, verdict_from_interval, CertifiedBox, Verdict, VerdictKind};
use crate::error::Result;
use crate::geometry::{is_nonseparable, truncation_face_set};
use crate::numeric::row_scaled_det;
use crate::signomial::{sign_precheck, HeightFunction, SignClass, Signomial};
use crate::tracker::{
    build_homotopy, face_system, fallback_multistart, reduce_problem, track_single_path, FallbackCandidate,
    TrackResult, TrackerConfig,
};
use serde::Serialize;
use std::time::Instant;

pub const NON_EXHAUSTIVE: &str = "NON-EXHAUSTIVE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportClass {
    TriviallyCopositive,
    TriviallyNegative,
    Nonseparable,
    Separable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Precheck,
    SinglePath,
    Fallback,
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub tracker: TrackerConfig,
    pub certify: bool,
    /// Skip the nonseparability test and track a single path regardless.
    pub assume_nonseparable: bool,
    /// Random starts per face in the fallback.
    pub fallback_starts: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tracker: TrackerConfig::default(),
            certify: true,
            assume_nonseparable: false,
            fallback_starts: 64,
            seed: 0,
        }
    }
}

/// Wall-clock milliseconds per stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timing {
    pub geometry_ms: f64,
    pub tracking_ms: f64,
    pub certification_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Decision {
    pub classification: SupportClass,
    /// Number of terms of `f` on the smallest face containing `A-`.
    pub gamma_size: Option<usize>,
    /// Number of faces of that face meeting `A-`.
    pub j_size: Option<usize>,
    pub method: Method,
    pub track: Option<TrackResult>,
    pub certified_box: Option<CertifiedBox>,
    /// Determinant of the row-scaled Jacobian at the end of the path.
    pub endpoint_det: Option<f64>,
    pub fallback: Vec<FallbackCandidate>,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
    pub timing: Timing,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Decide whether `f` is nonnegative on the positive orthant.
pub fn check_copositivity(f: &Signomial, h: &HeightFunction, opts: &CheckOptions) -> Result<Decision> {
    opts.tracker.validate()?;
    let start = Instant::now();
    let trivial = |class, kind, msg: &str| Decision {
        classification: class,
        gamma_size: None,
        j_size: None,
        method: Method::Precheck,
        track: None,
        certified_box: None,
        endpoint_det: None,
        fallback: vec![],
        verdict: Verdict::trivial(kind, msg),
        warnings: vec![],
        timing: Timing { total_ms: ms(start), ..Timing::default() },
    };
    match sign_precheck(f)? {
        SignClass::TriviallyCopositive => {
            return Ok(trivial(SupportClass::TriviallyCopositive, VerdictKind::TriviallyCopositive, "no negative terms"))
        }
        SignClass::TriviallyNegative => {
            return Ok(trivial(
                SupportClass::TriviallyNegative,
                VerdictKind::TriviallyNegative,
                "a vertex of the Newton polytope has a negative coefficient",
            ))
        }
        SignClass::NeedsCriterion => {}
    }

    let t_geo = Instant::now();
    let rp = reduce_problem(f, h)?;
    let faces_j = truncation_face_set(&rp.gamma, f.support())?;
    let mut warnings = Vec::new();
    let class = if opts.assume_nonseparable {
        warnings.push("nonseparability asserted by the caller, not checked".to_string());
        SupportClass::Nonseparable
    } else {
        match is_nonseparable(rp.reduced.support())? {
            (true, _) => SupportClass::Nonseparable,
            (false, diag) => {
                if let Some(d) = diag {
                    warnings.push(format!("separable support: {d:?}"));
                }
                SupportClass::Separable
            }
        }
    };
    let mut timing = Timing { geometry_ms: ms(t_geo), ..Timing::default() };
    let mut d = Decision {
        classification: class,
        gamma_size: Some(rp.gamma.points.len()),
        j_size: Some(faces_j.len()),
        method: Method::SinglePath,
        track: None,
        certified_box: None,
        endpoint_det: None,
        fallback: vec![],
        verdict: Verdict::inconclusive(vec![]),
        warnings,
        timing: Timing::default(),
    };

    if class == SupportClass::Nonseparable {
        let t_track = Instant::now();
        let ph = build_homotopy(&rp)?;
        let track = track_single_path(&ph, &opts.tracker);
        timing.tracking_ms = ms(t_track);
        if !track.converged {
            d.verdict = Verdict::inconclusive(vec![format!("path tracking failed: {:?}", track.failure_reason)]);
        } else {
            d.endpoint_det = ph.system.jacobian(&track.tau_y).ok().map(|j| row_scaled_det(&j));
            if opts.certify {
                let t_cert = Instant::now();
                let bx = certify_endpoint(&ph.system, &track.tau_y);
                timing.certification_ms = ms(t_cert);
                d.verdict = if bx.unique {
                    verdict_from_interval(Some(bx.t_interval), vec!["single path to the unique positive singular zero".into()])
                } else {
                    Verdict::inconclusive(vec!["Krawczyk test failed at every radius".into()])
                };
                d.certified_box = Some(bx);
            } else {
                d.verdict = uncertified(track.t_star);
            }
        }
        d.track = Some(track);
    } else {
        d.method = Method::Fallback;
        d.warnings.push(format!(
            "{NON_EXHAUSTIVE}: separable support; multistart Newton over {} face systems can miss solutions",
            faces_j.len()
        ));
        let t_track = Instant::now();
        let mut cands = fallback_multistart(f, h, &faces_j, &opts.tracker, opts.fallback_starts, opts.seed);
        timing.tracking_ms = ms(t_track);
        cands.sort_by(|a, b| a.t.total_cmp(&b.t));
        let mut details = vec![format!("{} candidate(s) found", cands.len())];
        if opts.certify {
            let t_cert = Instant::now();
            for c in cands.iter().filter(|c| c.t < 1.0) {
                let (sys, _) = face_system(f, h, &faces_j[c.face])?;
                let bx = certify_endpoint(&sys, &c.tau_y);
                if bx.unique && bx.t_interval.hi < 1.0 {
                    // A zero of a truncation of f_t with t < 1 makes that truncation,
                    // and hence f, negative somewhere.
                    details.push(format!("certified zero of a truncation at t in {}", bx.t_interval));
                    d.verdict = Verdict {
                        kind: VerdictKind::NotCopositive,
                        certified: true,
                        t_interval: Some(bx.t_interval),
                        details: details.clone(),
                    };
                    d.certified_box = Some(bx);
                    break;
                }
            }
            timing.certification_ms = ms(t_cert);
        }
        if d.verdict.kind != VerdictKind::NotCopositive {
            details.push("no certified candidate below 1; copositivity is not decided".into());
            d.verdict = Verdict::inconclusive(details);
        }
        d.fallback = cands;
    }
    timing.total_ms = ms(start);
    d.timing = timing;
    Ok(d)
}

fn uncertified(t: f64) -> Verdict {
    let kind = if t > 1.0 {
        VerdictKind::Copositive
    } else if t < 1.0 {
        VerdictKind::NotCopositive
    } else {
        VerdictKind::Inconclusive
    };
    Verdict { kind, certified: false, t_interval: None, details: vec!["certification skipped".into()] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signomial::parse_text;

    fn run(src: &str) -> Decision {
        let f = parse_text(src).unwrap();
        check_copositivity(&f, &HeightFunction::uniform(f.support()), &CheckOptions::default()).unwrap()
    }

    #[test]
    fn square_center() {
        let d = run("1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2");
        assert_eq!(d.verdict.kind, VerdictKind::Copositive);
        assert!(d.verdict.certified);
        assert_eq!(d.method, Method::SinglePath);
        assert!(d.endpoint_det.unwrap().abs() > 1e-12);
        assert!((d.track.unwrap().t_star - 4.0).abs() < 1e-8);
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(run("x1 - 1").verdict.kind, VerdictKind::TriviallyNegative);
        assert_eq!(run("x1 + 2").verdict.exit_code(), 0);
    }

    #[test]
    fn separable_never_claims_copositive() {
        let d = run("1 + x1^4 + x2^4 + x1^4*x2^4 - x1*x2 - x1^3*x2^3");
        assert_eq!(d.classification, SupportClass::Separable);
        assert_eq!(d.method, Method::Fallback);
        assert_ne!(d.verdict.kind, VerdictKind::Copositive);
        assert!(d.warnings.iter().any(|w| w.starts_with(NON_EXHAUSTIVE)));
        let neg = run("1 + x1^4 + x2^4 + x1^4*x2^4 - 3*x1*x2 - 3*x1^3*x2^3");
        assert_eq!(neg.verdict.kind, VerdictKind::NotCopositive);
        assert!(neg.verdict.certified);
    }
}

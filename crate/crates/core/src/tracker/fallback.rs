//! Multistart Newton on the face systems of a separable support. The
//! search is not exhaustive: finding no candidate below 1 proves nothing.

use super::TrackerConfig;
use crate::error::Result;
use crate::geometry::{AffineLatticeMap, Face};
use crate::numeric::Lu;
use crate::signomial::{build_critical_system, truncate, CriticalSystem, HeightFunction, Signomial};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FallbackCandidate {
    /// Index into the face list passed to [`fallback_multistart`].
    pub face: usize,
    pub t: f64,
    /// `(tau, y)` in the lattice coordinates of the face.
    pub tau_y: Vec<f64>,
    pub residual: f64,
}

/// Critical system of `f` truncated to `face`, in the face's lattice coordinates.
pub fn face_system(f: &Signomial, h: &HeightFunction, face: &Face) -> Result<(CriticalSystem, AffineLatticeMap)> {
    let tf = truncate(f, face)?;
    let (map, red) = tf.reduce_to_full_dim()?;
    let hh = h
        .transport(tf.support(), |p| Ok(p.clone()))?
        .transport(red.support(), |p| map.apply(p))?;
    Ok((build_critical_system(&red, &hh)?, map))
}

const ESCAPE: f64 = 60.0;

/// Damped Newton; returns the point and its scaled residual on success.
pub(crate) fn damped_newton(sys: &CriticalSystem, mut z: Vec<f64>, tol: f64, max_iters: usize) -> Option<(Vec<f64>, f64)> {
    let mut ev = sys.eval(&z).ok()?;
    let mut r = ev.scaled_norm();
    for _ in 0..max_iters {
        if r <= tol {
            return Some((z, r));
        }
        let jz = sys.jacobian(&z).ok()?;
        let lu = Lu::new(&jz)?;
        let dz = lu.solve(&ev.value.iter().map(|v| -v).collect::<Vec<_>>());
        if dz.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand: Vec<f64> = z.iter().zip(&dz).map(|(a, d)| a + lambda * d).collect();
            if cand.iter().any(|v| v.abs() > ESCAPE) {
                lambda *= 0.5;
                continue;
            }
            if let Ok(e) = sys.eval(&cand) {
                let rc = e.scaled_norm();
                if rc < r {
                    z = cand;
                    ev = e;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (r <= tol).then_some((z, r))
}

fn start_seed(seed: u64, face: usize, start: usize) -> u64 {
    seed ^ ((face as u64) << 40) ^ (start as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Positive solutions of the face systems of every face in `faces_j`, from
/// `n_starts` standard-normal log-space starts per face.
pub fn fallback_multistart(
    f: &Signomial,
    h: &HeightFunction,
    faces_j: &[Face],
    cfg: &TrackerConfig,
    n_starts: usize,
    seed: u64,
) -> Vec<FallbackCandidate> {
    let tol = (cfg.newton_tol * 10.0).max(1e-12);
    let mut out = Vec::new();
    for (fi, face) in faces_j.iter().enumerate() {
        let Ok((sys, _)) = face_system(f, h, face) else { continue };
        let dim = sys.size();
        let found: Vec<Option<(Vec<f64>, f64)>> = (0..n_starts)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(start_seed(seed, fi, k));
                let z0: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
                damped_newton(&sys, z0, tol, 100)
            })
            .collect();
        let mut reps: Vec<(Vec<f64>, f64)> = Vec::new();
        for (z, r) in found.into_iter().flatten() {
            let dup = reps.iter().any(|(w, _)| {
                z.iter().zip(w).all(|(a, b)| (a - b).abs() <= 1e-6)
            });
            if !dup {
                reps.push((z, r));
            }
        }
        reps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        out.extend(reps.into_iter().map(|(z, r)| FallbackCandidate {
            face: fi,
            t: z[0].exp(),
            tau_y: z,
            residual: r,
        }));
    }
    out
}

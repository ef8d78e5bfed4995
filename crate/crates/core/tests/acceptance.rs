//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use copositive::certify::VerdictKind;
use copositive::decide::{check_copositivity, CheckOptions, Decision, Method, NON_EXHAUSTIVE};
use copositive::geometry::{barycentric_coordinates, is_nonseparable, LatticePoint, SignedSupport};
use copositive::oracles::{brute_force_nonseparable, circuit_tstar, square_tstar, SquareSupportCoeffs};
use copositive::signomial::{parse_text, HeightFunction, Signomial};
use copositive::sonc::{circuit_number, sonc_certificate, verify_certificate};
use copositive::tracker::TrackerConfig;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome { pass, summary: summary.into() }
}

fn decide(f: &Signomial) -> Decision {
    check_copositivity(f, &HeightFunction::uniform(f.support()), &CheckOptions::default()).unwrap()
}

fn lp(v: &[i64]) -> LatticePoint {
    LatticePoint(v.to_vec())
}

fn past_threshold(eps: f64) -> Signomial {
    let d = (10.0f64 / 9.0).powf(0.9) * 40f64.powf(0.1) + eps;
    parse_text(&format!("1 + x1^40 + x2^40 + x3^40 + x4^40 - {d:e}*x1*x2*x3*x4")).unwrap()
}

fn square(c: &SquareSupportCoeffs) -> Signomial {
    parse_text(&c.to_text()).unwrap()
}

fn random_square(rng: &mut ChaCha8Rng) -> SquareSupportCoeffs {
    let mut g = || rng.gen_range(0.1..10.0);
    SquareSupportCoeffs { c0: g(), c1: g(), c2: g(), c3: g(), c4: g() }
}

fn threshold(c: &SquareSupportCoeffs) -> f64 {
    (4.0 * (c.c0 * c.c3 + c.c1 * c.c2) + 8.0 * (c.c0 * c.c1 * c.c2 * c.c3).sqrt()).sqrt()
}

/// Endpoint determinants collected for the last criterion.
struct Dets(Vec<f64>);

impl Dets {
    fn push(&mut self, d: &Decision) {
        if d.method == Method::SinglePath {
            self.0.push(d.endpoint_det.unwrap_or(0.0));
        }
    }
}

fn criterion1(dets: &mut Dets) -> Outcome {
    let f = parse_text("1 + x1^2 + x2^2 + x1^2*x2^2 - x1*x2").unwrap();
    let start = Instant::now();
    let d = decide(&f);
    let secs = start.elapsed().as_secs_f64();
    dets.push(&d);
    let t = d.track.as_ref().map_or(f64::NAN, |t| t.t_star);
    let iv = d.verdict.t_interval;
    let pass = (t - 4.0).abs() <= 1e-8
        && iv.is_some_and(|i| !i.contains(1.0))
        && d.verdict.kind == VerdictKind::Copositive
        && d.verdict.certified
        && secs < 1.0;
    outcome(pass, format!("square+center: t* = {t:.12}, interval {iv:?}, verdict {:?}, {secs:.3}s", d.verdict.kind))
}

fn criterion2(dets: &mut Dets) -> Outcome {
    let start = Instant::now();
    let d = decide(&past_threshold(1e-7));
    let secs = start.elapsed().as_secs_f64();
    dets.push(&d);
    let t = d.track.as_ref().map_or(f64::NAN, |t| t.t_star);
    let main = (t - 0.999999937105563).abs() <= 1e-9
        && d.verdict.kind == VerdictKind::NotCopositive
        && d.verdict.certified
        && d.method == Method::SinglePath
        && secs < 1.0;
    let d12 = decide(&past_threshold(1e-12));
    dets.push(&d12);
    let robust = d12.verdict.kind == VerdictKind::NotCopositive && d12.verdict.certified;
    let d14 = decide(&past_threshold(1e-14));
    let stretch = if d14.verdict.kind == VerdictKind::NotCopositive && d14.verdict.certified {
        "certified NotCopositive"
    } else {
        "not certified"
    };
    outcome(
        main && robust,
        format!(
            "t* = {t:.15} ({secs:.3}s, {:?}); eps 1e-12: {:?} certified={}; stretch eps 1e-14: {stretch}",
            d.verdict.kind, d12.verdict.kind, d12.verdict.certified
        ),
    )
}

fn criterion3(rng: &mut ChaCha8Rng, dets: &mut Dets) -> Outcome {
    let (mut worst, mut mismatches, mut compared) = (0.0f64, 0, 0);
    for _ in 0..100 {
        let c = random_square(rng);
        let d = decide(&square(&c));
        dets.push(&d);
        let t = d.track.as_ref().map_or(f64::NAN, |t| t.t_star);
        let (_, tp) = square_tstar(&c);
        worst = worst.max(((t - tp) / tp).abs());
        if (t - 1.0).abs() > 1e-8 {
            compared += 1;
            let copositive = c.c4 * c.c4 <= threshold(&c).powi(2);
            let got = match d.verdict.kind {
                VerdictKind::Copositive => Some(true),
                VerdictKind::NotCopositive => Some(false),
                _ => None,
            };
            if got != Some(copositive) {
                mismatches += 1;
            }
        }
    }
    outcome(
        worst <= 1e-6 && mismatches == 0,
        format!("100 instances: max relative t* error {worst:.2e}, {mismatches}/{compared} verdict mismatches"),
    )
}

/// A random full-dimensional circuit with exponents in `[0, 50]` and an
/// interior negative point.
fn random_circuit(rng: &mut ChaCha8Rng) -> (Vec<(LatticePoint, f64)>, LatticePoint) {
    loop {
        let n = rng.gen_range(1..=4);
        let verts: Vec<LatticePoint> =
            (0..=n).map(|_| LatticePoint((0..n).map(|_| rng.gen_range(0..=50)).collect())).collect();
        for _ in 0..400 {
            let b = LatticePoint((0..n).map(|_| rng.gen_range(0..=50)).collect());
            match barycentric_coordinates(&verts, &b) {
                Ok(l) if l.iter().all(|v| v.is_positive()) => {
                    let pos = verts.iter().map(|v| (v.clone(), rng.gen_range(0.2..5.0))).collect();
                    return (pos, b);
                }
                Err(_) => break,
                _ => {}
            }
        }
    }
}

fn criterion4(rng: &mut ChaCha8Rng, dets: &mut Dets) -> Outcome {
    let (mut worst, mut mismatches) = (0.0f64, 0);
    for _ in 0..100 {
        let (pos, b) = random_circuit(rng);
        let theta = circuit_tstar(&pos, &(b.clone(), 1.0)).unwrap();
        let dcoef = theta * rng.gen_range(0.5..1.5);
        let mut terms = pos.clone();
        terms.push((b.clone(), -dcoef));
        let f = Signomial::new(terms).unwrap();
        let d = decide(&f);
        dets.push(&d);
        let t = d.track.as_ref().map_or(f64::NAN, |t| t.t_star);
        worst = worst.max(((t * dcoef - theta) / theta).abs());
        if (t - 1.0).abs() > 1e-8 {
            let expect = if dcoef <= theta { VerdictKind::Copositive } else { VerdictKind::NotCopositive };
            if d.verdict.kind != expect {
                mismatches += 1;
            }
        }
    }
    outcome(
        worst <= 1e-8 && mismatches == 0,
        format!("100 circuits: max relative |t* d - Theta| {worst:.2e}, {mismatches} verdict mismatches"),
    )
}

fn criterion5(rng: &mut ChaCha8Rng, dets: &mut Dets) -> Outcome {
    let (mut worst_res, mut worst_ratio, mut failures) = (0.0f64, 0.0f64, 0);
    for _ in 0..50 {
        let mut c = random_square(rng);
        c.c4 = 0.9 * threshold(&c);
        let f = square(&c);
        dets.push(&decide(&f));
        match sonc_certificate(&f, &HeightFunction::uniform(f.support()), &TrackerConfig::default()) {
            Ok(cert) => {
                worst_res = worst_res.max(cert.residual);
                for q in &cert.circuits {
                    if let Some((_, dq)) = &q.negative {
                        let theta = circuit_number(q).unwrap_or(0.0);
                        worst_ratio = worst_ratio.max(dq / theta);
                    }
                }
                if !verify_certificate(&cert).pass {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    outcome(
        worst_res <= 1e-8 && worst_ratio <= 1.0 + 1e-10 && failures == 0,
        format!("50 certificates: max residual {worst_res:.2e}, max d/Theta {worst_ratio:.6}, {failures} failed verification"),
    )
}

fn criterion6(rng: &mut ChaCha8Rng) -> Outcome {
    let grid: Vec<LatticePoint> = (0..5).flat_map(|x| (0..5).map(move |y| lp(&[x, y]))).collect();
    let (mut checked, mut agree, mut nonsep) = (0, 0, 0);
    let mut attempts = 0;
    while checked < 600 && attempts < 100_000 {
        attempts += 1;
        let mut pts = grid.clone();
        pts.shuffle(rng);
        let np = rng.gen_range(3..=6);
        let nm = rng.gen_range(1..=2);
        let sup = match SignedSupport::new(pts[..np].to_vec(), pts[np..np + nm].to_vec()) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let (Ok(brute), Ok((ours, _))) = (brute_force_nonseparable(&sup), is_nonseparable(&sup)) else {
            continue;
        };
        // Sample negative points outside conv(A+) sparingly; they are all separable.
        if !brute && !ours && rng.gen_bool(0.7) {
            continue;
        }
        checked += 1;
        agree += (brute == ours) as usize;
        nonsep += ours as usize;
    }
    let sq = |k: i64| {
        SignedSupport::new(vec![lp(&[0, 0]), lp(&[k, 0]), lp(&[0, k]), lp(&[k, k])], vec![lp(&[k / 2, k / 2])]).unwrap()
    };
    let family = [2, 4, 6, 8].iter().all(|&k| is_nonseparable(&sq(k)).unwrap().0);
    let corners = vec![lp(&[0, 0]), lp(&[4, 0]), lp(&[0, 4]), lp(&[4, 4])];
    let pair_a = SignedSupport::new(corners.clone(), vec![lp(&[1, 1]), lp(&[3, 3])]).unwrap();
    let pair_b = SignedSupport::new(corners, vec![lp(&[1, 3]), lp(&[3, 1])]).unwrap();
    let pairs = !is_nonseparable(&pair_a).unwrap().0 && !is_nonseparable(&pair_b).unwrap().0;
    outcome(
        checked >= 500 && agree == checked && family && pairs,
        format!(
            "{agree}/{checked} agree with the triangulation oracle ({nonsep} nonseparable); square+center family nonseparable: {family}; diagonal pairs separable: {pairs}"
        ),
    )
}

fn criterion7(rng: &mut ChaCha8Rng) -> Outcome {
    let supports: Vec<(Vec<&[i64]>, Vec<&[i64]>)> = vec![
        (vec![&[0, 0], &[2, 0], &[0, 2], &[2, 2]], vec![&[1, 1]]),
        (vec![&[0, 0], &[4, 0], &[6, 4], &[2, 7], &[-2, 4]], vec![&[2, 3]]),
        (vec![&[0, 0], &[4, 0], &[4, 4], &[0, 4], &[2, 1]], vec![&[3, 1], &[3, 2]]),
        (vec![&[0, 0, 0], &[3, 0, 0], &[0, 3, 0], &[0, 0, 3]], vec![&[1, 1, 1]]),
    ];
    let (mut done, mut same, mut differ, mut tries) = (0, 0, 0, 0);
    while done < 20 && tries < 500 {
        tries += 1;
        let (plus, minus) = &supports[done % supports.len()];
        let mut terms: Vec<(LatticePoint, f64)> = plus.iter().map(|p| (lp(p), rng.gen_range(0.1..10.0))).collect();
        terms.extend(minus.iter().map(|p| (lp(p), -rng.gen_range(0.1..10.0))));
        let f = Signomial::new(terms).unwrap();
        let uni = HeightFunction::uniform(f.support());
        let mut hs = vec![1; f.support().a_minus().len()];
        hs[0] = 2;
        let raised = HeightFunction::from_minus(f.support(), &hs).unwrap();
        let a = check_copositivity(&f, &uni, &CheckOptions::default()).unwrap();
        let Some(ta) = a.track.as_ref().map(|t| t.t_star) else { continue };
        if (ta - 1.0).abs() <= 1e-6 {
            continue;
        }
        let b = check_copositivity(&f, &raised, &CheckOptions::default()).unwrap();
        let tb = b.track.as_ref().map_or(f64::NAN, |t| t.t_star);
        done += 1;
        same += (a.verdict.kind == b.verdict.kind && a.verdict.certified && b.verdict.certified) as usize;
        differ += ((ta - tb).abs() > 1e-9) as usize;
    }
    outcome(
        done == 20 && same == 20 && differ == 20,
        format!("{done} instances: {same} identical certified verdicts, {differ} with different t*"),
    )
}

fn criterion8() -> Outcome {
    let f = parse_text(
        "1 + x1^4*x2^2 + x1^2*x2^4 + 900*x1^2*x2^2 + 2*x1^2*x2 + 2*x1*x2^2 + 2*x1^3*x2^3 \
         - 60*x1*x2 - 60*x1^3*x2^2 - 60*x1^2*x2^3",
    )
    .unwrap();
    let mut lines = Vec::new();
    let mut pass = true;
    for seed in 0..4 {
        let opts = CheckOptions { seed, fallback_starts: 128, ..CheckOptions::default() };
        let d = check_copositivity(&f, &HeightFunction::uniform(f.support()), &opts).unwrap();
        let flagged = d.warnings.iter().any(|w| w.starts_with(NON_EXHAUSTIVE));
        let bad = d.verdict.kind == VerdictKind::NotCopositive && d.verdict.certified;
        pass &= !bad && (d.verdict.kind == VerdictKind::Inconclusive || flagged);
        lines.push(format!("seed {seed}: {:?}{}", d.verdict.kind, if flagged { " (non-exhaustive)" } else { "" }));
    }
    outcome(pass, format!("squared polynomial: {}", lines.join(", ")))
}

fn criterion9(dets: &Dets) -> Outcome {
    let smallest = dets.0.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    outcome(
        smallest > 1e-12 && !dets.0.is_empty(),
        format!("{} tracked endpoints, min |det| of the row-scaled Jacobian {smallest:.3e}", dets.0.len()),
    )
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut dets = Dets(Vec::new());
    let results = [
        criterion1(&mut dets),
        criterion2(&mut dets),
        criterion3(&mut rng, &mut dets),
        criterion4(&mut rng, &mut dets),
        criterion5(&mut rng, &mut dets),
        criterion6(&mut rng),
        criterion7(&mut rng),
        criterion8(),
    ];
    let last = criterion9(&dets);
    let mut failed = 0;
    for (i, r) in results.iter().chain(std::iter::once(&last)).enumerate() {
        println!("{} criterion {}: {}", if r.pass { "PASS" } else { "FAIL" }, i + 1, r.summary);
        failed += (!r.pass) as usize;
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

use copositive::certify::Interval;
use copositive::exact::{q_from_f64, rationalize, to_f64, LinearProgram, LpOutcome, Relation, Q};
use copositive::geometry::{barycentric_coordinates, is_nonseparable, LatticePoint, SignedSupport};
use copositive::oracles::{brute_force_nonseparable, circuit_tstar, square_tstar, SquareSupportCoeffs};
use copositive::signomial::{parse_text, to_text, HeightFunction, Signomial};
use copositive::sonc::{sonc_certificate, verify_certificate};
use copositive::tracker::{solve_tstar_nonseparable, TrackerConfig};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn lp(v: &[i64]) -> LatticePoint {
    LatticePoint(v.to_vec())
}

fn square(c: [f64; 5]) -> Signomial {
    parse_text(&SquareSupportCoeffs { c0: c[0], c1: c[1], c2: c[2], c3: c[3], c4: c[4] }.to_text()).unwrap()
}

fn tstar(f: &Signomial) -> f64 {
    let r = solve_tstar_nonseparable(f, &HeightFunction::uniform(f.support()), &TrackerConfig::default()).unwrap();
    assert!(r.converged);
    r.t_star
}

/// A simplex with vertices 0 and `scale_i e_i`, and an interior lattice point.
fn circuit_strategy() -> impl Strategy<Value = (Vec<(LatticePoint, f64)>, (LatticePoint, f64))> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(n as i64 + 2..=30i64, n),
                proptest::collection::vec(0.2f64..5.0, n + 1),
                0.2f64..5.0,
            )
        })
        .prop_map(|(n, scales, cs, d)| {
            let mut pos = vec![(lp(&vec![0; n]), cs[0])];
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = scales[i];
                pos.push((LatticePoint(e), cs[i + 1]));
            }
            (pos, (lp(&vec![1; n]), d))
        })
}

fn circuit_signomial(pos: &[(LatticePoint, f64)], neg: &(LatticePoint, f64)) -> Signomial {
    let mut terms = pos.to_vec();
    terms.push((neg.0.clone(), -neg.1));
    Signomial::new(terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn barycentric_reconstructs(a in proptest::collection::vec(-6i64..=6, 6), w in proptest::collection::vec(1i64..5, 3)) {
        let s = vec![lp(&[a[0], a[1]]), lp(&[a[2], a[3]]), lp(&[a[4], a[5]])];
        let det = (a[2] - a[0]) * (a[5] - a[1]) - (a[4] - a[0]) * (a[3] - a[1]);
        prop_assume!(det != 0);
        let tot: i64 = w.iter().sum();
        // Scale up so the weighted point is a lattice point.
        let s: Vec<LatticePoint> = s.iter().map(|p| LatticePoint(p.0.iter().map(|v| v * tot).collect())).collect();
        let b: Vec<i64> = (0..2).map(|k| (0..3).map(|i| w[i] * s[i].0[k]).sum::<i64>() / tot).collect();
        let l = barycentric_coordinates(&s, &LatticePoint(b)).unwrap();
        let sum: Q = l.iter().sum();
        prop_assert!(sum.is_one());
        for i in 0..3 {
            prop_assert_eq!(l[i].clone(), Q::new(w[i].into(), tot.into()));
        }
    }

    #[test]
    fn separability_invariant_under_translation_and_order(
        pts in proptest::collection::btree_set((0i64..5, 0i64..5), 4..7),
        k in 1usize..3,
        shift in (-3i64..3, -3i64..3),
    ) {
        let pts: Vec<Vec<i64>> = pts.into_iter().map(|(x, y)| vec![x, y]).collect();
        prop_assume!(pts.len() > k + 2);
        let (minus, plus) = pts.split_at(k);
        let make = |sx: i64, sy: i64, rev: bool| {
            let mv = |v: &[Vec<i64>]| -> Vec<LatticePoint> {
                let mut out: Vec<LatticePoint> = v.iter().map(|p| lp(&[p[0] + sx, p[1] + sy])).collect();
                if rev { out.reverse(); }
                out
            };
            SignedSupport::new(mv(plus), mv(minus))
        };
        let Ok(base) = make(0, 0, false) else { return Ok(()) };
        let Ok(moved) = make(shift.0, shift.1, true) else { return Ok(()) };
        let a = is_nonseparable(&base);
        let b = is_nonseparable(&moved);
        prop_assume!(a.is_ok());
        prop_assert_eq!(a.unwrap().0, b.unwrap().0);
    }

    #[test]
    fn nonseparability_matches_brute_force(
        pts in proptest::collection::btree_set((0i64..5, 0i64..5), 4..8),
        k in 1usize..3,
    ) {
        let pts: Vec<LatticePoint> = pts.into_iter().map(|(x, y)| lp(&[x, y])).collect();
        prop_assume!(pts.len() >= k + 3);
        let sup = SignedSupport::new(pts[k..].to_vec(), pts[..k].to_vec()).unwrap();
        let Ok(brute) = brute_force_nonseparable(&sup) else { return Ok(()) };
        prop_assert_eq!(is_nonseparable(&sup).unwrap().0, brute);
    }

    #[test]
    fn circuit_tstar_times_d_is_theta((pos, neg) in circuit_strategy()) {
        let f = circuit_signomial(&pos, &neg);
        let t = tstar(&f);
        let expect = circuit_tstar(&pos, &neg).unwrap();
        prop_assert!((t - expect).abs() <= 1e-8 * expect, "{} vs {}", t, expect);
    }

    #[test]
    fn square_tstar_matches_closed_form(c in proptest::array::uniform5(0.1f64..10.0)) {
        let t = tstar(&square(c));
        let (_, tp) = square_tstar(&SquareSupportCoeffs { c0: c[0], c1: c[1], c2: c[2], c3: c[3], c4: c[4] });
        prop_assert!((t - tp).abs() <= 1e-6 * tp);
    }

    #[test]
    fn verdict_sign_ignores_heights(c in proptest::array::uniform5(0.1f64..10.0), h in 2u32..4) {
        let f = square(c);
        let t1 = tstar(&f);
        let r = solve_tstar_nonseparable(&f, &HeightFunction::from_minus(f.support(), &[h]).unwrap(), &TrackerConfig::default()).unwrap();
        prop_assume!((t1 - 1.0).abs() > 1e-6);
        prop_assert_eq!(t1 > 1.0, r.t_star > 1.0);
        // t^h is what enters the system.
        prop_assert!((r.t_star.powi(h as i32) - t1).abs() <= 1e-8 * t1);
    }

    #[test]
    fn tracking_is_deterministic(c in proptest::array::uniform5(0.1f64..10.0)) {
        let f = square(c);
        let h = HeightFunction::uniform(f.support());
        let a = solve_tstar_nonseparable(&f, &h, &TrackerConfig::default()).unwrap();
        let b = solve_tstar_nonseparable(&f, &h, &TrackerConfig::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn certificates_sum_to_input(c in proptest::array::uniform4(0.1f64..10.0), frac in 0.1f64..0.95) {
        let bound = (4.0 * (c[0] * c[3] + c[1] * c[2]) + 8.0 * (c[0] * c[1] * c[2] * c[3]).sqrt()).sqrt();
        let f = square([c[0], c[1], c[2], c[3], frac * bound]);
        let cert = sonc_certificate(&f, &HeightFunction::uniform(f.support()), &TrackerConfig::default()).unwrap();
        let report = verify_certificate(&cert);
        prop_assert!(report.pass, "{:?}", report);
        prop_assert!(cert.margins.iter().all(|m| m.unwrap() > 0.0));
        let delta = cert.delta.unwrap().delta;
        prop_assert!(delta.iter().sum::<Q>().is_one());
    }

    #[test]
    fn text_round_trip(cs in proptest::collection::vec(-50i64..50, 4), e in proptest::collection::vec(-3i64..4, 8)) {
        let terms: Vec<(LatticePoint, f64)> = (0..4)
            .map(|i| (lp(&[e[2 * i], e[2 * i + 1]]), if cs[i] == 0 { 1.0 } else { cs[i] as f64 }))
            .collect();
        let Ok(f) = Signomial::new(terms) else { return Ok(()) };
        let g = copositive::signomial::parse_polynomial(&to_text(&f), Some(2)).unwrap();
        prop_assert_eq!(f.terms(), g.terms());
    }

    #[test]
    fn rationalize_within_tolerance(x in -1e6f64..1e6) {
        prop_assume!(x.abs() > 1e-6);
        let r = rationalize(x, 1e-12);
        prop_assert!((to_f64(&r) - x).abs() <= 1e-12 * x.abs());
    }

    #[test]
    fn interval_ops_enclose(a in -1e3f64..1e3, b in -1e3f64..1e3, r in 0.0f64..1.0) {
        let x = Interval::around(a, r);
        let y = Interval::around(b, r);
        let exact = |v: f64| q_from_f64(v).unwrap();
        let (qa, qb) = (exact(a), exact(b));
        let inside = |i: Interval, v: Q| exact(i.lo) <= v && v <= exact(i.hi);
        prop_assert!(inside(x + y, &qa + &qb));
        prop_assert!(inside(x - y, &qa - &qb));
        prop_assert!(inside(x * y, &qa * &qb));
        prop_assert!(x.scale(0.01).exp().contains((a * 0.01).exp()));
    }

    #[test]
    fn lp_solutions_are_feasible(rows in proptest::collection::vec(proptest::collection::vec(0i64..6, 3), 1..4), rhs in proptest::collection::vec(1i64..9, 3)) {
        let mut lp = LinearProgram::new(3);
        lp.objective = vec![Q::one(), Q::one(), Q::zero()];
        for (r, b) in rows.iter().zip(&rhs) {
            lp.add(r.iter().map(|&v| Q::from_integer(v.into())).collect(), Relation::Le, Q::from_integer((*b).into()));
        }
        lp.add(vec![Q::one(), Q::one(), Q::one()], Relation::Le, Q::from_integer(20.into()));
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => {
                for (r, b) in rows.iter().zip(&rhs) {
                    let s: Q = r.iter().zip(&x).map(|(a, v)| Q::from_integer((*a).into()) * v).sum();
                    prop_assert!(s <= Q::from_integer((*b).into()));
                }
                prop_assert!(x.iter().all(|v| *v >= Q::zero()));
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

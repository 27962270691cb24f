use kernelmap::area::{area_closed, area_harmonic, area_quadrature, h_aux};
use kernelmap::field::{eval_u, jacobian, AlphaHarmonicMap, CoefficientSequence, DiskPoint};
use kernelmap::poisson::{boundary_of_map, series_solution};
use kernelmap::represent::{build_rep, eval_rep};
use kernelmap::specfun::{digamma, hyper_f, HyperTriple};
use kernelmap::univalence::{bound_m, bound_n};
use kernelmap::Complex64;
use proptest::prelude::*;

fn coeffs(max_k: i64) -> impl Strategy<Value = CoefficientSequence> {
    prop::collection::btree_map(-max_k..=max_k, (-1.0..1.0f64, -1.0..1.0f64), 1..5).prop_map(|m| {
        m.into_iter()
            .fold(CoefficientSequence::new(), |acc, (k, (re, im))| acc.with(k, Complex64::new(re, im)))
    })
}

fn point(r_max: f64) -> impl Strategy<Value = DiskPoint> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, th)| DiskPoint::new(r, th).unwrap())
}

fn alpha() -> impl Strategy<Value = f64> {
    -0.95..4.0f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_in_coefficients(a in alpha(), c1 in coeffs(6), c2 in coeffs(6), re in -2.0..2.0f64, p in point(0.95)) {
        let lam = Complex64::new(re, 0.5);
        let u = |c: CoefficientSequence| eval_u(&AlphaHarmonicMap::new(a, c).unwrap(), p).unwrap();
        let (u1, u2) = (u(c1.clone()), u(c2.clone()));
        prop_assert!((u(c1.plus(&c2)) - (u1 + u2)).norm() <= 1e-13 * (1.0 + u1.norm() + u2.norm()));
        prop_assert!((u(c1.scaled(lam)) - lam * u1).norm() <= 1e-13 * (1.0 + lam.norm() * u1.norm()));
    }

    #[test]
    fn reflected_conjugate_is_pointwise_conjugate(a in alpha(), c in coeffs(6), p in point(0.95)) {
        let u = eval_u(&AlphaHarmonicMap::new(a, c.clone()).unwrap(), p).unwrap();
        let w = eval_u(&AlphaHarmonicMap::new(a, c.reflected_conj()).unwrap(), p).unwrap();
        prop_assert!((w - u.conj()).norm() <= 1e-13 * (1.0 + u.norm()));
    }

    #[test]
    fn representation_matches_series(p_order in 1u32..=4, c in coeffs(7), pt in point(1.0 - 1e-9)) {
        let m = AlphaHarmonicMap::new(2.0 * f64::from(p_order - 1), c).unwrap();
        let rep = build_rep(&m).unwrap();
        let u = eval_u(&m, pt).unwrap();
        prop_assert!((eval_rep(&rep, pt) - u).norm() <= 1e-12 * (1.0 + u.norm()));
    }

    #[test]
    fn boundary_round_trip(a in alpha(), c in coeffs(8)) {
        let m = AlphaHarmonicMap::new(a, c.clone()).unwrap();
        let back = series_solution(a, &boundary_of_map(&m).unwrap()).unwrap();
        for (k, ck) in c.iter() {
            prop_assert!((back.coeffs().get(k) - ck).norm() <= 1e-13 * (1.0 + ck.norm()));
        }
    }

    #[test]
    fn hyper_monotone_by_sign(c in 0.2..4.0f64, fa in 0.0..1.0f64, fb in 0.0..1.0f64) {
        let a = -3.0 + fa * (c + 3.0);
        let b = -3.0 + fb * (c + 3.0);
        let p = HyperTriple::new(a, b, c).unwrap();
        let dir = if a * b <= 0.0 { -1.0 } else { 1.0 };
        let mut prev = hyper_f(p, 0.01).unwrap();
        for i in 2..=99 {
            let next = hyper_f(p, f64::from(i) / 100.0).unwrap();
            prop_assert!(dir * (next - prev) >= -1e-13 * prev.abs().max(1.0));
            prev = next;
        }
    }

    #[test]
    fn digamma_recurrence_and_order(x in 0.01..200.0f64, dx in 1e-6..5.0f64) {
        let lhs = digamma(x + 1.0).unwrap();
        prop_assert!((lhs - digamma(x).unwrap() - 1.0 / x).abs() <= 1e-13 * (1.0 + lhs.abs() + 1.0 / x));
        prop_assert!(digamma(x + dx).unwrap() > digamma(x).unwrap());
    }

    #[test]
    fn n_at_most_inverse_k(a in 1e-6..=2.0f64, k in 1u32..60) {
        let n = bound_n(a, k).unwrap();
        prop_assert!(n > 0.0 && bound_m(a, k).unwrap() > 0.0);
        if k == 1 && a == 2.0 {
            prop_assert_eq!(n, 1.0);
        } else {
            prop_assert!(n < 1.0 / f64::from(k));
        }
    }

    #[test]
    fn area_identity_even_alpha(p_order in 1u32..=4, raw in coeffs(5)) {
        let mut c = raw;
        c.set(0, Complex64::new(0.0, 0.0));
        prop_assume!(!c.is_empty());
        let m = AlphaHarmonicMap::new(2.0 * f64::from(p_order - 1), c).unwrap();
        let closed = area_closed(&m).unwrap();
        let quad = area_quadrature(&m, 64, 64).unwrap().value;
        // Signed areas can cancel, so compare against the unsigned mass.
        let mass: f64 = m.coeffs().iter().map(|(k, ck)| k.unsigned_abs() as f64 * ck.norm_sqr()).sum();
        prop_assert!((closed - quad).abs() <= 1e-9 * mass.max(1e-300) * std::f64::consts::PI);
    }

    #[test]
    fn harmonic_case_areas_coincide(raw in coeffs(6)) {
        let mut c = raw;
        c.set(0, Complex64::new(0.0, 0.0));
        prop_assert_eq!(area_closed(&AlphaHarmonicMap::new(0.0, c.clone()).unwrap()).unwrap(), area_harmonic(&c).unwrap());
    }

    #[test]
    fn h_negative_below_0_8(a in -0.999..0.8f64) {
        prop_assert!(h_aux(a).unwrap() < 0.0);
    }

    #[test]
    fn identity_map_jacobian(a in alpha(), p in point(0.9)) {
        // u = F_1 z with F_1 > 0 is sense-preserving.
        let m = AlphaHarmonicMap::new(a, CoefficientSequence::new().with(1, 1.0)).unwrap();
        prop_assert!(jacobian(&m, p).unwrap() > 0.0);
    }
}

#[test]
fn duplicate_indices_rejected() {
    let pairs = vec![(1, Complex64::new(1.0, 0.0)), (1, Complex64::new(2.0, 0.0))];
    assert!(CoefficientSequence::from_pairs(pairs).is_err());
}

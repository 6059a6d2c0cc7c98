use num_complex::Complex64;
use proptest::prelude::*;
use smallball_core::asymptotics::{combine_laws, SmallBallLaw};
use smallball_core::bvp_algebra::{random_ensemble, root_moduli, theta_coefficients, verify_rho_sum};
use smallball_core::catalog::BvpSpec;
use smallball_core::oracle::{prob_imhof, prob_saddlepoint, CompletedSpectrum};
use smallball_core::special::{hurwitz_zeta, psi_delta, vandermonde_abs};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn nodes() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 2..7)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn law() -> impl Strategy<Value = SmallBallLaw> {
    (0.1..10.0f64, -3.0..3.0f64, 0.5..4.0f64, 0.01..2.0f64).prop_map(|(k, a, d, e)| SmallBallLaw::norm(k, a, d, e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vandermonde_permutation(v in nodes().prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()))) {
        prop_assert!(close(vandermonde_abs(&v.0), vandermonde_abs(&v.1), 1e-12));
    }

    #[test]
    fn vandermonde_scaling(v in nodes(), re in -3.0..3.0f64, im in 0.1..3.0f64) {
        let c = Complex64::new(re, im);
        let n = v.len() as i32;
        let scaled: Vec<Complex64> = v.iter().map(|&z| c * z).collect();
        prop_assert!(close(vandermonde_abs(&scaled), vandermonde_abs(&v) * c.norm().powi(n * (n - 1) / 2), 1e-11));
    }

    #[test]
    fn law_round_trip(l in law()) {
        prop_assert_eq!(l.to_squared().to_norm(), l);
        prop_assert_eq!(l.to_squared().to_squared(), l.to_squared());
    }

    #[test]
    fn squared_variable_agrees(l in law(), eps in 0.05..1.0f64) {
        prop_assert!(close(l.log_eval(eps), l.to_squared().log_eval(eps * eps), 1e-12));
    }

    #[test]
    fn scaling_is_change_of_variable(l in law(), s in 0.2..5.0f64, eps in 0.05..1.0f64) {
        prop_assert!(close(l.scale(s).log_eval(eps), l.log_eval(eps / s), 1e-11));
    }

    #[test]
    fn combine_commutes(p in law(), q in law()) {
        let q = SmallBallLaw { d: p.d, ..q };
        let (p, q) = (p.to_squared(), q.to_squared());
        let pq = combine_laws(&p, &q).unwrap();
        let qp = combine_laws(&q, &p).unwrap();
        prop_assert!(pq.rel_diff(&qp) < 1e-12);
        prop_assert!(close(pq.lemma_d(), p.lemma_d() + q.lemma_d(), 1e-12));
    }

    #[test]
    fn combine_rejects_mismatch(p in law(), q in law()) {
        prop_assume!((p.d - q.d).abs() > 1e-6);
        prop_assert!(combine_laws(&p.to_squared(), &q.to_squared()).is_err());
        prop_assert!(combine_laws(&p, &p).is_err());
    }

    #[test]
    fn psi_delta_at_zero(delta in -0.9..3.0f64) {
        prop_assert!((psi_delta(delta, Complex64::new(0.0, 0.0)) - 1.0).norm() < 1e-13);
    }

    #[test]
    fn psi_delta_even_and_real(delta in -0.9..3.0f64, re in -5.0..5.0f64, im in -5.0..5.0f64) {
        let z = Complex64::new(re, im);
        let a = psi_delta(delta, z);
        prop_assert!((a - psi_delta(delta, -z)).norm() <= 1e-11 * a.norm().max(1.0));
        prop_assert!((a.conj() - psi_delta(delta, z.conj())).norm() <= 1e-11 * a.norm().max(1.0));
    }

    #[test]
    fn hurwitz_recurrence(s in 1.5..12.0f64, a in 0.1..50.0f64) {
        prop_assert!(close(hurwitz_zeta(s, a), a.powf(-s) + hurwitz_zeta(s, a + 1.0), 1e-12));
    }

    #[test]
    fn random_bvps_satisfy_phase_identity(seed in any::<u64>(), ell in 1usize..=3) {
        for bvp in random_ensemble(ell, 5, seed) {
            prop_assert!(verify_rho_sum(&bvp).unwrap() < 1e-8);
        }
    }

    #[test]
    fn condition_rescaling_keeps_roots(seed in any::<u64>(), ell in 1usize..=3, f in prop_oneof![-4.0..-0.25f64, 0.25..4.0f64], row in 0usize..6) {
        let bvp = random_ensemble(ell, 1, seed).pop().unwrap();
        let mut conds = bvp.conditions.clone();
        let j = row % conds.len();
        conds[j] = conds[j].scaled(f);
        let scaled = BvpSpec::new(ell, bvp.leading_factor, conds, bvp.zero_mode).unwrap();
        let (a, b) = (root_moduli(&theta_coefficients(&bvp).unwrap()), root_moduli(&theta_coefficients(&scaled).unwrap()));
        let (mut a, mut b) = ([a.0, a.1], [b.0, b.1]);
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert!(close(a[0], b[0], 1e-9) && close(a[1], b[1], 1e-9));
        prop_assert!(verify_rho_sum(&scaled).unwrap() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_oracles_agree(lambda in prop::collection::vec(0.01..1.0f64, 1..12), q in 0.3..1.5f64) {
        let cs = CompletedSpectrum::finite(lambda.clone()).unwrap();
        let eps = (q * cs.trace()).sqrt();
        let (s, i) = (prob_saddlepoint(&cs, eps).unwrap(), prob_imhof(&cs, eps).unwrap());
        prop_assert!(s > 0.0 && s < 1.0);
        prop_assert!(close(s, i, 1e-6), "saddle {} imhof {} for {:?}", s, i, lambda);
    }
}

use proptest::prelude::*;
use std::f64::consts::{PI, TAU};
use twomode::fock::dot;
use twomode::ladder::{
    apply_ladder, commutator_deficit, commutator_deficit_closed_form, tof_rotate, LadderKind,
};
use twomode::states::*;
use twomode::{apply_monomial, expectation, Complex64, Factor, Mode, ModeMonomial, TwoModeState};

fn factor() -> impl Strategy<Value = Factor> {
    (any::<bool>(), any::<bool>()).prop_map(|(create, one)| {
        let m = if one { Mode::One } else { Mode::Zero };
        if create {
            Factor::Create(m)
        } else {
            Factor::Annihilate(m)
        }
    })
}

fn monomial() -> impl Strategy<Value = ModeMonomial> {
    prop::collection::vec(factor(), 0..=6).prop_map(|f| ModeMonomial::new(f).unwrap())
}

fn state(n: usize) -> impl Strategy<Value = TwoModeState> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n + 1)
        .prop_filter("nonzero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(move |v| {
            TwoModeState::new(
                n,
                v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
                "random",
            )
            .unwrap()
        })
}

fn sized_pair() -> impl Strategy<Value = (TwoModeState, TwoModeState)> {
    (1usize..40).prop_flat_map(|n| (state(n), state(n)))
}

proptest! {
    #[test]
    fn monomial_adjointness((a, b) in sized_pair(), op in monomial()) {
        let lhs = dot(a.amplitudes(), &apply_monomial(&b, &op));
        let rhs = dot(&apply_monomial(&a, &op.adjoint()), b.amplitudes());
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
    }

    #[test]
    fn hermitian_products_have_real_nonnegative_means((s, _) in sized_pair(), op in monomial()) {
        let mut f = op.adjoint().factors().to_vec();
        f.extend_from_slice(op.factors());
        if f.len() <= twomode::fock::MAX_MONOMIAL_LEN {
            let v = expectation(&s, &ModeMonomial::new(f).unwrap());
            prop_assert!(v.im.abs() < 1e-9 * (1.0 + v.re.abs()));
            prop_assert!(v.re > -1e-9);
        }
    }

    #[test]
    fn number_conservation((s, _) in sized_pair(), op in monomial()) {
        let out = apply_monomial(&s, &op);
        let n = s.n_particles();
        match op.l_shift() {
            None => prop_assert!(out.iter().all(|c| c.norm() == 0.0)),
            Some(shift) => {
                for l in 0..=n {
                    if let Some((lp, _)) = op.act_on_basis(n, l) {
                        prop_assert_eq!(lp as isize - l as isize, shift);
                    }
                }
            }
        }
    }

    #[test]
    fn display_parse_round_trip(op in monomial()) {
        let text = op.to_string();
        prop_assert_eq!(text.parse::<ModeMonomial>().unwrap(), op);
    }

    #[test]
    fn commutator_deficit_closed_form_holds((s, _) in sized_pair()) {
        for kind in [LadderKind::B, LadderKind::BPrime] {
            let d = commutator_deficit(&s, kind) - commutator_deficit_closed_form(&s, kind);
            prop_assert!(d.abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_adjoint_pairs((a, b) in sized_pair()) {
        for kind in [LadderKind::B, LadderKind::BPrime] {
            let lhs = dot(a.amplitudes(), &apply_ladder(&b, kind, false));
            let rhs = dot(&apply_ladder(&a, kind, true), b.amplitudes());
            prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn tof_rotations_compose((s, _) in sized_pair(), x in -PI..PI, y in -PI..PI) {
        let two = tof_rotate(&tof_rotate(&s, x), y);
        let one = tof_rotate(&s, x + y);
        for (p, q) in two.amplitudes().iter().zip(one.amplitudes()) {
            prop_assert!((p - q).norm() < 1e-10);
        }
    }

    #[test]
    fn factories_normalize(n in 2usize..400, frac in 0.05..0.95f64, phi in -PI..PI, r in 0.0..5.0f64, theta in 0.0..TAU) {
        let l0 = frac * n as f64;
        let states = [
            make_coherent(&CoherentParams::new(n, l0, phi)).unwrap(),
            make_coherent_prime(&CoherentParams::new(n, l0, phi)).unwrap(),
            make_phase_state(&PhaseStateParams::new(n, l0, phi)).unwrap(),
            make_cat(&CatParams::new(n, l0, phi, r, theta)).unwrap(),
            make_gaussian_fragmented(&GaussianFragParams::new(n, l0, r, theta).with_boundary_tol(1.0)).unwrap(),
        ];
        for s in &states {
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12, "{}", s.label());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mobius_round_trip(u in 0.0..50.0f64, theta_k in 0.0..TAU, b2 in 0.05..60.0f64) {
        let k = KangsooParams::for_beta_sq(u, theta_k, b2);
        let (r, theta) = kangsoo_to_cat(&k).unwrap();
        prop_assert!((0.0..TAU).contains(&theta));
        let back = cat_to_kangsoo(r, theta, k.lambda_beta).unwrap();
        prop_assert!((back.u_mod - u).abs() < 1e-8 * (1.0 + u));
        if u > 1e-6 {
            let dtheta = (back.theta_k - theta_k).rem_euclid(TAU);
            prop_assert!(dtheta.min(TAU - dtheta) < 1e-7, "{} vs {}", back.theta_k, theta_k);
        }
    }

    #[test]
    fn inverse_mobius_round_trip(r in 0.0..50.0f64, theta in 0.0..TAU, b2 in 0.05..60.0f64) {
        let lam = lambda_beta(b2);
        prop_assume!((Complex64::from_polar(r, theta) + 1.0).norm() > 1e-6);
        let k = cat_to_kangsoo(r, theta, lam).unwrap();
        prop_assume!((Complex64::from_polar(k.u_mod * lam, k.theta_k + PI / 2.0) - 1.0).norm() > 1e-6);
        let (r2, theta2) = kangsoo_to_cat(&k).unwrap();
        prop_assert!((r2 - r).abs() < 1e-7 * (1.0 + r));
        if r > 1e-6 {
            let d = (theta2 - theta).rem_euclid(TAU);
            prop_assert!(d.min(TAU - d) < 1e-7);
        }
    }
}

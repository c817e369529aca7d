use owc::kclasses::{
    cy_limit_theta, euler, kappa_shift, projective_pushforward_k, projective_pushforward_k_closed,
    quantum_integer, rigidity_closed, rigidity_residue, substitute_chern_character, symmetrized_wedge,
    theta_closed, theta_coefficients, theta_from_roots, theta_shift_identity, wedge, EulerArg, KError,
    VirtualClass, HBAR,
};
use owc::ring::{factorial, Laurent, Monomial, RatFn, KAPPA};
use proptest::prelude::*;

fn weight(exps: &[i64]) -> Monomial {
    let mut m = Monomial::one();
    for (i, e) in exps.iter().enumerate() {
        m = m.mul(&Monomial::var(&format!("t{}", i + 1), *e));
    }
    m
}

/// Honest K-theory classes with nontrivial weights in `t1, t2`.
fn honest_class() -> impl Strategy<Value = VirtualClass> {
    prop::collection::vec((-2i64..=2, -2i64..=2), 1..4)
        .prop_filter("trivial weight", |ws| ws.iter().all(|(a, b)| (*a, *b) != (0, 0)))
        .prop_map(|ws| VirtualClass::k_honest(ws.iter().map(|(a, b)| weight(&[*a, *b]))))
}

fn virtual_class() -> impl Strategy<Value = VirtualClass> {
    prop::collection::vec(((-1i64..=1, -1i64..=1), prop::bool::ANY), 1..4)
        .prop_filter("trivial weight", |ws| ws.iter().all(|((a, b), _)| (*a, *b) != (0, 0)))
        .prop_map(|ws| VirtualClass::k(ws.iter().map(|((a, b), pos)| (weight(&[*a, *b]), if *pos { 1 } else { -1 }))))
}

fn invert_z(f: &RatFn) -> RatFn {
    f.map(|p| p.substitute_monomial("z", &Monomial::var("z", -1))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wedge_symmetry(e in honest_class()) {
        let r = e.rank();
        let lhs = wedge(&e, "z").unwrap();
        let minus_z = if r % 2 == 0 { Laurent::var_pow("z", r) } else { -Laurent::var_pow("z", r) };
        let factor = RatFn::from(&minus_z * &e.det().unwrap());
        let rhs = &factor * &invert_z(&wedge(&e.dual(), "z").unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetrized_wedge_symmetry(e in honest_class()) {
        let lhs = symmetrized_wedge(&e, "z").unwrap();
        let rhs = invert_z(&symmetrized_wedge(&e.dual(), "z").unwrap());
        let rhs = if e.rank() % 2 == 0 { rhs } else { -&rhs };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_class_is_multiplicative_inverse_on_negation(e in virtual_class()) {
        let a = euler(&e, EulerArg::Var("z"), true).unwrap();
        let b = euler(&e.neg(), EulerArg::Var("z"), true).unwrap();
        prop_assert_eq!(&a * &b, RatFn::one());
    }

    #[test]
    fn pushforward_matches_closed_form(r in 1usize..=4, k in -6i64..=6, twist in -1i64..=1) {
        let roots: Vec<Monomial> = (0..r).map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            weight(&e).mul(&Monomial::var(KAPPA, twist))
        }).collect();
        let v = VirtualClass::k_honest(roots);
        let got = projective_pushforward_k(&Laurent::var_pow("s", k), "s", &v).unwrap();
        prop_assert_eq!(got, projective_pushforward_k_closed(k, &v).unwrap());
    }

    #[test]
    fn theta_shift(ab in virtual_class(), ba in virtual_class()) {
        prop_assert!(theta_shift_identity(&ab, &ba, 3).unwrap());
    }

    #[test]
    fn rigidity_is_a_quantum_integer(r in 1usize..=5) {
        let v = VirtualClass::k_honest((0..r).map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            weight(&e)
        }));
        let res = rigidity_residue(&v).unwrap();
        prop_assert_eq!(res.div_exact(&kappa_shift()).unwrap(), quantum_integer(r as i64));
        prop_assert_eq!(res, rigidity_closed(r as i64));
    }
}

#[test]
fn trivial_weight_at_one_is_rejected() {
    let e = VirtualClass::k_honest([Monomial::one(), weight(&[1])]);
    assert_eq!(euler(&e, EulerArg::One, false), Err(KError::TrivialWeightAtOne));
}

#[test]
fn theta_series_is_divisible_by_hbar() {
    let hbar = Laurent::var(HBAR);
    for rk in 0..=3 {
        let th = theta_coefficients(rk, 6).unwrap();
        assert_eq!(th[0], Laurent::int(if rk % 2 == 0 { 1 } else { -1 }));
        for n in 1..=6 {
            assert!(th[n].div_exact(&hbar).is_ok(), "series theta_{n}, rank {rk}");
            assert!(theta_closed(rk, n).div_exact(&hbar).is_ok(), "closed theta_{n}, rank {rk}");
        }
    }
}

/// The series in formal Chern characters agrees with the kernel expanded
/// directly from Chern roots, for a class of rank 1 with three roots.
#[test]
fn theta_series_matches_root_expansion() {
    let roots = [(Laurent::var("x1"), 1), (Laurent::var("x2"), 1), (Laurent::var("y"), -1)];
    let e = VirtualClass::coh(roots);
    let order = 4;
    let from_roots = theta_from_roots(&e, order).unwrap();
    let series = theta_coefficients(e.rank(), order).unwrap();
    for n in 0..=order {
        let sub = substitute_chern_character(&series[n], &e, order as u32).unwrap();
        assert_eq!(sub, from_roots[n].clone().untruncated(), "theta_{n}");
    }
}

/// For a line bundle with root `x` the kernel is `(x - u)/(u - hbar - x)`,
/// whose `hbar`-linear part is `-hbar sum x^n u^(-n-1)`; hence
/// `theta_(n+1)/hbar` at `hbar = 0` is `-x^n = -n! ch_n`.
#[test]
fn calabi_yau_limit_of_a_line_bundle() {
    for n in 1..=5usize {
        let got = cy_limit_theta(1, n).unwrap();
        let want = -Laurent::var(&format!("ch{n}")).scale(&factorial(n as u64));
        assert_eq!(got, want, "n = {n}");
    }
}

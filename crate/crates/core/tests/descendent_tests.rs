use owc::descendent::{
    adams, build_xi, ch_from_descendents, delta_apply, delta_matrix, dt_to_pt, exp_minus_delta,
    factorization_failures, format_vertex, recursion_coefficients, standard_degree, substitute_ch, y_explicit,
    y_recursion, y_series, Names, SetPartition,
};
use owc::ring::{factorial, q, Laurent, Monomial, Q};
use owc::ucoeff::mu_n;
use num_traits::One;
use proptest::prelude::*;

const T: &str = "@t";

fn v(name: &str) -> Laurent {
    Laurent::var(name)
}

fn up_to_degree(f: &Laurent, order: i64) -> Laurent {
    f.filter_terms(|m| m.exp2(T) <= 2 * order).eval_one(T)
}

#[test]
fn delta_on_two_keys() {
    let names = Names::default_for(2).unwrap();
    let m = delta_matrix(3, &names);
    let (bottom, top) = (SetPartition::singletons(3), SetPartition::whole(3));
    assert_eq!(m.entry(&bottom, &bottom), v("x{}") - v("x{k1}") - v("x{k2}"));
    assert_eq!(m.entry(&top, &bottom), v("x{k1,k2}"));
    assert_eq!(m.entry(&top, &top), v("x{}") - v("x{k1+k2}"));
    assert!(m.entry(&bottom, &top).is_zero());
    assert!(m.is_upper_triangular());
}

#[test]
fn coproduct_terms_on_three_singletons() {
    let terms = delta_apply(&SetPartition::singletons(7));
    assert_eq!(terms.len(), 8);
    let merged_all = terms.iter().find(|((p, _), _)| p.len() == 1).unwrap();
    assert_eq!(*merged_all.1, -1);
    let pair_merges = terms.iter().filter(|((p, _), _)| p.len() == 2).count();
    assert_eq!(pair_merges, 3);
}

/// One key: `<σ{k}|e^{-Δ}|σ{k}> = exp(x{k} - x{})`.
#[test]
fn exponential_with_one_key() {
    let names = Names::default_for(1).unwrap();
    let order = 5;
    let g = v("x{k}") - v("x{}");
    let mut want = Laurent::zero();
    let mut power = Laurent::one();
    for m in 0..=order {
        want = &want + &power.scale(&(Q::one() / factorial(m as u64)));
        power = &power * &g;
    }
    assert_eq!(y_series(1, &names, order).eval_one(T), want);
}

/// Two keys, to second order: with `d_B = x{} - x{k1} - x{k2}`,
/// `d_T = x{} - x{k1+k2}` and `e = x{k1,k2}` the corner of `exp` of the
/// upper-triangular matrix is `-e - e (λ_T + λ_B)/2 + ..` where `λ = -d`.
#[test]
fn exponential_with_two_keys_to_second_order() {
    let names = Names::default_for(2).unwrap();
    let e = v("x{k1,k2}");
    let lam_sum = v("x{k1+k2}") + v("x{k1}") + v("x{k2}") - v("x{}").scale(&q(2));
    let want = -&e - (&e * &lam_sum).scale(&Q::new(1.into(), 2.into()));
    assert_eq!(y_series(3, &names, 2).eval_one(T), want);
}

/// Two keys, to fifth order, against the divided-difference formula
/// `f(M)_{TB} = M_{TB} sum_m h_(m-1)(λ_T, λ_B)/m!`.
#[test]
fn exponential_with_two_keys_divided_differences() {
    let names = Names::default_for(2).unwrap();
    let order = 5usize;
    let lt = v("x{k1+k2}") - v("x{}");
    let lb = v("x{k1}") + v("x{k2}") - v("x{}");
    let mut want = Laurent::zero();
    for m in 1..=order {
        let mut h = Laurent::zero();
        for i in 0..m {
            h = &h + &(&lt.pow(i as u32) * &lb.pow((m - 1 - i) as u32));
        }
        want = &want + &(&(-v("x{k1,k2}")) * &h).scale(&(Q::one() / factorial(m as u64)));
    }
    let got = y_series(3, &names, order).eval_one(T);
    let want = want.filter_terms(|mono| mono.pairs().iter().map(|(_, e)| e / 2).sum::<i64>() <= order as i64);
    assert_eq!(got, want);
}

#[test]
fn three_key_explicit_solution() {
    let names = Names::default_for(3).unwrap();
    let d = v("DT0(1)");
    let dinv = Laurent::var_pow("DT0(1)", -1);
    let single = |k: &str| v(&format!("DT0(σ{{{k}}})"));
    let pairs = &(&(&single("k1,k2") * &single("k3")) + &(&single("k1,k3") * &single("k2"))) + &(&single("k2,k3") * &single("k1"));
    let triple = &(&single("k1") * &single("k2")) * &single("k3");
    let want = &(&single("k1,k2,k3") - &(&pairs * &dinv)) + &(&triple * &dinv.pow(2)).scale(&q(2));
    assert_eq!(y_explicit(7, &names), want);
    assert_eq!(y_recursion(7, &names), want);
    assert_eq!(y_explicit(0, &names), d);
}

#[test]
fn recursion_equals_explicit_solution() {
    for n in 0..=4 {
        let names = Names::default_for(n).unwrap();
        let ground = names.ground();
        for s in 0..=ground {
            if s & ground == s {
                assert_eq!(y_recursion(s, &names), y_explicit(s, &names), "N = {n}, S = {s:b}");
            }
        }
    }
}

#[test]
fn factorization_identity_to_fourth_order() {
    for n in 1..=4 {
        let names = Names::default_for(n).unwrap();
        let failures = factorization_failures(&names, 4);
        assert!(failures.is_empty(), "N = {n}: {failures:?}");
    }
}

#[test]
fn truncations_are_stable() {
    for n in 1..=3 {
        let names = Names::default_for(n).unwrap();
        let ground = names.ground();
        let big = exp_minus_delta(ground, &names, 5);
        for order in 1..=4i64 {
            let small = exp_minus_delta(ground, &names, order as usize);
            for r in &small.states {
                for c in &small.states {
                    assert_eq!(
                        up_to_degree(&small.graded_entry(r, c), order),
                        up_to_degree(&big.graded_entry(r, c), order),
                        "N = {n}, order {order}"
                    );
                }
            }
        }
    }
}

#[test]
fn correspondence_for_zero_one_and_two_keys() {
    let n0 = Names::default_for(0).unwrap();
    assert_eq!(format_vertex(&dt_to_pt(&n0).theorem_form), "PT(1)·DT0(1)");

    let n1 = Names::default_for(1).unwrap();
    assert_eq!(dt_to_pt(&n1).to_string(), "DT(σ{k}) = PT(σ{k})·DT0(σ{k})");

    let n2 = Names::default_for(2).unwrap();
    let id = dt_to_pt(&n2);
    let dinv = Laurent::var_pow("DT0(1)", -1);
    let (a, b) = (v("DT0(σ{k1})"), v("DT0(σ{k2})"));
    let ab = &a * &b;
    let want = &(&(&v("PT(σ{k1,k2})") * &ab) * &dinv) + &(&v("PT(σ{k1+k2})") * &(&v("DT0(σ{k1,k2})") - &(&ab * &dinv)));
    assert_eq!(id.theorem_form, want);
    assert_eq!(id.lhs, "DT(σ{k1,k2})");
    for n in 0..=3 {
        let names = Names::default_for(n).unwrap();
        assert!(dt_to_pt(&names).agrees(&names).unwrap(), "N = {n}");
    }
}

/// `c_n = (-1)^(n-1) (n-1)!` solves the recursion because `mu_n = 0`.
#[test]
fn recursion_coefficients_from_mu() {
    let c = recursion_coefficients(6);
    for n in 1..=6usize {
        let sign = if n % 2 == 1 { Q::one() } else { -Q::one() };
        assert_eq!(c[n - 1], sign * factorial((n - 1) as u64), "c_{n}");
        if n > 1 {
            assert_eq!(mu_n(n), q(0));
        }
    }
}

#[test]
fn set_partitions_are_validated() {
    assert!(SetPartition::new(3, vec![1, 1]).is_err());
    assert!(SetPartition::new(3, vec![1]).is_err());
    assert!(SetPartition::new(3, vec![0, 3]).is_err());
    let p = SetPartition::new(7, vec![4, 3]).unwrap();
    assert_eq!(p.key_sums(&[2, -1, 5]), vec![1, 5]);
    assert!(SetPartition::singletons(7).refines(&p));
    assert_eq!(SetPartition::all(15).len(), 15);
}

/// At `hbar = 0`, `Ξ^(k)` is `(-1)^rk (rk + sum_n k^n ch_n)`.
#[test]
fn xi_in_the_calabi_yau_limit() {
    for rank in 0..=2i64 {
        for k in -2..=2i64 {
            let xi = build_xi(k, rank, 4).unwrap();
            let at_zero = xi.filter_terms(|m| m.exp2("hbar") == 0);
            let mut want = Laurent::int(rank);
            for n in 1..=4u32 {
                want = &want + &v(&format!("ch{n}")).scale(&q(k.pow(n)));
            }
            let want = if rank % 2 == 0 { want } else { -want };
            assert_eq!(at_zero, want, "rank {rank}, k {k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// `θ_(n+1)/hbar` is homogeneous of degree `n`, so `Ξ^(k)` is the Adams
    /// operation `ψ^k` applied to `Ξ^(1)`.
    #[test]
    fn xi_is_an_adams_image(k in -3i64..=3, rank in 0i64..=2) {
        let base = build_xi(1, rank, 4).unwrap();
        prop_assert_eq!(build_xi(k, rank, 4).unwrap(), adams(k, &base, &standard_degree).unwrap());
    }

    #[test]
    fn descendent_chern_characters_are_homogeneous(n in 1i64..=3, k in -2i64..=3) {
        let ch = ch_from_descendents(n);
        prop_assert_eq!(adams(k, &ch, &standard_degree).unwrap(), ch.scale(&q(k.pow(n as u32))));
    }
}

#[test]
fn substitution_removes_chern_characters_and_hbar() {
    let xi = build_xi(1, 1, 2).unwrap();
    let sub = substitute_ch(&xi, 2).unwrap();
    for s in sub.symbols() {
        assert!(!s.starts_with("ch") && &*s != "hbar", "leftover symbol {s}");
    }
    assert!(adams(2, &Laurent::mono(Monomial::var("mystery", 1)), &standard_degree).is_err());
}

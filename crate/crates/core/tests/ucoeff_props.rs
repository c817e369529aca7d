use std::collections::BTreeMap;

use owc::classes::{self, Class, EffectiveMonoid};
use owc::combinat::cut_points;
use owc::freelie::left_nested;
use owc::ring::{factorial, q, Q};
use owc::ucoeff::{
    assemble_left_nested, c_n, double_groupings, mu_n, s_coeff, simple_type, u_coeff, u_side, utilde_coeff,
    utilde_lie_element, StabilityData,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

/// `(d . c)/(r . c)` with `r` strictly positive, so every nonzero class in
/// the positive quadrant has a finite slope.
fn ratio() -> impl Strategy<Value = StabilityData> {
    ((-4i64..=4, -4i64..=4), (1i64..=3, 1i64..=3))
        .prop_map(|((d1, d2), (r1, r2))| StabilityData::ratio(vec![d1, d2], vec![r1, r2]))
}

fn part() -> impl Strategy<Value = Class> {
    (0i64..=2, 0i64..=2).prop_filter("nonzero", |(a, b)| *a + *b > 0).prop_map(|(a, b)| vec![a, b])
}

fn parts(max: usize) -> impl Strategy<Value = Vec<Class>> {
    prop::collection::vec(part(), 1..=max)
}

/// Number of double groupings of `n` items, counted by recursion on the
/// first outer block and the number of inner blocks it leaves.
fn double_grouping_count(n: usize) -> u64 {
    // g[n][m]: ways to cut n items into m blocks, then group m blocks
    fn compositions_into(n: usize, m: usize) -> u64 {
        if m == 0 {
            return u64::from(n == 0);
        }
        (1..=n).map(|first| compositions_into(n - first, m - 1)).sum()
    }
    (1..=n).map(|m| compositions_into(n, m) * (1..=m).map(|l| compositions_into(m, l)).sum::<u64>()).sum()
}

#[test]
fn double_grouping_enumeration_is_exhaustive() {
    for n in 1..=6 {
        assert_eq!(double_groupings(n).len() as u64, double_grouping_count(n), "n = {n}");
    }
}

#[test]
fn c_n_and_mu_n_closed_forms() {
    for n in 1..=8usize {
        let sign = if n % 2 == 0 { Q::one() } else { -Q::one() };
        assert_eq!(c_n(n), sign / factorial(n as u64), "c_{n}");
        assert_eq!(mu_n(n), if n == 1 { q(1) } else { q(0) }, "mu_{n}");
    }
}

fn simple_type_splitting() -> impl Strategy<Value = (usize, Vec<Class>)> {
    (1usize..=5).prop_flat_map(|n| {
        (0..n, prop::collection::vec(0i64..=2, n), prop::collection::vec(1i64..=2, n)).prop_map(move |(i, ay, by)| {
            let parts = (0..n).map(|j| if j == i { vec![1, ay[j]] } else { vec![0, by[j]] }).collect();
            (i + 1, parts)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn u_identity(tau in ratio(), ps in parts(4)) {
        let u = u_coeff(&ps, &tau, &tau).unwrap();
        prop_assert_eq!(u, if ps.len() == 1 { q(1) } else { q(0) });
    }

    /// `U(tau, tau'') = sum over groupings U(beta; tau', tau'') prod U(group; tau, tau')`.
    #[test]
    fn u_composition(t1 in ratio(), t2 in ratio(), t3 in ratio(), ps in parts(4)) {
        let direct = u_coeff(&ps, &t1, &t3).unwrap();
        let mut composed = Q::zero();
        for cuts in cut_points(ps.len()) {
            let betas: Vec<Class> = cuts.windows(2).map(|w| classes::sum(&ps[w[0]..w[1]])).collect();
            let mut term = u_coeff(&betas, &t2, &t3).unwrap();
            for w in cuts.windows(2) {
                if term.is_zero() {
                    break;
                }
                term *= u_coeff(&ps[w[0]..w[1]], &t1, &t2).unwrap();
            }
            composed += term;
        }
        prop_assert_eq!(direct, composed);
    }

    /// S, U and Ũ vanish when some proper nonempty subset I of the parts
    /// has strictly smaller tau-slopes than the rest and strictly smaller
    /// tau'-slope than the total (or both strictly larger).
    #[test]
    fn u_vanishing(tau in ratio(), tau2 in ratio(), ps in parts(4)) {
        let n = ps.len();
        prop_assume!(n >= 2);
        let total = classes::sum(&ps);
        let t: Vec<_> = ps.iter().map(|p| tau.slope(p).unwrap()).collect();
        let t2: Vec<_> = ps.iter().map(|p| tau2.slope(p).unwrap()).collect();
        let t2_total = tau2.slope(&total).unwrap();
        for mask in 1u32..(1 << n) - 1 {
            let inside = |i: usize| mask >> i & 1 == 1;
            let below = (0..n).filter(|&i| inside(i)).all(|i| (0..n).filter(|&j| !inside(j)).all(|j| t[i] < t[j]) && t2[i] < t2_total);
            let above = (0..n).filter(|&i| inside(i)).all(|i| (0..n).filter(|&j| !inside(j)).all(|j| t[i] > t[j]) && t2[i] > t2_total);
            if below || above {
                prop_assert_eq!(s_coeff(&ps, &tau, &tau2).unwrap(), q(0));
                prop_assert_eq!(u_coeff(&ps, &tau, &tau2).unwrap(), q(0));
                prop_assert_eq!(utilde_coeff(&ps, &tau, &tau2).unwrap(), q(0));
            }
        }
    }

    /// Adding a relation vector to the Ũ coefficients does not change the
    /// assembled Lie element. Relations used: `[x, y] + [y, x] = 0` and the
    /// Jacobi identity on left-nested words.
    #[test]
    fn lie_element_ignores_relation_vectors(tau in ratio(), tau2 in ratio(), t in -3i64..=3, a in 1i64..=2, b in 1i64..=2) {
        let monoid = EffectiveMonoid::standard(2);
        let alpha = vec![a, b];
        let lie = utilde_lie_element(&alpha, &tau, &tau2, &monoid, 8).unwrap();
        let mut coeffs: BTreeMap<Vec<Class>, Q> = BTreeMap::new();
        for ps in monoid.decompositions(&alpha, &|_| true, 8).unwrap() {
            coeffs.insert(ps.clone(), utilde_coeff(&ps, &tau, &tau2).unwrap());
        }
        let words: Vec<Vec<Class>> = coeffs.keys().cloned().collect();
        for w in &words {
            match w.len() {
                2 => {
                    let swapped = vec![w[1].clone(), w[0].clone()];
                    *coeffs.get_mut(w).unwrap() += q(t);
                    *coeffs.get_mut(&swapped).unwrap() += q(t);
                }
                3 => {
                    let cyc1 = vec![w[1].clone(), w[2].clone(), w[0].clone()];
                    let cyc2 = vec![w[2].clone(), w[0].clone(), w[1].clone()];
                    for v in [w.clone(), cyc1, cyc2] {
                        *coeffs.get_mut(&v).unwrap() += q(t);
                    }
                }
                _ => {}
            }
        }
        prop_assert_eq!(assemble_left_nested(&coeffs).unwrap(), lie.clone());
        prop_assert_eq!(lie.expand_to_uea(), u_side(&alpha, &tau, &tau2, &monoid, 8).unwrap());
    }

    /// Simple type: S is `(-1)^(n-1)` when the A-class comes last,
    /// `(-1)^(n-2)` when it is second to last, and U is
    /// `(-1)^(i-1)/((n-i)!(i-1)!)` with the A-class in position `i`.
    #[test]
    fn simple_type_closed_forms((i, ps) in simple_type_splitting()) {
        let n = ps.len();
        let (tm, tp) = (simple_type(-1), simple_type(1));
        let s_want = if i == n {
            if n % 2 == 1 { q(1) } else { q(-1) }
        } else if n >= 2 && i == n - 1 {
            if n % 2 == 0 { q(1) } else { q(-1) }
        } else {
            q(0)
        };
        prop_assert_eq!(s_coeff(&ps, &tm, &tp).unwrap(), s_want);
        let sign = if i % 2 == 1 { q(1) } else { q(-1) };
        let u_want = sign / (factorial((n - i) as u64) * factorial((i - 1) as u64));
        prop_assert_eq!(u_coeff(&ps, &tm, &tp).unwrap(), u_want);
    }
}

/// With `Ũ = 1/(n-1)!` on splittings whose first class is of type A, the
/// assembled element equals the Lie element extracted from the U side.
#[test]
fn simple_type_lie_element() {
    let monoid = EffectiveMonoid::standard(2);
    let (tm, tp) = (simple_type(-1), simple_type(1));
    for y in 0..=4 {
        let alpha = vec![1, y];
        let mut coeffs = BTreeMap::new();
        for ps in monoid.decompositions(&alpha, &|_| true, 8).unwrap() {
            if ps[0][0] == 1 {
                coeffs.insert(ps.clone(), Q::one() / factorial((ps.len() - 1) as u64));
            }
        }
        let want = assemble_left_nested(&coeffs).unwrap();
        let got = utilde_lie_element(&alpha, &tm, &tp, &monoid, 8).unwrap();
        assert_eq!(got, want, "alpha = {alpha:?}");
        let nested: owc::freelie::Uea<Class> = coeffs
            .iter()
            .fold(owc::freelie::Uea::zero(), |acc, (w, c)| acc.add(&left_nested(w).scale(c)));
        assert_eq!(got.expand_to_uea(), nested);
    }
}

#[test]
fn decomposition_cap_is_an_error() {
    let monoid = EffectiveMonoid::standard(1);
    assert!(monoid.decompositions(&[5], &|_| true, 3).is_err());
    assert_eq!(monoid.decompositions(&[3], &|_| true, 3).unwrap().len(), 4);
}

#[test]
fn see_saw_holds_for_ratio_stabilities() {
    let monoid = EffectiveMonoid::standard(2);
    let tau = StabilityData::ratio(vec![1, -2], vec![1, 1]);
    assert!(tau.check_seesaw(&monoid, 4).unwrap());
}

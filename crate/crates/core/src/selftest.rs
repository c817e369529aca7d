//! The release checks run by `owc selftest`: one function per acceptance
//! criterion, each returning a short diagnostic on failure.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::{self, fmt_class, Class, EffectiveMonoid};
use crate::combinat::cut_points;
use crate::descendent::{dt_to_pt, factorization_failures, y_explicit, y_recursion, Names};
use crate::freelie::{dynkin_project_graded, exp_ad_check, LieElement};
use crate::kclasses::{
    coh_rigidity_residue, cy_limit_printed, cy_limit_theta, kappa_shift, projective_pushforward_coh,
    projective_pushforward_k, projective_pushforward_k_closed, quantum_integer, rigidity_closed, rigidity_residue,
    segre, theta_closed, theta_coefficients, VirtualClass, HBAR,
};
use crate::ring::{factorial, q, specialize_kappa, Laurent, Monomial, RatFn, Q};
use crate::ucoeff::{c_n, mu_n, s_coeff, simple_type, u_coeff, u_side, utilde_lie_element, StabilityData};
use crate::wallcross::{
    free_table, invert_semistable, pair_invariant_rhs, symbolic_table, wall_cross_table, wcf_rhs, FreeLie,
    InvariantTable, QuantumTorus,
};

pub type Check = Result<(), String>;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub number: usize,
    pub title: &'static str,
    pub outcome: Check,
    pub millis: u128,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }

    /// `PASS`/`FAIL` line with timing and, on failure, the diagnostic.
    pub fn line(&self) -> String {
        match &self.outcome {
            Ok(()) => format!("[PASS] {:>2}. {} ({} ms)", self.number, self.title, self.millis),
            Err(e) => format!("[FAIL] {:>2}. {} ({} ms): {}", self.number, self.title, self.millis, e),
        }
    }
}

pub const CRITERIA: [(&str, fn() -> Check); 12] = [
    ("U(tau, tau) is delta_{n,1}", criterion_1),
    ("U transitivity through an intermediate stability", criterion_2),
    ("simple-type S, U and Lie element closed forms", criterion_3),
    ("Dynkin solver reproduces the U side; corrupted data rejected", criterion_4),
    ("c_n = (-1)^n/n! and mu_n = 0", criterion_5),
    ("projective pushforward residues equal closed forms", criterion_6),
    ("rigidity residues", criterion_7),
    ("theta_n closed form, hbar-divisibility and Calabi-Yau limit", criterion_8),
    ("descendent Y recursion, factorization and correspondence", criterion_9),
    ("quantum-torus pair invariants, inversion and transitivity", criterion_10),
    ("kappa -> 1 specialization equals the unrefined computation", criterion_11),
    ("exp(ad) identity and simple-type wall-crossing", criterion_12),
];

/// Run a single criterion by number (1-based).
pub fn run(number: usize) -> CriterionResult {
    let (title, f) = CRITERIA[number - 1];
    let start = Instant::now();
    let outcome = f();
    CriterionResult { number, title, outcome, millis: start.elapsed().as_millis() }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(run).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn fmt_parts(parts: &[Class]) -> String {
    parts.iter().map(|c| fmt_class(c)).collect::<Vec<_>>().join(" ")
}

/// Ratio stabilities `(d . c) / (r . c)` with random `d` and positive `r`.
pub fn random_ratio(rng: &mut ChaCha8Rng, dim: usize) -> StabilityData {
    let d = (0..dim).map(|_| rng.gen_range(-4..=4)).collect();
    let r = (0..dim).map(|_| rng.gen_range(1..=3)).collect();
    StabilityData::ratio(d, r)
}

fn all_decompositions(m: &EffectiveMonoid, bound: i64, max_parts: usize) -> Result<Vec<Vec<Class>>, String> {
    let mut out = Vec::new();
    for a in m.classes_up_to_mass(bound) {
        let ds = m.decompositions(&a, &|c| classes::mass(c) >= 1, bound as usize).map_err(err)?;
        out.extend(ds.into_iter().filter(|d| d.len() <= max_parts));
    }
    Ok(out)
}

pub fn criterion_1() -> Check {
    let m = EffectiveMonoid::standard(2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let decs = all_decompositions(&m, 5, 5)?;
    for _ in 0..3 {
        let tau = random_ratio(&mut rng, 2);
        for parts in &decs {
            let u = u_coeff(parts, &tau, &tau).map_err(err)?;
            let want = if parts.len() == 1 { Q::one() } else { Q::zero() };
            ensure(u == want, || format!("U({}) = {}", fmt_parts(parts), u))?;
        }
    }
    Ok(())
}

/// `sum over cut points of U(groups; tau', tau'') prod U(block; tau, tau')`.
pub fn u_composed(parts: &[Class], t1: &StabilityData, t2: &StabilityData, t3: &StabilityData) -> Result<Q, String> {
    let mut acc = Q::zero();
    for cuts in cut_points(parts.len()) {
        let mut prod = Q::one();
        let mut betas = Vec::new();
        for w in cuts.windows(2) {
            prod *= u_coeff(&parts[w[0]..w[1]], t1, t2).map_err(err)?;
            betas.push(classes::sum(&parts[w[0]..w[1]]));
            if prod.is_zero() {
                break;
            }
        }
        if !prod.is_zero() {
            acc += prod * u_coeff(&betas, t2, t3).map_err(err)?;
        }
    }
    Ok(acc)
}

pub fn criterion_2() -> Check {
    let m = EffectiveMonoid::standard(2);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let decs = all_decompositions(&m, 4, 4)?;
    for _ in 0..3 {
        let (a, b, c) = (random_ratio(&mut rng, 2), random_ratio(&mut rng, 2), random_ratio(&mut rng, 2));
        for parts in &decs {
            let direct = u_coeff(parts, &a, &c).map_err(err)?;
            let composed = u_composed(parts, &a, &b, &c)?;
            ensure(direct == composed, || format!("{}: direct {} vs composed {}", fmt_parts(parts), direct, composed))?;
        }
    }
    Ok(())
}

fn is_a(c: &[i64]) -> bool {
    c[0] == 1
}

fn is_b(c: &[i64]) -> bool {
    c[0] == 0 && c[1] >= 1
}

/// `sum over a + b_1 + .. + b_(n-1) = alpha of 1/(n-1)! [[..[z_a, z_b1], ..], z_b(n-1)]`.
pub fn simple_type_nested(alpha: &[i64], m: &EffectiveMonoid, max_parts: usize) -> Result<LieElement<Class>, String> {
    let mut out = LieElement::zero();
    for parts in m.decompositions(alpha, &|c| is_a(c) || is_b(c), max_parts).map_err(err)? {
        if is_a(&parts[0]) && parts[1..].iter().all(|c| is_b(c)) {
            let c = Q::one() / factorial((parts.len() - 1) as u64);
            out = out.add(&LieElement::left_nested(&parts).scale(&c));
        }
    }
    Ok(out)
}

pub fn criterion_3() -> Check {
    let m = EffectiveMonoid::standard(2);
    let (tm, tp) = (simple_type(-1), simple_type(1));
    for y in 0..=5 {
        let alpha = vec![1, y];
        for parts in m.decompositions(&alpha, &|_| true, 6).map_err(err)? {
            let n = parts.len();
            let pos_a = parts.iter().position(|c| is_a(c));
            let split = pos_a.is_some() && parts.iter().filter(|c| is_b(c)).count() == n - 1;
            let s_want = match pos_a {
                Some(i) if split && i == n - 1 => if (n - 1) % 2 == 0 { q(1) } else { q(-1) },
                Some(i) if split && n >= 2 && i == n - 2 => if n % 2 == 0 { q(1) } else { q(-1) },
                _ => q(0),
            };
            let s = s_coeff(&parts, &tm, &tp).map_err(err)?;
            ensure(s == s_want, || format!("S({}) = {}, expected {}", fmt_parts(&parts), s, s_want))?;
            let u_want = match pos_a {
                Some(i0) if split => {
                    let i = i0 + 1;
                    let sign = if (i - 1) % 2 == 0 { Q::one() } else { -Q::one() };
                    sign / (factorial((n - i) as u64) * factorial((i - 1) as u64))
                }
                _ => Q::zero(),
            };
            let u = u_coeff(&parts, &tm, &tp).map_err(err)?;
            ensure(u == u_want, || format!("U({}) = {}, expected {}", fmt_parts(&parts), u, u_want))?;
        }
        let lie = utilde_lie_element(&alpha, &tm, &tp, &m, 6).map_err(err)?;
        let want = simple_type_nested(&alpha, &m, 6)?;
        ensure(lie == want, || format!("Lie element for {} is {:?}, expected {:?}", fmt_class(&alpha), lie, want))?;
    }
    Ok(())
}

pub fn criterion_4() -> Check {
    let m = EffectiveMonoid::standard(2);
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..2 {
        let (a, b) = (random_ratio(&mut rng, 2), random_ratio(&mut rng, 2));
        for alpha in m.classes_up_to_mass(5) {
            let side = u_side(&alpha, &a, &b, &m, 5).map_err(err)?;
            let lie = utilde_lie_element(&alpha, &a, &b, &m, 5).map_err(err)?;
            ensure(lie.expand_to_uea() == side, || format!("expansion mismatch at {}", fmt_class(&alpha)))?;
        }
    }
    let alpha = vec![2, 1];
    let side = u_side(&alpha, &simple_type(-1), &simple_type(1), &m, 5).map_err(err)?;
    let mut corrupted = side.clone();
    corrupted.add_term(vec![vec![1, 0], vec![0, 1], vec![1, 0]], Q::one());
    ensure(dynkin_project_graded(&corrupted).is_err(), || "corrupted U data accepted".into())
}

pub fn criterion_5() -> Check {
    for n in 1..=8 {
        let want = if n % 2 == 0 { Q::one() } else { -Q::one() } / factorial(n as u64);
        ensure(c_n(n) == want, || format!("c_{} = {}", n, c_n(n)))?;
        if n >= 2 {
            ensure(mu_n(n).is_zero(), || format!("mu_{} = {}", n, mu_n(n)))?;
        }
    }
    Ok(())
}

fn k_class(r: usize) -> VirtualClass {
    VirtualClass::k_honest((1..=r).map(|i| Monomial::var(&format!("t{i}"), 1)))
}

fn coh_class(r: usize) -> VirtualClass {
    VirtualClass::coh_honest((1..=r).map(|i| Laurent::var(&format!("t{i}"))))
}

pub fn criterion_6() -> Check {
    for r in 1..=4usize {
        let v = k_class(r);
        let w = coh_class(r);
        for k in -6..=6i64 {
            let got = projective_pushforward_k(&Laurent::var_pow("s", k), "s", &v).map_err(err)?;
            let want = projective_pushforward_k_closed(k, &v).map_err(err)?;
            ensure(got == want, || format!("K-theory r={r} k={k}: {got} vs {want}"))?;
            if k >= 0 {
                let got = projective_pushforward_coh(&Laurent::var_pow("h", k), "h", &w).map_err(err)?;
                let want = segre(k - r as i64 + 1, &w).map_err(err)?;
                ensure(got == want, || format!("cohomology r={r} k={k}: {got} vs {want}"))?;
            }
        }
    }
    Ok(())
}

pub fn criterion_7() -> Check {
    for r in 1..=5usize {
        let got = rigidity_residue(&k_class(r)).map_err(err)?;
        let want = &kappa_shift() * &quantum_integer(r as i64);
        ensure(got == want, || format!("r={r}: {got} vs {want}"))?;
        ensure(got == rigidity_closed(r as i64), || format!("r={r}: closed form differs"))?;
        let coh = coh_rigidity_residue(&coh_class(r)).map_err(err)?;
        let sign = if (r - 1) % 2 == 0 { -1 } else { 1 };
        let want = Laurent::var(HBAR).scale(&q(sign * r as i64));
        ensure(coh == want, || format!("cohomological r={r}: {coh} vs {want}"))?;
    }
    Ok(())
}

pub fn criterion_8() -> Check {
    let hbar = Laurent::var(HBAR);
    let mut failures = Vec::new();
    for rk in 0..=3i64 {
        let series = theta_coefficients(rk, 7).map_err(err)?;
        for n in 1..=6usize {
            if series[n].div_exact(&hbar).is_err() {
                failures.push(format!("series theta_{n} (rk {rk}) not divisible by hbar"));
            }
            let closed = theta_closed(rk, n);
            if closed.div_exact(&hbar).is_err() {
                failures.push(format!("closed theta_{n} (rk {rk}) not divisible by hbar"));
            }
            if closed != series[n] {
                failures.push(format!("rk {rk} theta_{n}: closed {closed} vs series {}", series[n]));
            }
            if n <= 5 {
                let got = cy_limit_theta(rk, n).map_err(err)?;
                let printed = cy_limit_printed(rk, n);
                if got != printed {
                    failures.push(format!("rk {rk} n {n}: theta_(n+1)/hbar at hbar=0 is {got}, printed {printed}"));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        let count = |pat: &str| failures.iter().filter(|f| f.contains(pat)).count();
        Err(format!(
            "{} mismatches ({} divisibility, {} closed vs series, {} Calabi-Yau limit); first: {}",
            failures.len(),
            count("divisible"),
            count("vs series"),
            count("printed"),
            failures[0]
        ))
    }
}

pub fn criterion_9() -> Check {
    for n in 0..=4usize {
        let names = Names::default_for(n).map_err(err)?;
        let ground = names.ground();
        for s in 0..=ground {
            if s & ground == s {
                ensure(y_recursion(s, &names) == y_explicit(s, &names), || format!("Y mismatch N={n} subset {s:b}"))?;
            }
        }
        let bad = factorization_failures(&names, 4);
        ensure(bad.is_empty(), || format!("factorization fails at N={n} for {:?}", bad[0].blocks()))?;
        if n <= 3 {
            let id = dt_to_pt(&names);
            ensure(id.agrees(&names).map_err(err)?, || format!("correspondence forms differ at N={n}"))?;
        }
    }
    Ok(())
}

fn random_kappa_poly(rng: &mut ChaCha8Rng) -> RatFn {
    let mut f = Laurent::zero();
    for e in -2..=2 {
        let c = rng.gen_range(-3..=3);
        f = &f + &Laurent::half_pow(crate::ring::KAPPA, e).scale(&q(c));
    }
    if f.is_zero() {
        f = Laurent::one();
    }
    RatFn::from(f)
}

/// Direct evaluation of `sum (1/n!) prod [fr(a_i) + chi(a_i, a_1 + .. + a_(i-1))] z_(a_i)`
/// over equal-slope decompositions with at most `max_parts` summands.
pub fn pair_sum_direct(
    alpha: &[i64],
    fr: &BTreeMap<Class, i64>,
    tau: &StabilityData,
    table: &InvariantTable<RatFn>,
    qt: &QuantumTorus,
    m: &EffectiveMonoid,
    max_parts: usize,
) -> Result<RatFn, String> {
    let ta = tau.slope(alpha).map_err(err)?;
    let mut out = RatFn::zero();
    for parts in m.decompositions(alpha, &|c| tau.slope(c).map(|s| s == ta).unwrap_or(false), max_parts).map_err(err)? {
        let mut term = RatFn::from(Laurent::constant(Q::one() / factorial(parts.len() as u64)));
        let mut prefix = vec![0; alpha.len()];
        for p in &parts {
            let Some(z) = table.entries.get(p) else {
                term = RatFn::zero();
                break;
            };
            let w = fr[p] + qt.chi(p, &prefix).map_err(err)?;
            term = &(&term * z) * &RatFn::from(quantum_integer(w));
            prefix = classes::add(&prefix, p);
        }
        out = &out + &term;
    }
    Ok(out)
}

struct QtSetup {
    monoid: EffectiveMonoid,
    qt: QuantumTorus,
    tau: StabilityData,
    fr: BTreeMap<Class, i64>,
    classes: Vec<Class>,
}

fn qt_setup(seed: u64) -> Result<QtSetup, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monoid = EffectiveMonoid::standard(2);
    let x = rng.gen_range(1..=3);
    let qt = QuantumTorus::new(vec![vec![0, x], vec![-x, 0]], true).map_err(err)?;
    let classes: Vec<Class> = monoid.classes_up_to_mass(3).into_iter().collect();
    let fr = classes.iter().map(|c| (c.clone(), rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    // every class has the same slope, so all decompositions contribute
    let tau = StabilityData::ratio(vec![0, 0], vec![1, 1]);
    Ok(QtSetup { monoid, qt, tau, fr, classes })
}

pub fn criterion_10() -> Check {
    let s = qt_setup(100)?;
    let table = symbolic_table("z", s.classes.clone());
    for alpha in &s.classes {
        let got = pair_invariant_rhs(alpha, &s.fr, &s.tau, &table, &s.qt, &s.monoid, 3).map_err(err)?;
        let want = pair_sum_direct(alpha, &s.fr, &s.tau, &table, &s.qt, &s.monoid, 3)?;
        ensure(got == want, || format!("pair invariant at {}", fmt_class(alpha)))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..3 {
        let z = InvariantTable::new(s.classes.iter().map(|c| (c.clone(), random_kappa_poly(&mut rng))).collect());
        let mut pairs = BTreeMap::new();
        for alpha in &s.classes {
            pairs.insert(alpha.clone(), pair_invariant_rhs(alpha, &s.fr, &s.tau, &z, &s.qt, &s.monoid, 3).map_err(err)?);
        }
        let back = invert_semistable(&pairs, &s.fr, &s.tau, &|c| classes::mass(c), &s.qt, &s.monoid, 3).map_err(err)?;
        for alpha in &s.classes {
            let got = back.entries.get(alpha).cloned().unwrap_or_else(RatFn::zero);
            ensure(got == z.entries[alpha], || format!("inversion differs at {}", fmt_class(alpha)))?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let cls: Vec<Class> = s.monoid.classes_up_to_mass(4).into_iter().collect();
    let table = symbolic_table("z", cls.clone());
    for _ in 0..2 {
        let (a, b, c) = (random_ratio(&mut rng, 2), random_ratio(&mut rng, 2), random_ratio(&mut rng, 2));
        let mid = wall_cross_table(&cls, &a, &b, &table, &s.qt, &s.monoid, 4).map_err(err)?;
        for alpha in &cls {
            let composed = wcf_rhs(alpha, &b, &c, &mid, &s.qt, &s.monoid, 4).map_err(err)?;
            let direct = wcf_rhs(alpha, &a, &c, &table, &s.qt, &s.monoid, 4).map_err(err)?;
            ensure(composed == direct, || format!("transitivity fails at {}", fmt_class(alpha)))?;
        }
    }
    Ok(())
}

pub fn criterion_11() -> Check {
    let s = qt_setup(110)?;
    let flat = s.qt.unrefined();
    let cls: Vec<Class> = s.monoid.classes_up_to_mass(3).into_iter().collect();
    let table = symbolic_table("z", cls.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let (a, b) = (random_ratio(&mut rng, 2), random_ratio(&mut rng, 2));
    let same = |refined: &RatFn, unrefined: &RatFn, what: &str| -> Check {
        let v = specialize_kappa(refined).map_err(|e| format!("{what}: {e}"))?;
        ensure(RatFn::from(v) == *unrefined, || format!("{what}: specialization differs"))
    };
    for alpha in &cls {
        let r = wcf_rhs(alpha, &a, &b, &table, &s.qt, &s.monoid, 4).map_err(err)?;
        let u = wcf_rhs(alpha, &a, &b, &table, &flat, &s.monoid, 4).map_err(err)?;
        same(&r, &u, &format!("wall-crossing at {}", fmt_class(alpha)))?;
        let r = pair_invariant_rhs(alpha, &s.fr, &s.tau, &table, &s.qt, &s.monoid, 3).map_err(err)?;
        let u = pair_invariant_rhs(alpha, &s.fr, &s.tau, &table, &flat, &s.monoid, 3).map_err(err)?;
        same(&r, &u, &format!("pair invariant at {}", fmt_class(alpha)))?;
    }
    let pairs: BTreeMap<Class, RatFn> = cls.iter().map(|c| (c.clone(), RatFn::from(Laurent::var(&format!("P{}", fmt_class(c)))))).collect();
    let r = invert_semistable(&pairs, &s.fr, &s.tau, &|c| classes::mass(c), &s.qt, &s.monoid, 3).map_err(err)?;
    let u = invert_semistable(&pairs, &s.fr, &s.tau, &|c| classes::mass(c), &flat, &s.monoid, 3).map_err(err)?;
    for alpha in &cls {
        let zr = r.entries.get(alpha).cloned().unwrap_or_else(RatFn::zero);
        let zu = u.entries.get(alpha).cloned().unwrap_or_else(RatFn::zero);
        same(&zr, &zu, &format!("inversion at {}", fmt_class(alpha)))?;
    }
    Ok(())
}

/// `exp(-ad z^B) z^A` in degree `alpha`, summed term by term.
pub fn exp_minus_ad_b(alpha: &[i64], table: &InvariantTable<LieElement<String>>, m: &EffectiveMonoid, max_parts: usize) -> Result<LieElement<String>, String> {
    let mut out = LieElement::zero();
    for parts in m.decompositions(alpha, &|c| is_a(c) || is_b(c), max_parts).map_err(err)? {
        // parts = (b_n, .., b_1, a): ad_{b_n} .. ad_{b_1} z_a
        let Some((a, bs)) = parts.split_last() else { continue };
        if !is_a(a) || !bs.iter().all(|c| is_b(c)) {
            continue;
        }
        let mut acc = table.entries[a].clone();
        for b in bs.iter().rev() {
            acc = table.entries[b].bracket(&acc);
        }
        let n = bs.len();
        let c = if n % 2 == 0 { Q::one() } else { -Q::one() } / factorial(n as u64);
        out = out.add(&acc.scale(&c));
    }
    Ok(out)
}

pub fn criterion_12() -> Check {
    let x = LieElement::letter('a').add(&LieElement::letter('a').bracket(&LieElement::letter('b')).scale(&q(2)));
    let y = LieElement::letter('b').add(&LieElement::letter('c').scale(&q(-3)));
    ensure(exp_ad_check(&x, &y, 5), || "e^{ad X} Y differs from e^X Y e^-X".into())?;
    let m = EffectiveMonoid::standard(2);
    let table = free_table("z", m.classes_up_to_mass(5));
    for y in 0..=4 {
        let alpha = vec![1, y];
        let got = wcf_rhs(&alpha, &simple_type(-1), &simple_type(1), &table, &FreeLie, &m, 6).map_err(err)?;
        let want = exp_minus_ad_b(&alpha, &table, &m, 6)?;
        ensure(got == want, || format!("degree {}: {} vs {}", fmt_class(&alpha), got, want))?;
    }
    Ok(())
}

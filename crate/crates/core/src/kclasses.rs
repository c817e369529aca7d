//! Formal equivariant K-theory and cohomology classes on Chern-root symbols.
//!
//! A K-theoretic root is a weight monomial with coefficient one (a line
//! bundle character); a cohomological root is an additive weight, any
//! Laurent element that is linear in the weight symbols.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ring::{
    expand, factorial, q, residue_coh, residue_k, Laurent, Monomial, Point, Q, RatFn, RingError, KAPPA,
};

/// Internal residue variable for K-theoretic formulas.
pub const Z: &str = "@z";
/// Internal residue variable for cohomological formulas.
pub const U: &str = "@u";
/// Equivariant parameter in cohomology, the additive shadow of `kappa`.
pub const HBAR: &str = "hbar";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error("operation needs a {0} class")]
    ModeMismatch(&'static str),
    #[error("evaluation at z = 1 with a trivial-weight root")]
    TrivialWeightAtOne,
    #[error("class has negative roots but an honest class is required")]
    NotHonest,
    #[error("K-theoretic root weight must be a monomial with coefficient 1, got {0}")]
    BadWeight(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    K,
    Coh,
}

/// A signed multiset of Chern roots.
#[derive(Clone, Debug, PartialEq)]
pub struct VirtualClass {
    roots: Vec<(Laurent, i32)>,
    mode: Mode,
}

impl VirtualClass {
    pub fn zero(mode: Mode) -> Self {
        VirtualClass { roots: Vec::new(), mode }
    }

    /// K-theoretic class from `(weight, sign)` entries.
    pub fn k(roots: impl IntoIterator<Item = (Monomial, i32)>) -> Self {
        VirtualClass { roots: roots.into_iter().map(|(m, s)| (Laurent::mono(m), s)).collect(), mode: Mode::K }
    }

    /// Honest K-theoretic class with the given root weights.
    pub fn k_honest(weights: impl IntoIterator<Item = Monomial>) -> Self {
        Self::k(weights.into_iter().map(|m| (m, 1)))
    }

    /// Cohomological class from `(additive weight, sign)` entries.
    pub fn coh(roots: impl IntoIterator<Item = (Laurent, i32)>) -> Self {
        VirtualClass { roots: roots.into_iter().collect(), mode: Mode::Coh }
    }

    pub fn coh_honest(weights: impl IntoIterator<Item = Laurent>) -> Self {
        Self::coh(weights.into_iter().map(|w| (w, 1)))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn roots(&self) -> &[(Laurent, i32)] {
        &self.roots
    }

    pub fn rank(&self) -> i64 {
        self.roots.iter().map(|(_, s)| i64::from(*s)).sum()
    }

    pub fn is_honest(&self) -> bool {
        self.roots.iter().all(|(_, s)| *s > 0)
    }

    pub fn positive(&self) -> Vec<Laurent> {
        self.expanded(1)
    }

    pub fn negative(&self) -> Vec<Laurent> {
        self.expanded(-1)
    }

    fn expanded(&self, sign: i32) -> Vec<Laurent> {
        let mut out = Vec::new();
        for (w, s) in &self.roots {
            if s.signum() == sign {
                for _ in 0..s.abs() {
                    out.push(w.clone());
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        VirtualClass { roots: self.roots.iter().map(|(w, s)| (w.clone(), -s)).collect(), mode: self.mode }
    }

    pub fn add(&self, other: &VirtualClass) -> Result<Self, KError> {
        if self.mode != other.mode {
            return Err(KError::ModeMismatch(match self.mode {
                Mode::K => "K-theoretic",
                Mode::Coh => "cohomological",
            }));
        }
        let mut roots = self.roots.clone();
        roots.extend(other.roots.iter().cloned());
        Ok(VirtualClass { roots, mode: self.mode })
    }

    /// Dual class: weights inverted (K) or negated (cohomology).
    pub fn dual(&self) -> Self {
        self.map_weights(|w| match self.mode {
            Mode::K => w.monomial_inverse().expect("K-theoretic weights are monomials"),
            Mode::Coh => -w,
        })
    }

    /// Tensor with `kappa^e`; in cohomology this adds `e * hbar`.
    pub fn twist_kappa(&self, e: i64) -> Self {
        self.map_weights(|w| match self.mode {
            Mode::K => w.mul_monomial(&Monomial::var(KAPPA, e)),
            Mode::Coh => w + &Laurent::var(HBAR).scale(&q(e)),
        })
    }

    /// Tensor with a weight monomial (K-theory only).
    pub fn twist(&self, m: &Monomial) -> Self {
        self.map_weights(|w| w.mul_monomial(m))
    }

    fn map_weights(&self, f: impl Fn(&Laurent) -> Laurent) -> Self {
        VirtualClass { roots: self.roots.iter().map(|(w, s)| (f(w), *s)).collect(), mode: self.mode }
    }

    fn require(&self, mode: Mode) -> Result<(), KError> {
        if self.mode != mode {
            return Err(KError::ModeMismatch(match mode {
                Mode::K => "K-theoretic",
                Mode::Coh => "cohomological",
            }));
        }
        if mode == Mode::K {
            for (w, _) in &self.roots {
                match w.as_single_term() {
                    Some((_, c)) if c.is_one() => {}
                    _ => return Err(KError::BadWeight(w.to_string())),
                }
            }
        }
        Ok(())
    }

    fn k_weights(&self, sign: i32) -> Vec<Monomial> {
        self.expanded(sign).into_iter().map(|w| w.as_single_term().unwrap().0.clone()).collect()
    }

    /// Determinant line (K-theory).
    pub fn det(&self) -> Result<Laurent, KError> {
        self.require(Mode::K)?;
        let mut m = Monomial::one();
        for (w, s) in &self.roots {
            m = m.mul(&w.as_single_term().unwrap().0.pow(i64::from(*s)));
        }
        Ok(Laurent::mono(m))
    }

    /// Chern character component `ch_k = sum of sign * w^k / k!` (cohomology).
    pub fn chern_character(&self, k: u32) -> Result<Laurent, KError> {
        self.require(Mode::Coh)?;
        let mut out = Laurent::zero();
        for (w, s) in &self.roots {
            out = out + w.pow(k).scale(&(q(i64::from(*s)) / factorial(u64::from(k))));
        }
        Ok(out)
    }
}

/// Elementary symmetric polynomial `e_i` of the given roots, by enumeration
/// of `i`-subsets.
pub fn elementary(roots: &[Laurent], i: usize) -> Laurent {
    let mut table = vec![Laurent::zero(); i + 1];
    table[0] = Laurent::one();
    for r in roots {
        for j in (1..=i).rev() {
            table[j] = &table[j] + &(&table[j - 1] * r);
        }
    }
    table[i].clone()
}

/// Complete homogeneous symmetric polynomial `h_j` of the given roots, by
/// enumeration of `j`-multisets.
pub fn complete(roots: &[Laurent], j: usize) -> Laurent {
    let mut table = vec![Laurent::zero(); j + 1];
    table[0] = Laurent::one();
    for r in roots {
        for d in 1..=j {
            table[d] = &table[d] + &(&table[d - 1] * r);
        }
    }
    table[j].clone()
}

fn z_mono(e2: i64) -> Monomial {
    Monomial::half(Z, e2)
}

/// `(w)^(1/2)` for a weight monomial, failing on odd doubled exponents.
fn sqrt_mono(m: &Monomial) -> Result<Monomial, KError> {
    let mut out = Monomial::one();
    for (s, e2) in m.pairs() {
        if e2 % 2 != 0 {
            return Err(RingError::BadExponent.into());
        }
        out = out.mul(&Monomial::half(s, e2 / 2));
    }
    Ok(out)
}

/// Product of per-root factors, positive roots in the numerator.
fn root_product(
    e: &VirtualClass,
    factor: impl Fn(&Monomial) -> Result<Laurent, KError>,
) -> Result<RatFn, KError> {
    let mut num = Laurent::one();
    let mut den = Laurent::one();
    for w in e.k_weights(1) {
        num = &num * &factor(&w)?;
    }
    for w in e.k_weights(-1) {
        den = &den * &factor(&w)?;
    }
    Ok(RatFn::new(num, den)?)
}

/// `wedge_{-z}(E)`: `1 - z L` per positive root, inverted for negative roots.
/// The variable `z` is the symbol named by `z`.
pub fn wedge(e: &VirtualClass, z: &str) -> Result<RatFn, KError> {
    e.require(Mode::K)?;
    root_product(e, |w| Ok(Laurent::one() - Laurent::mono(Monomial::var(z, 1).mul(w))))
}

/// Symmetrized wedge: `(zL)^(-1/2) - (zL)^(1/2)` per positive root.
pub fn symmetrized_wedge(e: &VirtualClass, z: &str) -> Result<RatFn, KError> {
    e.require(Mode::K)?;
    root_product(e, |w| {
        let h = sqrt_mono(w)?.mul(&Monomial::half(z, 1));
        Ok(Laurent::mono(h.inv()) - Laurent::mono(h))
    })
}

/// `wedge_{-z}(E)` as a series in the augmentation ideal. The symbol `v`
/// stands for `(1 - z)^(-1)`: a positive root contributes
/// `1 - L + L v^(-1)` and a negative root contributes
/// `L^(-1) sum_k (1 - L^(-1))^k v^(k+1)`, truncated at `v^order`.
/// The default order is `2 * (number of roots) + 2`.
pub fn wedge_series(e: &VirtualClass, v: &str, order: Option<i64>) -> Result<Laurent, KError> {
    e.require(Mode::K)?;
    let nroots: i64 = e.roots.iter().map(|(_, s)| i64::from(s.abs())).sum();
    let order = order.unwrap_or(2 * nroots + 2);
    let mut acc = Laurent::one().truncate(v, Point::Zero, order)?;
    for w in e.k_weights(1) {
        let l = Laurent::mono(w);
        let f = Laurent::one() - l.clone() + l.mul_monomial(&Monomial::var(v, -1));
        acc = acc.try_mul(&f)?;
    }
    for w in e.k_weights(-1) {
        let linv = Laurent::mono(w.inv());
        let a = Laurent::one() - linv.clone();
        let mut f = Laurent::zero();
        let mut ak = Laurent::one();
        for k in 0..order.max(0) {
            f = f + (&linv * &ak).mul_monomial(&Monomial::var(v, k + 1));
            ak = &ak * &a;
        }
        let f = f.truncate(v, Point::Zero, order)?;
        acc = acc.try_mul(&f)?;
    }
    Ok(acc)
}

/// Where an Euler class is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerArg<'a> {
    Var(&'a str),
    One,
}

/// K-theoretic Euler class: `e_z(L) = 1 - z^(-1) L^(-1)`, or the symmetrized
/// `(zL)^(1/2) - (zL)^(-1/2)` when `symmetrized` is set.
pub fn euler(e: &VirtualClass, z: EulerArg<'_>, symmetrized: bool) -> Result<RatFn, KError> {
    e.require(Mode::K)?;
    let zm = match z {
        EulerArg::Var(name) => Monomial::var(name, 1),
        EulerArg::One => {
            if e.roots.iter().any(|(w, _)| w.as_single_term().map_or(false, |(m, _)| m.is_one())) {
                return Err(KError::TrivialWeightAtOne);
            }
            Monomial::one()
        }
    };
    root_product(e, |w| {
        if symmetrized {
            let h = sqrt_mono(&zm.mul(w))?;
            Ok(Laurent::mono(h.clone()) - Laurent::mono(h.inv()))
        } else {
            Ok(Laurent::one() - Laurent::mono(zm.mul(w).inv()))
        }
    })
}

/// Cohomological Euler class `e_u(x) = u + x` per root.
pub fn euler_coh(e: &VirtualClass, u: &str) -> Result<RatFn, KError> {
    e.require(Mode::Coh)?;
    let uu = Laurent::var(u);
    let mut num = Laurent::one();
    let mut den = Laurent::one();
    for w in e.positive() {
        num = &num * &(&uu + &w);
    }
    for w in e.negative() {
        den = &den * &(&uu + &w);
    }
    Ok(RatFn::new(num, den)?)
}

/// The symmetric quantum integer
/// `[n] = (-1)^(n-1) (kappa^(n/2) - kappa^(-n/2)) / (kappa^(1/2) - kappa^(-1/2))`.
pub fn quantum_integer(n: i64) -> Laurent {
    if n == 0 {
        return Laurent::zero();
    }
    if n < 0 {
        return -quantum_integer(-n);
    }
    let sign = if n % 2 == 1 { Q::one() } else { -Q::one() };
    let mut out = Laurent::zero();
    for j in 0..n {
        out = out + Laurent::term(Monomial::half(KAPPA, n - 1 - 2 * j), sign.clone());
    }
    out
}

/// `kappa^(-1/2) - kappa^(1/2)`.
pub fn kappa_shift() -> Laurent {
    Laurent::half_pow(KAPPA, -1) - Laurent::half_pow(KAPPA, 1)
}

/// The vertex kernel as a rational function in the internal variable [`Z`].
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaKernel {
    pub value: RatFn,
}

impl ThetaKernel {
    /// True when no half-integral power of `z` occurs.
    pub fn is_z_integral(&self) -> bool {
        [&self.value.num, &self.value.den]
            .iter()
            .all(|p| p.terms().all(|(m, _)| m.exp2(Z) % 2 == 0))
    }

    pub fn residue(&self) -> Result<Laurent, KError> {
        Ok(residue_k(&self.value, Z)?)
    }
}

/// `Theta(z) = ê_{z^-1}(E_ab) ê_z(E_ba)`.
pub fn theta(e_ab: &VirtualClass, e_ba: &VirtualClass) -> Result<ThetaKernel, KError> {
    let zinv = symmetrized_euler_at(e_ab, -1)?;
    let zpos = symmetrized_euler_at(e_ba, 1)?;
    Ok(ThetaKernel { value: &zinv * &zpos })
}

/// `ê_{z^s}(E)` for `s = +-1`.
fn symmetrized_euler_at(e: &VirtualClass, s: i64) -> Result<RatFn, KError> {
    e.require(Mode::K)?;
    root_product(e, |w| {
        let h = sqrt_mono(w)?.mul(&z_mono(s));
        Ok(Laurent::mono(h.clone()) - Laurent::mono(h.inv()))
    })
}

/// Check the shift identity of the kernel: twisting `E_ab` by `w^-1` and
/// `E_ba` by `w` gives the same function as `Theta(wz)`, both as rational
/// functions and after multiplicative expansion in `(1 - w)` to `order`.
pub fn theta_shift_identity(e_ab: &VirtualClass, e_ba: &VirtualClass, order: usize) -> Result<bool, KError> {
    const W: &str = "@w";
    let shifted = theta(&e_ab.twist(&Monomial::var(W, -1)), &e_ba.twist(&Monomial::var(W, 1)))?.value;
    let base = theta(e_ab, e_ba)?.value;
    let wz = Monomial::from_pairs([(W, 2), (Z, 2)]);
    let at_wz = base.map(|p| p.substitute_monomial(Z, &wz))?;
    if shifted != at_wz {
        return Ok(false);
    }
    let a = crate::ring::expand_multiplicative(&shifted, W, order)?;
    let b = crate::ring::expand_multiplicative(&at_wz, W, order)?;
    Ok(a == b)
}

/// Residue of `ê_{z^-1}(kappa^-1 V^dual) / ê_z(V)` for an honest class `V`.
pub fn rigidity_residue(v: &VirtualClass) -> Result<Laurent, KError> {
    if !v.is_honest() {
        return Err(KError::NotHonest);
    }
    theta(&v.dual().twist_kappa(-1), &v.neg())?.residue()
}

/// `(-kappa^(1/2))^r - (-kappa^(-1/2))^r`.
pub fn rigidity_closed(r: i64) -> Laurent {
    let a = Laurent::half_pow(KAPPA, r);
    let b = Laurent::half_pow(KAPPA, -r);
    if r % 2 == 0 {
        a - b
    } else {
        b - a
    }
}

fn substitute_series_var(f: &Laurent, s: &str, target: &str) -> Result<Laurent, KError> {
    Ok(f.substitute_monomial(s, &Monomial::var(target, 1))?)
}

/// `pi_* f(s) = residue of f(z) / e_z(V)`, with `f` a Laurent polynomial in `s`.
pub fn projective_pushforward_k(f: &Laurent, s: &str, v: &VirtualClass) -> Result<Laurent, KError> {
    if !v.is_honest() {
        return Err(KError::NotHonest);
    }
    let fz = substitute_series_var(f, s, Z)?;
    let g = &RatFn::from(fz) * &euler(v, EulerArg::Var(Z), false)?.inv()?;
    Ok(residue_k(&g, Z)?)
}

/// Closed form of `pi_* s^k`: `Sym^k V^dual` for `k >= 0`, zero for
/// `-r < k < 0`, and `(-1)^(r+1) det V Sym^(-k-r) V` for `k <= -r`.
pub fn projective_pushforward_k_closed(k: i64, v: &VirtualClass) -> Result<Laurent, KError> {
    v.require(Mode::K)?;
    if !v.is_honest() {
        return Err(KError::NotHonest);
    }
    let r = v.rank();
    let roots = v.positive();
    if k >= 0 {
        let duals: Vec<Laurent> = roots.iter().map(|w| w.monomial_inverse().unwrap()).collect();
        Ok(complete(&duals, k as usize))
    } else if k > -r {
        Ok(Laurent::zero())
    } else {
        let sign = if (r + 1) % 2 == 0 { 1 } else { -1 };
        Ok((v.det()? * complete(&roots, (-k - r) as usize)).scale(&q(sign)))
    }
}

/// Symmetrized pushforward
/// `residue of f(z) ê_{z^-1}(kappa^-1 V^dual) / ê_z(V)` divided by
/// `kappa^(-1/2) - kappa^(1/2)`.
pub fn projective_pushforward_symmetrized(f: &Laurent, s: &str, v: &VirtualClass) -> Result<RatFn, KError> {
    if !v.is_honest() {
        return Err(KError::NotHonest);
    }
    let fz = substitute_series_var(f, s, Z)?;
    let kernel = theta(&v.dual().twist_kappa(-1), &v.neg())?.value;
    let res = residue_k(&(&RatFn::from(fz) * &kernel), Z)?;
    Ok(RatFn::new(res, kappa_shift())?)
}

/// Cohomological pushforward `residue_u f(u) / e_u(V)`, `f` polynomial in `h`.
pub fn projective_pushforward_coh(f: &Laurent, h: &str, v: &VirtualClass) -> Result<Laurent, KError> {
    v.require(Mode::Coh)?;
    if !v.is_honest() {
        return Err(KError::NotHonest);
    }
    let fu = substitute_series_var(f, h, U)?;
    let g = &RatFn::from(fu) * &euler_coh(v, U)?.inv()?;
    Ok(residue_coh(&g, U)?)
}

/// Segre class `s_j(V) = (-1)^j h_j(roots)`, zero for negative `j`.
pub fn segre(j: i64, v: &VirtualClass) -> Result<Laurent, KError> {
    v.require(Mode::Coh)?;
    if j < 0 {
        return Ok(Laurent::zero());
    }
    let h = complete(&v.positive(), j as usize);
    Ok(if j % 2 == 0 { h } else { -h })
}

/// Residue of `e_{-u}(kappa^-1 V^dual) / e_u(V)`, whose roots are
/// `-u - hbar - w` over `u + w`.
pub fn coh_rigidity_residue(v: &VirtualClass) -> Result<Laurent, KError> {
    v.require(Mode::Coh)?;
    if !v.is_honest() {
        return Err(KError::NotHonest);
    }
    let f = &twisted_dual_euler(v)? * &euler_coh(v, U)?.inv()?;
    Ok(residue_coh(&f, U)?)
}

/// `e_{-u}(kappa^-1 V^dual)` as a function of [`U`].
fn twisted_dual_euler(v: &VirtualClass) -> Result<RatFn, KError> {
    let w = v.dual().twist_kappa(-1);
    let mu = -Laurent::var(U);
    let mut num = Laurent::one();
    let mut den = Laurent::one();
    for x in w.positive() {
        num = &num * &(&mu + &x);
    }
    for x in w.negative() {
        den = &den * &(&mu + &x);
    }
    Ok(RatFn::new(num, den)?)
}

/// Virtual cohomological pushforward of 1: the rigidity residue divided by `-hbar`.
pub fn projective_pushforward_coh_virtual(v: &VirtualClass) -> Result<Laurent, KError> {
    let r = coh_rigidity_residue(v)?;
    Ok(r.div_exact(&-Laurent::var(HBAR))?)
}

/// Name of the formal Chern character symbol `ch_k`.
pub fn ch_symbol(k: u32) -> String {
    format!("ch{}", k)
}

/// Coefficients `theta_0, ..., theta_order` of
/// `Theta(u) = (-u/(u - hbar))^rk exp(sum_k ((u - hbar)^-k - u^-k) (k-1)! ch_k)`
/// in powers of `u^-1`, with formal symbols `ch1, ch2, ...` and `hbar`.
pub fn theta_coefficients(rank: i64, order: usize) -> Result<Vec<Laurent>, KError> {
    const X: &str = "@x";
    let ord = order as i64;
    let hx = Laurent::term(Monomial::from_pairs([(HBAR, 2), (X, 2)]), Q::one());
    // (1 - hbar x)^(-m) as a truncated series for any integer m
    let inv_pow = |m: i64| -> Result<Laurent, KError> {
        let mut s = Laurent::zero();
        for j in 0..=ord {
            let c = crate::ring::binomial(&q(-m), j as u64) * if j % 2 == 0 { Q::one() } else { -Q::one() };
            s = s + hx.pow(j as u32).scale(&c);
        }
        Ok(s.truncate(X, Point::Zero, ord)?)
    };
    let mut arg = Laurent::zero().truncate(X, Point::Zero, ord)?;
    for k in 1..ord {
        let xk = Laurent::var_pow(X, k);
        let bracket = &inv_pow(k)? - &Laurent::one();
        let t = (&bracket * &xk).scale(&factorial((k - 1) as u64));
        arg = &arg + &(&t * &Laurent::var(&ch_symbol(k as u32)));
    }
    let e = crate::ring::plethystic_exp(&arg, X, ord)?;
    let sign = if rank % 2 == 0 { Q::one() } else { -Q::one() };
    let full = (&inv_pow(rank)? * &e).scale(&sign);
    Ok((0..=ord).map(|n| full.coeff_in(X, 2 * n)).collect())
}

/// The closed binomial-sum expression for `theta_n`:
/// `(-1)^rk sum (-1)^k / k! (-hbar)^m binom(rk, m) prod F(n_i)` over
/// `n = n_1 + ... + n_k + m` with every `n_i >= 2`, where
/// `F(n) = sum_{a=1}^{n-1} (n-1)!/(n-a)! hbar^(n-a) ch_a`.
pub fn theta_closed(rank: i64, n: usize) -> Laurent {
    let hbar = Laurent::var(HBAR);
    let f = |ni: usize| -> Laurent {
        let mut s = Laurent::zero();
        for a in 1..ni {
            let c = factorial((ni - 1) as u64) / factorial((ni - a) as u64);
            s = s + (hbar.pow((ni - a) as u32) * Laurent::var(&ch_symbol(a as u32))).scale(&c);
        }
        s
    };
    // prod_sums[j][k] = sum over ordered (n_1..n_k), n_i >= 2, total j, of prod F(n_i)
    let mut prod_sums: Vec<Vec<Laurent>> = vec![vec![Laurent::zero(); n / 2 + 1]; n + 1];
    prod_sums[0][0] = Laurent::one();
    for k in 1..=n / 2 {
        for j in 2 * k..=n {
            let mut acc = Laurent::zero();
            for first in 2..=j - 2 * (k - 1) {
                let rest = &prod_sums[j - first][k - 1];
                if !rest.is_zero() {
                    acc = acc + f(first) * rest;
                }
            }
            prod_sums[j][k] = acc;
        }
    }
    let mut out = Laurent::zero();
    for m in 0..=n {
        let bin = crate::ring::binomial(&q(rank), m as u64);
        if bin.is_zero() {
            continue;
        }
        let hm = (-hbar.clone()).pow(m as u32).scale(&bin);
        for k in 0..=(n - m) / 2 {
            let p = &prod_sums[n - m][k];
            if p.is_zero() {
                continue;
            }
            let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
            out = out + (&hm * p).scale(&(sign / factorial(k as u64)));
        }
    }
    if rank % 2 == 0 {
        out
    } else {
        -out
    }
}

/// `theta_(n+1) / hbar` at `hbar = 0`, from the series definition.
pub fn cy_limit_theta(rank: i64, n: usize) -> Result<Laurent, KError> {
    let th = theta_coefficients(rank, n + 1)?;
    let quotient = th[n + 1].div_exact(&Laurent::var(HBAR))?;
    Ok(quotient.filter_terms(|m| m.exp2(HBAR) == 0))
}

/// The printed Calabi-Yau limit `-(-1)^rk n! ch_n`, with `ch_0 = rk`.
pub fn cy_limit_printed(rank: i64, n: usize) -> Laurent {
    let ch = if n == 0 { Laurent::int(rank) } else { Laurent::var(&ch_symbol(n as u32)) };
    let v = ch.scale(&factorial(n as u64));
    if rank % 2 == 0 {
        -v
    } else {
        v
    }
}

/// Coefficients of `e_{-u}(E) / e_u(kappa^-1 E^dual)` in powers of `u^-1`
/// for a cohomological root class, straight from the definition.
pub fn theta_from_roots(e: &VirtualClass, order: usize) -> Result<Vec<Laurent>, KError> {
    e.require(Mode::Coh)?;
    let mu = -Laurent::var(U);
    let mut num = Laurent::one();
    let mut den = Laurent::one();
    for (w, s) in e.roots() {
        let a = &mu + w;
        let b = Laurent::var(U) - Laurent::var(HBAR) - w.clone();
        for _ in 0..s.abs() {
            if *s > 0 {
                num = &num * &a;
                den = &den * &b;
            } else {
                num = &num * &b;
                den = &den * &a;
            }
        }
    }
    let f = RatFn::new(num, den)?;
    let s = expand(&f, U, Point::Infinity, order as i64)?;
    Ok((0..=order as i64).map(|n| s.coeff_in(U, -2 * n)).collect())
}

/// Replace every `ch_k` symbol by the Chern character of `e`.
pub fn substitute_chern_character(f: &Laurent, e: &VirtualClass, max_k: u32) -> Result<Laurent, KError> {
    let mut out = f.clone().untruncated();
    for k in 1..=max_k {
        let ch = e.chern_character(k)?;
        out = out.substitute(&ch_symbol(k), &ch)?;
    }
    Ok(out)
}

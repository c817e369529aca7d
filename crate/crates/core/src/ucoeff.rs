//! Weak stability data and the universal coefficients `S`, `U` and `Ũ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::classes::{self, Class, EffectiveMonoid, MonoidError};
use crate::combinat::{compositions, cut_points, set_partitions};
use crate::freelie::{dynkin_project_graded, left_nested, LieElement, LieError, Uea};
use crate::ring::{factorial, q, Ext, SlopeValue, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UError {
    #[error("slope undefined for class {0:?}")]
    SlopeUndefined(Class),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

type SlopeFn = Arc<dyn Fn(&[i64]) -> Option<SlopeValue> + Send + Sync>;

/// A slope map on classes together with optional auxiliary data.
#[derive(Clone)]
pub struct StabilityData {
    slope: SlopeFn,
    /// Optional rank function.
    pub rank: Option<Arc<dyn Fn(&[i64]) -> i64 + Send + Sync>>,
    /// Classes flagged as having nonempty semistable locus; `None` means all.
    pub sst_nonempty: Option<BTreeSet<Class>>,
}

impl fmt::Debug for StabilityData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StabilityData").finish_non_exhaustive()
    }
}

impl StabilityData {
    pub fn from_fn(f: impl Fn(&[i64]) -> Option<SlopeValue> + Send + Sync + 'static) -> Self {
        StabilityData { slope: Arc::new(f), rank: None, sst_nonempty: None }
    }

    /// Slope given by an explicit table.
    pub fn from_table(table: BTreeMap<Class, SlopeValue>) -> Self {
        Self::from_fn(move |c| table.get(c).cloned())
    }

    /// `tau(c) = (d . c) / (r . c)`; when `r . c = 0` the slope is `+inf` or
    /// `-inf` according to the sign of `d . c`.
    pub fn ratio(d: Vec<i64>, r: Vec<i64>) -> Self {
        Self::from_fn(move |c| {
            let num: i64 = d.iter().zip(c).map(|(a, b)| a * b).sum();
            let den: i64 = r.iter().zip(c).map(|(a, b)| a * b).sum();
            if den != 0 {
                Some(SlopeValue::single(Q::new(num.into(), den.into())))
            } else if num > 0 {
                Some(SlopeValue(vec![Ext::PosInf]))
            } else if num < 0 {
                Some(SlopeValue(vec![Ext::NegInf]))
            } else {
                None
            }
        })
    }

    /// Lexicographic pair of two ratio slopes.
    pub fn lex_pair(first: StabilityData, second: StabilityData) -> Self {
        Self::from_fn(move |c| {
            let mut a = (first.slope)(c)?.0;
            a.extend((second.slope)(c)?.0);
            Some(SlopeValue(a))
        })
    }

    pub fn with_rank(mut self, r: impl Fn(&[i64]) -> i64 + Send + Sync + 'static) -> Self {
        self.rank = Some(Arc::new(r));
        self
    }

    pub fn slope(&self, c: &[i64]) -> Result<SlopeValue, UError> {
        (self.slope)(c).ok_or_else(|| UError::SlopeUndefined(c.to_vec()))
    }

    pub fn is_sst_nonempty(&self, c: &[i64]) -> bool {
        self.sst_nonempty.as_ref().map_or(true, |s| s.contains(c))
    }

    /// Check the weak see-saw property on every two-part decomposition of
    /// effective classes of mass at most `bound`.
    pub fn check_seesaw(&self, monoid: &EffectiveMonoid, bound: i64) -> Result<bool, UError> {
        let all = monoid.classes_up_to_mass(bound);
        for b in &all {
            for g in &all {
                let a = classes::add(b, g);
                if classes::mass(&a) > bound {
                    continue;
                }
                let (sb, sa, sg) = (self.slope(b)?, self.slope(&a)?, self.slope(g)?);
                let ok = (sb >= sa && sa >= sg) || (sb <= sa && sa <= sg);
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `S(a_1, .., a_n; tau, tau')`.
pub fn s_coeff(parts: &[Class], tau: &StabilityData, tau2: &StabilityData) -> Result<Q, UError> {
    let n = parts.len();
    let mut r = 0usize;
    for i in 1..n {
        let left = classes::sum(&parts[..i]);
        let right = classes::sum(&parts[i..]);
        let (ti, tj) = (tau.slope(&parts[i - 1])?, tau.slope(&parts[i])?);
        let (tl, tr) = (tau2.slope(&left)?, tau2.slope(&right)?);
        let case_a = ti <= tj && tl > tr;
        let case_b = ti > tj && tl <= tr;
        if case_a {
            r += 1;
        } else if !case_b {
            return Ok(Q::zero());
        }
    }
    Ok(if r % 2 == 0 { Q::one() } else { -Q::one() })
}

/// A double grouping: cut points `0 = a_0 < .. < a_m = n` and
/// `0 = b_0 < .. < b_l = m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleGrouping {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// All double groupings of `n` items.
pub fn double_groupings(n: usize) -> Vec<DoubleGrouping> {
    let mut out = Vec::new();
    for a in cut_points(n) {
        let m = a.len() - 1;
        for b in cut_points(m) {
            out.push(DoubleGrouping { a: a.clone(), b });
        }
    }
    out
}

fn group(parts: &[Class], cuts: &[usize]) -> Vec<Class> {
    cuts.windows(2).map(|w| classes::sum(&parts[w[0]..w[1]])).collect()
}

/// `U(a_1, .., a_n; tau, tau')` summed over permissible double groupings.
pub fn u_coeff(parts: &[Class], tau: &StabilityData, tau2: &StabilityData) -> Result<Q, UError> {
    let n = parts.len();
    let total = classes::sum(parts);
    let t2_total = tau2.slope(&total)?;
    let mut acc = Q::zero();
    for a in cut_points(n) {
        let betas = group(parts, &a);
        let mut permissible = true;
        for (i, w) in a.windows(2).enumerate() {
            let tb = tau.slope(&betas[i])?;
            for p in &parts[w[0]..w[1]] {
                if tau.slope(p)? != tb {
                    permissible = false;
                }
            }
        }
        if !permissible {
            continue;
        }
        let fact: Q = a.windows(2).fold(Q::one(), |acc, w| acc / factorial((w[1] - w[0]) as u64));
        let m = betas.len();
        for b in cut_points(m) {
            let gammas = group(&betas, &b);
            let mut ok = true;
            for g in &gammas {
                if tau2.slope(g)? != t2_total {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let l = gammas.len();
            let mut prod = fact.clone() * Q::new(if l % 2 == 1 { 1.into() } else { (-1).into() }, (l as i64).into());
            for w in b.windows(2) {
                prod *= s_coeff(&betas[w[0]..w[1]], tau, tau2)?;
                if prod.is_zero() {
                    break;
                }
            }
            acc += prod;
        }
    }
    Ok(acc)
}

/// Dynkin-canonical `Ũ`: `U / n`, the coefficient for which the left-nested
/// sum is the Dynkin projection of the `U` side.
pub fn utilde_coeff(parts: &[Class], tau: &StabilityData, tau2: &StabilityData) -> Result<Q, UError> {
    Ok(u_coeff(parts, tau, tau2)? / q(parts.len() as i64))
}

/// `sum U(a_1..a_n) e(a_1)..e(a_n)` over ordered decompositions of `alpha`.
pub fn u_side(
    alpha: &[i64],
    tau: &StabilityData,
    tau2: &StabilityData,
    monoid: &EffectiveMonoid,
    max_parts: usize,
) -> Result<Uea<Class>, UError> {
    let mut out = Uea::zero();
    for parts in monoid.decompositions(alpha, &|_| true, max_parts)? {
        let u = u_coeff(&parts, tau, tau2)?;
        out.add_term(parts, u);
    }
    Ok(out)
}

/// The Lie element whose enveloping-algebra expansion is the `U` side.
pub fn utilde_lie_element(
    alpha: &[i64],
    tau: &StabilityData,
    tau2: &StabilityData,
    monoid: &EffectiveMonoid,
    max_parts: usize,
) -> Result<LieElement<Class>, UError> {
    let p = u_side(alpha, tau, tau2, monoid, max_parts)?;
    Ok(dynkin_project_graded(&p)?)
}

/// Assemble `sum c(w) [[..[w_1, w_2], ..], w_n]` as a Lie element, for any
/// choice of coefficients.
pub fn assemble_left_nested(coeffs: &BTreeMap<Vec<Class>, Q>) -> Result<LieElement<Class>, UError> {
    let mut u = Uea::zero();
    for (w, c) in coeffs {
        u = u.add(&left_nested(w).scale(c));
    }
    Ok(LieElement::from_uea(&u)?)
}

/// `c_n = sum over compositions of n of (-1)^m prod 1/(a_k - a_(k-1))!`.
pub fn c_n(n: usize) -> Q {
    compositions(n)
        .into_iter()
        .map(|parts| {
            let sign = if parts.len() % 2 == 0 { Q::one() } else { -Q::one() };
            parts.iter().fold(sign, |acc, p| acc / factorial(*p as u64))
        })
        .fold(Q::zero(), |a, b| a + b)
}

/// `mu_n = sum over set partitions of {1..n} of prod k_|block|` with
/// `k_j = (-1)^(j-1) (j-1)!`.
pub fn mu_n(n: usize) -> Q {
    let k = |j: usize| {
        let f = factorial((j - 1) as u64);
        if j % 2 == 1 {
            f
        } else {
            -f
        }
    };
    set_partitions(n)
        .into_iter()
        .map(|p| p.iter().fold(Q::one(), |acc, b| acc * k(b.len())))
        .fold(Q::zero(), |a, b| a + b)
}

/// The simple-type family: classes `(x, y)`, type `A` when `x = 1` and type
/// `B` when `x = 0, y >= 1`; `tau_t = -t` on classes with `x >= 1` and `0`
/// otherwise.
pub fn simple_type(t: i64) -> StabilityData {
    StabilityData::from_fn(move |c| {
        if c.len() != 2 || c.iter().any(|x| *x < 0) || classes::is_zero(c) {
            return None;
        }
        let v = if c[0] >= 1 { -t } else { 0 };
        Some(SlopeValue::single(q(v)))
    })
}

//! Wall-crossing formulas evaluated in a graded Lie algebra backend.
//!
//! The right-hand side of a wall-crossing formula is the image of the Lie
//! element from [`crate::ucoeff::utilde_lie_element`] under the Lie algebra
//! map sending the generator of class `b` to the table entry of `b`. Letters
//! absent from the table map to zero.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::classes::{self, fmt_class, Class, EffectiveMonoid};
use crate::freelie::{standard_factorization, LieElement};
use crate::kclasses::quantum_integer;
use crate::ring::{factorial, q, Laurent, RatFn, RingError, Q};
use crate::ucoeff::{utilde_coeff, utilde_lie_element, StabilityData, UError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WcError {
    #[error("table entry for class {0} is flagged nonzero but missing")]
    UnsupportedClass(String),
    #[error("no chi form supplied")]
    MissingChi,
    #[error("chi form is not antisymmetric or has the wrong size")]
    BadChi,
    #[error("no framing dimension fr for class {0}")]
    MissingFr(String),
    #[error("[fr] vanishes for class {0}")]
    ZeroQuantumInteger(String),
    #[error("rank does not decrease from {0} to the summand {1}")]
    RankNotDecreasing(String, String),
    #[error(transparent)]
    U(#[from] UError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A graded Lie algebra in which table entries live.
pub trait LieBackend {
    type Elem: Clone + Debug + PartialEq;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Q) -> Self::Elem;
    /// Bracket of `a` in degree `alpha` with `b` in degree `beta`.
    fn bracket(&self, alpha: &[i64], a: &Self::Elem, beta: &[i64], b: &Self::Elem) -> Result<Self::Elem, WcError>;
}

/// The free Lie algebra on named symbols.
#[derive(Clone, Debug, Default)]
pub struct FreeLie;

impl LieBackend for FreeLie {
    type Elem = LieElement<String>;
    fn zero(&self) -> Self::Elem {
        LieElement::zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(b)
    }
    fn scale(&self, a: &Self::Elem, c: &Q) -> Self::Elem {
        a.scale(c)
    }
    fn bracket(&self, _: &[i64], a: &Self::Elem, _: &[i64], b: &Self::Elem) -> Result<Self::Elem, WcError> {
        Ok(a.bracket(b))
    }
}

/// Commutative `kappa`-ring with bracket `[x_a, y_b] = [chi(a, b)] x_a y_b`.
/// When `refined` is false the quantum integer `[n]` is replaced by its
/// value `(-1)^(n-1) n` at `kappa = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumTorus {
    chi: Option<Vec<Vec<i64>>>,
    pub refined: bool,
}

impl QuantumTorus {
    /// Validates that `chi` is square and antisymmetric.
    pub fn new(chi: Vec<Vec<i64>>, refined: bool) -> Result<Self, WcError> {
        let d = chi.len();
        for i in 0..d {
            if chi[i].len() != d {
                return Err(WcError::BadChi);
            }
            for j in 0..d {
                if chi[i][j] != -chi[j][i] {
                    return Err(WcError::BadChi);
                }
            }
        }
        Ok(QuantumTorus { chi: Some(chi), refined })
    }

    /// A backend without a pairing; every bracket fails with `MissingChi`.
    pub fn without_chi(refined: bool) -> Self {
        QuantumTorus { chi: None, refined }
    }

    pub fn chi_matrix(&self) -> Option<&Vec<Vec<i64>>> {
        self.chi.as_ref()
    }

    /// The same backend with `chi` transposed.
    pub fn transposed(&self) -> Self {
        let chi = self.chi.as_ref().map(|m| {
            let d = m.len();
            (0..d).map(|i| (0..d).map(|j| m[j][i]).collect()).collect()
        });
        QuantumTorus { chi, refined: self.refined }
    }

    pub fn unrefined(&self) -> Self {
        QuantumTorus { chi: self.chi.clone(), refined: false }
    }

    pub fn chi(&self, a: &[i64], b: &[i64]) -> Result<i64, WcError> {
        let m = self.chi.as_ref().ok_or(WcError::MissingChi)?;
        if a.len() != m.len() || b.len() != m.len() {
            return Err(WcError::BadChi);
        }
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += x * m[i][j] * y;
            }
        }
        Ok(s)
    }

    /// `[n]`, or `(-1)^(n-1) n` in the unrefined backend.
    pub fn qint(&self, n: i64) -> Laurent {
        if self.refined {
            quantum_integer(n)
        } else {
            let sign = if n.rem_euclid(2) == 1 { 1 } else { -1 };
            Laurent::int(sign * n)
        }
    }
}

impl LieBackend for QuantumTorus {
    type Elem = RatFn;
    fn zero(&self) -> RatFn {
        RatFn::zero()
    }
    fn add(&self, a: &RatFn, b: &RatFn) -> RatFn {
        a + b
    }
    fn scale(&self, a: &RatFn, c: &Q) -> RatFn {
        a.scale(c)
    }
    fn bracket(&self, alpha: &[i64], a: &RatFn, beta: &[i64], b: &RatFn) -> Result<RatFn, WcError> {
        let n = self.chi(alpha, beta)?;
        Ok(&(a * b) * &RatFn::from(self.qint(n)))
    }
}

/// Invariants indexed by class.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantTable<E> {
    pub entries: BTreeMap<Class, E>,
    /// Cosection counts used by the reduced filter.
    pub o: Option<BTreeMap<Class, u64>>,
    /// Classes whose entry must be present.
    pub flagged_nonzero: BTreeSet<Class>,
}

impl<E> Default for InvariantTable<E> {
    fn default() -> Self {
        InvariantTable { entries: BTreeMap::new(), o: None, flagged_nonzero: BTreeSet::new() }
    }
}

impl<E: Clone> InvariantTable<E> {
    pub fn new(entries: BTreeMap<Class, E>) -> Self {
        InvariantTable { entries, ..Default::default() }
    }

    pub fn with_o(mut self, o: BTreeMap<Class, u64>) -> Self {
        self.o = Some(o);
        self
    }

    fn lookup(&self, c: &Class) -> Result<Option<&E>, WcError> {
        match self.entries.get(c) {
            Some(e) => Ok(Some(e)),
            None if self.flagged_nonzero.contains(c) => Err(WcError::UnsupportedClass(fmt_class(c))),
            None => Ok(None),
        }
    }
}

/// Formal invariant symbol for a class, e.g. `vw[1,2]`.
pub fn invariant_symbol(prefix: &str, c: &[i64]) -> String {
    format!("{}{}", prefix, fmt_class(c))
}

/// Table of formal symbols `prefix[c]` over the given classes, as
/// quantum-torus elements.
pub fn symbolic_table(prefix: &str, cls: impl IntoIterator<Item = Class>) -> InvariantTable<RatFn> {
    InvariantTable::new(cls.into_iter().map(|c| (c.clone(), RatFn::from(Laurent::var(&invariant_symbol(prefix, &c))))).collect())
}

/// Table of free Lie generators `prefix[c]`.
pub fn free_table(prefix: &str, cls: impl IntoIterator<Item = Class>) -> InvariantTable<LieElement<String>> {
    InvariantTable::new(cls.into_iter().map(|c| (c.clone(), LieElement::letter(invariant_symbol(prefix, &c)))).collect())
}

/// Keep decompositions whose cosection counts add up to `o_alpha`.
pub fn reduced_filter(decompositions: Vec<Vec<Class>>, o: &BTreeMap<Class, u64>, o_alpha: u64) -> Vec<Vec<Class>> {
    decompositions
        .into_iter()
        .filter(|d| d.iter().map(|c| o.get(c).copied().unwrap_or(0)).sum::<u64>() == o_alpha)
        .collect()
}

/// Evaluate a Lie element on class letters in a backend.
pub fn evaluate_lie<B: LieBackend>(
    lie: &LieElement<Class>,
    table: &InvariantTable<B::Elem>,
    backend: &B,
    keep: &dyn Fn(&[Class]) -> bool,
) -> Result<B::Elem, WcError> {
    let mut memo: HashMap<Vec<Class>, Option<B::Elem>> = HashMap::new();
    let mut out = backend.zero();
    for (w, c) in lie.terms() {
        if !keep(w) {
            continue;
        }
        if let Some(v) = eval_word(w, table, backend, &mut memo)? {
            out = backend.add(&out, &backend.scale(&v, c));
        }
    }
    Ok(out)
}

fn eval_word<B: LieBackend>(
    w: &[Class],
    table: &InvariantTable<B::Elem>,
    backend: &B,
    memo: &mut HashMap<Vec<Class>, Option<B::Elem>>,
) -> Result<Option<B::Elem>, WcError> {
    if let Some(v) = memo.get(w) {
        return Ok(v.clone());
    }
    let v = if w.len() == 1 {
        table.lookup(&w[0])?.cloned()
    } else {
        let (u, v) = standard_factorization(w);
        match (eval_word(&u, table, backend, memo)?, eval_word(&v, table, backend, memo)?) {
            (Some(a), Some(b)) => Some(backend.bracket(&classes::sum(&u), &a, &classes::sum(&v), &b)?),
            _ => None,
        }
    };
    memo.insert(w.to_vec(), v.clone());
    Ok(v)
}

/// Right-hand side of the dominant wall-crossing formula for `alpha`,
/// `sum Ũ(a_1..a_n; tau, tau') [[..[z_1, z_2], ..], z_n]`, assembled from
/// the Lie element. When the table carries cosection counts only the
/// decompositions passing [`reduced_filter`] contribute.
pub fn wcf_rhs<B: LieBackend>(
    alpha: &[i64],
    tau: &StabilityData,
    tau2: &StabilityData,
    table: &InvariantTable<B::Elem>,
    backend: &B,
    monoid: &EffectiveMonoid,
    max_parts: usize,
) -> Result<B::Elem, WcError> {
    let lie = utilde_lie_element(alpha, tau, tau2, monoid, max_parts)?;
    let o_alpha = table.o.as_ref().map(|o| o.get(alpha).copied().unwrap_or(0));
    let keep = |w: &[Class]| match (&table.o, o_alpha) {
        (Some(o), Some(oa)) => w.iter().map(|c| o.get(c).copied().unwrap_or(0)).sum::<u64>() == oa,
        _ => true,
    };
    evaluate_lie(&lie, table, backend, &keep)
}

/// The wall-crossed table: [`wcf_rhs`] for every class in `targets`.
pub fn wall_cross_table<B: LieBackend>(
    targets: &[Class],
    tau: &StabilityData,
    tau2: &StabilityData,
    table: &InvariantTable<B::Elem>,
    backend: &B,
    monoid: &EffectiveMonoid,
    max_parts: usize,
) -> Result<InvariantTable<B::Elem>, WcError> {
    let mut out = BTreeMap::new();
    for a in targets {
        out.insert(a.clone(), wcf_rhs(a, tau, tau2, table, backend, monoid, max_parts)?);
    }
    Ok(InvariantTable { entries: out, o: table.o.clone(), flagged_nonzero: BTreeSet::new() })
}

fn equal_slope_decompositions(
    alpha: &[i64],
    tau: &StabilityData,
    monoid: &EffectiveMonoid,
    max_parts: usize,
) -> Result<Vec<Vec<Class>>, WcError> {
    let ta = tau.slope(alpha)?;
    let allowed = |c: &Class| tau.slope(c).map(|s| s == ta).unwrap_or(false);
    Ok(monoid.decompositions(alpha, &allowed, max_parts).map_err(UError::from)?)
}

fn fr_of(fr: &BTreeMap<Class, i64>, c: &Class) -> Result<i64, WcError> {
    fr.get(c).copied().ok_or_else(|| WcError::MissingFr(fmt_class(c)))
}

/// One summand of the pair-invariant formula, built as nested brackets
/// `[z_n, [ .. [z_1, d] .. ]]` where the framing slot `d` has degree zero
/// and bracketing a class-`b` entry with anything containing `d` in total
/// class `g` multiplies by `[fr(b) + chi(b, g)]`.
fn pair_term(parts: &[Class], fr: &BTreeMap<Class, i64>, table: &InvariantTable<RatFn>, qt: &QuantumTorus) -> Result<Option<RatFn>, WcError> {
    let dim = parts[0].len();
    let mut acc = RatFn::one();
    let mut acc_class: Class = vec![0; dim];
    for p in parts {
        let z = match table.lookup(p)? {
            Some(z) => z,
            None => return Ok(None),
        };
        let weight = fr_of(fr, p)? + qt.chi(p, &acc_class)?;
        acc = &(&acc * z) * &RatFn::from(qt.qint(weight));
        acc_class = classes::add(&acc_class, p);
    }
    Ok(Some(acc))
}

/// `sum over equal-slope decompositions of (1/n!) prod [fr(a_i) + chi(a_i, a_1 + .. + a_(i-1))] z_(a_i)`.
pub fn pair_invariant_rhs(
    alpha: &[i64],
    fr: &BTreeMap<Class, i64>,
    tau: &StabilityData,
    table: &InvariantTable<RatFn>,
    qt: &QuantumTorus,
    monoid: &EffectiveMonoid,
    max_parts: usize,
) -> Result<RatFn, WcError> {
    qt.chi_matrix().ok_or(WcError::MissingChi)?;
    let mut out = RatFn::zero();
    for parts in equal_slope_decompositions(alpha, tau, monoid, max_parts)? {
        if let Some(t) = pair_term(&parts, fr, table, qt)? {
            out = &out + &t.scale(&(Q::one() / factorial(parts.len() as u64)));
        }
    }
    Ok(out)
}

/// Recover semistable invariants from pair invariants by induction on rank:
/// `z_a = (P_a - sum_{n > 1} ..) / [fr(a)]`. Missing `P` entries count as zero.
pub fn invert_semistable(
    pairs: &BTreeMap<Class, RatFn>,
    fr: &BTreeMap<Class, i64>,
    tau: &StabilityData,
    rank: &dyn Fn(&[i64]) -> i64,
    qt: &QuantumTorus,
    monoid: &EffectiveMonoid,
    max_parts: usize,
) -> Result<InvariantTable<RatFn>, WcError> {
    // every class reachable as an equal-slope summand
    let mut domain: BTreeSet<Class> = BTreeSet::new();
    let mut decomps: BTreeMap<Class, Vec<Vec<Class>>> = BTreeMap::new();
    let mut todo: Vec<Class> = pairs.keys().cloned().collect();
    while let Some(a) = todo.pop() {
        if !domain.insert(a.clone()) {
            continue;
        }
        let ds = equal_slope_decompositions(&a, tau, monoid, max_parts)?;
        for d in &ds {
            if d.len() > 1 {
                for p in d {
                    if rank(p) >= rank(&a) {
                        return Err(WcError::RankNotDecreasing(fmt_class(&a), fmt_class(p)));
                    }
                    if !domain.contains(p) {
                        todo.push(p.clone());
                    }
                }
            }
        }
        decomps.insert(a, ds);
    }
    let mut order: Vec<Class> = domain.into_iter().collect();
    order.sort_by_key(|c| (rank(c), classes::mass(c)));
    let mut table = InvariantTable::new(BTreeMap::new());
    for a in order {
        let mut rest = pairs.get(&a).cloned().unwrap_or_else(RatFn::zero);
        for parts in &decomps[&a] {
            if parts.len() < 2 {
                continue;
            }
            if let Some(t) = pair_term(parts, fr, &table, qt)? {
                rest = &rest - &t.scale(&(Q::one() / factorial(parts.len() as u64)));
            }
        }
        let f = fr_of(fr, &a)?;
        let qi = qt.qint(f);
        if qi.is_zero() {
            return Err(WcError::ZeroQuantumInteger(fmt_class(&a)));
        }
        let z = rest.div(&RatFn::from(qi))?;
        if !z.is_zero() {
            table.entries.insert(a, z);
        }
    }
    Ok(table)
}

/// The numerical wall-crossing formula
/// `sum Ũ(a_1..a_n; tau1, tau2) prod_{i >= 2} [chi(a_i, a_1 + .. + a_(i-1))] prod vw_(a_i)`
/// over decompositions into classes of positive rank, with the
/// dynkin-canonical `Ũ`.
pub fn vw_wcf(
    alpha: &[i64],
    tau1: &StabilityData,
    tau2: &StabilityData,
    vw: &InvariantTable<RatFn>,
    qt: &QuantumTorus,
    rank: &dyn Fn(&[i64]) -> i64,
    monoid: &EffectiveMonoid,
    max_parts: usize,
) -> Result<RatFn, WcError> {
    let allowed = |c: &Class| rank(c) > 0;
    let mut out = RatFn::zero();
    for parts in monoid.decompositions(alpha, &allowed, max_parts).map_err(UError::from)? {
        let mut term = RatFn::one();
        let mut prefix: Class = vec![0; alpha.len()];
        let mut present = true;
        for (i, p) in parts.iter().enumerate() {
            let v = match vw.lookup(p)? {
                Some(v) => v,
                None => {
                    present = false;
                    break;
                }
            };
            term = &term * v;
            if i > 0 {
                term = &term * &RatFn::from(qt.qint(qt.chi(p, &prefix)?));
            }
            prefix = classes::add(&prefix, p);
        }
        if !present || term.is_zero() {
            continue;
        }
        let u = utilde_coeff(&parts, tau1, tau2)?;
        if !u.is_zero() {
            out = &out + &term.scale(&u);
        }
    }
    Ok(out)
}

/// `q` as a quantum-torus scalar.
pub fn scalar(c: i64) -> RatFn {
    RatFn::from(Laurent::constant(q(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ucoeff::simple_type;

    #[test]
    fn identity_wall_crossing() {
        let m = EffectiveMonoid::standard(2);
        let tau = StabilityData::ratio(vec![1, 0], vec![1, 1]);
        let cls: Vec<Class> = m.classes_up_to_mass(3).into_iter().collect();
        let table = symbolic_table("z", cls.clone());
        let qt = QuantumTorus::new(vec![vec![0, 1], vec![-1, 0]], true).unwrap();
        for a in &cls {
            let got = wcf_rhs(a, &tau, &tau, &table, &qt, &m, 8).unwrap();
            assert_eq!(got, table.entries[a]);
        }
    }

    #[test]
    fn simple_type_first_order() {
        let m = EffectiveMonoid::standard(2);
        let table = free_table("z", m.classes_up_to_mass(2));
        let got = wcf_rhs(&[1, 1], &simple_type(-1), &simple_type(1), &table, &FreeLie, &m, 8).unwrap();
        let za = LieElement::letter("z[1,0]".to_string());
        let zb = LieElement::letter("z[0,1]".to_string());
        let want = LieElement::letter("z[1,1]".to_string()).add(&za.bracket(&zb));
        assert_eq!(got, want);
    }

    #[test]
    fn bad_chi_rejected() {
        assert_eq!(QuantumTorus::new(vec![vec![0, 1], vec![1, 0]], true), Err(WcError::BadChi));
    }
}

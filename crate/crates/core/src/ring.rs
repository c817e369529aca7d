//! Exact arithmetic backbone.
//!
//! Every variable carries exponents on the half-integer lattice, stored as
//! doubled integers, so that `kappa^(1/2)`, `z^(1/2)` and square roots of
//! Chern-root weights are ordinary monomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational numbers.
pub type Q = BigRational;
/// Interned symbol name.
pub type Sym = Arc<str>;

/// Name of the distinguished weight symbol.
pub const KAPPA: &str = "kappa";

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn sym(name: &str) -> Sym {
    Arc::from(name)
}

pub fn factorial(n: u64) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    Q::from_integer(acc)
}

/// Generalized binomial coefficient `binom(a, k)` for rational `a`.
pub fn binomial(a: &Q, k: u64) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc = acc * (a - q(i as i64));
    }
    acc / factorial(k)
}

/// Format a rational as `p` or `p/q`.
pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parse `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Result<Q, RingError> {
    let s = s.trim();
    let bad = || RingError::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Q::from_integer(n))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("denominator is not a unit at the expansion point (leading coefficient {0})")]
    NonExpandable(String),
    #[error("input is a truncated series in {0}, not a rational function")]
    NonRational(String),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series constant term is not 1")]
    NonUnitConstantTerm,
    #[error("genuine pole at kappa = 1")]
    PoleAtOne,
    #[error("exact division failed")]
    NotDivisible,
    #[error("substituted value is not invertible")]
    NotInvertible,
    #[error("substitution produces a non half-integral exponent")]
    BadExponent,
    #[error("truncations in different variables or points cannot be combined")]
    TruncationMismatch,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("symbol {0} already declared with a different kind")]
    KindConflict(String),
}

// ---------------------------------------------------------------------------
// Symbols

/// Kind of a weight symbol, fixed at declaration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Multiplicative,
    Additive,
    Formal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSymbol {
    pub name: Sym,
    pub kind: SymbolKind,
}

/// Registry that keeps symbol names unique with a fixed kind.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    symbols: BTreeMap<Sym, SymbolKind>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: &str, kind: SymbolKind) -> Result<WeightSymbol, RingError> {
        match self.symbols.get(name) {
            Some(k) if *k != kind => Err(RingError::KindConflict(name.to_string())),
            _ => {
                let s = sym(name);
                self.symbols.insert(s.clone(), kind);
                Ok(WeightSymbol { name: s, kind })
            }
        }
    }

    pub fn kind(&self, name: &str) -> Option<SymbolKind> {
        self.symbols.get(name).copied()
    }
}

// ---------------------------------------------------------------------------
// Monomials

/// A Laurent monomial with doubled exponents, sorted by symbol name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Sym, i64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// `name^e` for an integer exponent.
    pub fn var(name: &str, e: i64) -> Self {
        Self::half(name, 2 * e)
    }

    /// `name^(e2/2)`.
    pub fn half(name: &str, e2: i64) -> Self {
        if e2 == 0 {
            Self::one()
        } else {
            Monomial(vec![(sym(name), e2)])
        }
    }

    /// Build from `(name, doubled exponent)` pairs in any order.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut m = Self::one();
        for (n, e2) in pairs {
            m = m.mul(&Self::half(n, e2));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Sym, i64)] {
        &self.0
    }

    /// Doubled exponent of `name`.
    pub fn exp2(&self, name: &str) -> i64 {
        self.0
            .iter()
            .find(|(s, _)| &**s == name)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(s, e)| (s.clone(), -e)).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Self::one();
        }
        Monomial(self.0.iter().map(|(s, e)| (s.clone(), e * k)).collect())
    }

    /// Remove `name` from the monomial.
    pub fn without(&self, name: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(s, _)| &**s != name).cloned().collect())
    }

    /// Apply `f` to the doubled exponent of `name`.
    fn map_exp(&self, name: &str, f: impl Fn(i64) -> i64) -> Monomial {
        let e = f(self.exp2(name));
        self.without(name).mul(&Monomial::half(name, e))
    }

    /// Lexicographic comparison of exponent vectors, absent symbols counting
    /// as exponent zero. Unlike the derived order this is compatible with
    /// multiplication.
    pub fn lex_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            let (sa, sb) = (a.get(i), b.get(j));
            let (ea, eb) = match (sa, sb) {
                (None, None) => return Equal,
                (Some(x), None) => (x.1, 0),
                (None, Some(y)) => (0, y.1),
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Less => (x.1, 0),
                    Greater => (0, y.1),
                    Equal => (x.1, y.1),
                },
            };
            if ea != eb {
                return ea.cmp(&eb);
            }
            match (sa, sb) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x.0 < y.0 => i += 1,
                (Some(_), Some(_)) => j += 1,
                (Some(_), None) => i += 1,
                (None, _) => j += 1,
            }
        }
    }

    /// Total of doubled exponents weighted by `deg`.
    pub fn weighted_degree2(&self, deg: &dyn Fn(&str) -> i64) -> i64 {
        self.0.iter().map(|(s, e)| deg(s) * e).sum()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Sym> {
        self.0.iter().map(|(s, _)| s)
    }
}

fn fmt_exp2(e2: i64) -> String {
    if e2 % 2 == 0 {
        format!("{}", e2 / 2)
    } else {
        format!("({}/2)", e2)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| if *e == 2 { s.to_string() } else { format!("{}^{}", s, fmt_exp2(*e)) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

// ---------------------------------------------------------------------------
// Laurent elements

/// Expansion point of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Zero,
    Infinity,
}

/// Marks a truncated series: terms are known exactly for valuations up to
/// `order2` (doubled units), where the valuation of `var^(e/2)` is `e` at
/// zero and `-e` at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub var: Sym,
    pub point: Point,
    pub order2: i64,
}

impl Truncation {
    fn val(&self, e2: i64) -> i64 {
        match self.point {
            Point::Zero => e2,
            Point::Infinity => -e2,
        }
    }
    fn same_slot(&self, other: &Truncation) -> bool {
        self.var == other.var && self.point == other.point
    }
}

/// Sparse multivariate Laurent polynomial over Q, optionally a truncated
/// series in one variable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<Monomial, Q>,
    trunc: Option<Truncation>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Laurent { terms, trunc: None }
    }

    pub fn mono(m: Monomial) -> Self {
        Self::term(m, Q::one())
    }

    /// The variable `name` itself.
    pub fn var(name: &str) -> Self {
        Self::mono(Monomial::var(name, 1))
    }

    /// `name^e`.
    pub fn var_pow(name: &str, e: i64) -> Self {
        Self::mono(Monomial::var(name, e))
    }

    /// `name^(e2/2)`.
    pub fn half_pow(name: &str, e2: i64) -> Self {
        Self::mono(Monomial::half(name, e2))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut out = Laurent::zero();
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn truncation(&self) -> Option<&Truncation> {
        self.trunc.as_ref()
    }

    /// Forget the truncation marker.
    pub fn untruncated(mut self) -> Self {
        self.trunc = None;
        self
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    /// If the element is `c * m` for a single monomial, return it.
    pub fn as_single_term(&self) -> Option<(&Monomial, &Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// If the element is a rational constant, return it.
    pub fn as_constant(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        match self.as_single_term() {
            Some((m, c)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        if let Some(t) = &self.trunc {
            if t.val(m.exp2(&t.var)) > t.order2 {
                return;
            }
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn drop_beyond_trunc(&mut self) {
        if let Some(t) = self.trunc.clone() {
            self.terms.retain(|m, _| t.val(m.exp2(&t.var)) <= t.order2);
        }
    }

    /// Minimal doubled exponent of `var` among the terms.
    pub fn min_exp2(&self, var: &str) -> Option<i64> {
        self.terms.keys().map(|m| m.exp2(var)).min()
    }

    /// Maximal doubled exponent of `var` among the terms.
    pub fn max_exp2(&self, var: &str) -> Option<i64> {
        self.terms.keys().map(|m| m.exp2(var)).max()
    }

    pub fn contains_symbol(&self, var: &str) -> bool {
        self.terms.keys().any(|m| m.exp2(var) != 0)
    }

    /// All symbols that occur.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self.terms.keys().flat_map(|m| m.symbols().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Lowest valuation of the terms with respect to a truncation slot.
    fn valuation_in(&self, t: &Truncation) -> Option<i64> {
        self.terms.keys().map(|m| t.val(m.exp2(&t.var))).min()
    }

    /// Truncate as a series in `var` around `point`, keeping valuations up to
    /// `order` (integer units).
    pub fn truncate(&self, var: &str, point: Point, order: i64) -> Result<Laurent, RingError> {
        self.truncate2(var, point, 2 * order)
    }

    pub fn truncate2(&self, var: &str, point: Point, order2: i64) -> Result<Laurent, RingError> {
        let t = Truncation { var: sym(var), point, order2 };
        let order2 = match &self.trunc {
            Some(old) if !old.same_slot(&t) => return Err(RingError::TruncationMismatch),
            Some(old) => old.order2.min(order2),
            None => order2,
        };
        let mut out = self.clone();
        out.trunc = Some(Truncation { order2, ..t });
        out.drop_beyond_trunc();
        Ok(out)
    }

    pub fn try_add(&self, other: &Laurent) -> Result<Laurent, RingError> {
        let trunc = match (&self.trunc, &other.trunc) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                if !a.same_slot(b) {
                    return Err(RingError::TruncationMismatch);
                }
                Some(Truncation { order2: a.order2.min(b.order2), ..a.clone() })
            }
        };
        let mut out = Laurent { terms: self.terms.clone(), trunc };
        out.drop_beyond_trunc();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Laurent) -> Result<Laurent, RingError> {
        let trunc = match (&self.trunc, &other.trunc) {
            (None, None) => None,
            (Some(a), None) => Some(Self::product_trunc(a, self, other, None)),
            (None, Some(b)) => Some(Self::product_trunc(b, other, self, None)),
            (Some(a), Some(b)) => {
                if !a.same_slot(b) {
                    return Err(RingError::TruncationMismatch);
                }
                Some(Self::product_trunc(a, self, other, Some(b)))
            }
        };
        let mut out = Laurent { terms: BTreeMap::new(), trunc };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Known order of `f * g` where `f` is truncated with `tf`.
    fn product_trunc(tf: &Truncation, f: &Laurent, g: &Laurent, tg: Option<&Truncation>) -> Truncation {
        let vf = f.valuation_in(tf).unwrap_or(tf.order2 + 1);
        let vg = g.valuation_in(tf).unwrap_or(match tg {
            Some(t) => t.order2 + 1,
            None => 0,
        });
        let mut order2 = tf.order2 + vg;
        if let Some(t) = tg {
            order2 = order2.min(t.order2 + vf);
        }
        if g.is_zero() && tg.is_none() {
            // exact zero times anything is exact zero
            order2 = i64::MAX / 4;
        }
        Truncation { order2, ..tf.clone() }
    }

    pub fn scale(&self, c: &Q) -> Laurent {
        if c.is_zero() {
            return Laurent { terms: BTreeMap::new(), trunc: self.trunc.clone() };
        }
        Laurent {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Laurent {
        let mut out = Laurent {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
            trunc: self.trunc.clone(),
        };
        if let Some(t) = &mut out.trunc {
            t.order2 += t.val(m.exp2(&t.var));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Laurent {
        let mut acc = Laurent::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a single-term element.
    pub fn monomial_inverse(&self) -> Option<Laurent> {
        let (m, c) = self.as_single_term()?;
        Some(Laurent::term(m.inv(), c.recip()))
    }

    /// Integer power, negative powers allowed for single-term elements.
    pub fn powi(&self, k: i64) -> Result<Laurent, RingError> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            let inv = self.monomial_inverse().ok_or(RingError::NotInvertible)?;
            Ok(inv.pow((-k) as u32))
        }
    }

    /// Group terms by the doubled exponent of `var`.
    pub fn split_by(&self, var: &str) -> BTreeMap<i64, Laurent> {
        let mut out: BTreeMap<i64, Laurent> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp2(var)).or_default().add_term(m.without(var), c.clone());
        }
        out
    }

    /// Coefficient of `var^(e2/2)` as an element free of `var`.
    pub fn coeff_in(&self, var: &str, e2: i64) -> Laurent {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            if m.exp2(var) == e2 {
                out.add_term(m.without(var), c.clone());
            }
        }
        out
    }

    /// Keep only terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Laurent {
        Laurent {
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Map each term through `f`, summing the results.
    pub fn map_terms(&self, f: impl Fn(&Monomial, &Q) -> Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            out = &out + &f(m, c);
        }
        out
    }

    /// Substitute the monomial `value` for `var`.
    pub fn substitute_monomial(&self, var: &str, value: &Monomial) -> Result<Laurent, RingError> {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            let e2 = m.exp2(var);
            let mut img = Monomial::one();
            for (s, ex2) in value.pairs() {
                let prod = ex2 * e2;
                if prod % 2 != 0 {
                    return Err(RingError::BadExponent);
                }
                img = img.mul(&Monomial::half(s, prod / 2));
            }
            out.add_term(m.without(var).mul(&img), c.clone());
        }
        Ok(out)
    }

    /// Substitute `value` for `var`; `var` must occur with integer exponents
    /// and `value` must be a single term wherever negative powers occur.
    pub fn substitute(&self, var: &str, value: &Laurent) -> Result<Laurent, RingError> {
        let mut cache: BTreeMap<i64, Laurent> = BTreeMap::new();
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            let e2 = m.exp2(var);
            if e2 % 2 != 0 {
                return Err(RingError::BadExponent);
            }
            if !cache.contains_key(&e2) {
                cache.insert(e2, value.powi(e2 / 2)?);
            }
            let rest = Laurent::term(m.without(var), c.clone());
            out = out.try_add(&rest.try_mul(&cache[&e2])?)?;
        }
        Ok(out)
    }

    /// Replace `var` by its inverse.
    pub fn reflect(&self, var: &str) -> Laurent {
        let mut out = Laurent {
            terms: self.terms.iter().map(|(m, c)| (m.map_exp(var, |e| -e), c.clone())).collect(),
            trunc: self.trunc.clone(),
        };
        if let Some(t) = &mut out.trunc {
            if &*t.var == var {
                t.point = match t.point {
                    Point::Zero => Point::Infinity,
                    Point::Infinity => Point::Zero,
                };
            }
        }
        out
    }

    /// Exact division, failing with `NotDivisible` when `self` is not a
    /// multiple of `d` in the Laurent ring.
    pub fn div_exact(&self, d: &Laurent) -> Result<Laurent, RingError> {
        if d.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        if self.is_zero() {
            return Ok(Laurent::zero());
        }
        if let Some(inv) = d.monomial_inverse() {
            return Ok(self * &inv);
        }
        let num = self.clone().untruncated();
        let d = d.clone().untruncated();
        // Per-variable bounds on quotient exponents.
        let mut vars = num.symbols();
        vars.extend(d.symbols());
        vars.sort();
        vars.dedup();
        let bounds: Vec<(Sym, i64, i64)> = vars
            .iter()
            .map(|v| {
                let lo = num.min_exp2(v).unwrap() - d.min_exp2(v).unwrap();
                let hi = num.max_exp2(v).unwrap() - d.max_exp2(v).unwrap();
                (v.clone(), lo, hi)
            })
            .collect();
        let (dlm, dlc) = d.leading_term().unwrap();
        let dlm_inv = dlm.inv();
        let mut rem = num;
        let mut quot = Laurent::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.mul(&dlm_inv);
            for (v, lo, hi) in &bounds {
                let e = qm.exp2(v);
                if e < *lo || e > *hi {
                    return Err(RingError::NotDivisible);
                }
            }
            let qc = c / &dlc;
            let t = Laurent::term(qm, qc);
            rem = &rem - &(&t * &d);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// Largest term in the lexicographic group order on exponent vectors.
    fn leading_term(&self) -> Option<(Monomial, Q)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.lex_cmp(b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Total degree of `var`-free content: evaluation of every symbol at 1.
    pub fn sum_of_coefficients(&self) -> Q {
        self.terms.values().fold(Q::zero(), |a, b| a + b)
    }

    /// Set every occurrence of `var` to 1.
    pub fn eval_one(&self, var: &str) -> Laurent {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            out.add_term(m.without(var), c.clone());
        }
        out
    }

    /// Multiply the coefficient of each monomial by `f(monomial)`.
    pub fn scale_terms(&self, f: impl Fn(&Monomial) -> Q) -> Laurent {
        let mut out = Laurent { terms: BTreeMap::new(), trunc: self.trunc.clone() };
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * f(m));
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        // Print in descending monomial order for readability.
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            let sign = if first {
                if neg {
                    "-"
                } else {
                    ""
                }
            } else if neg {
                " - "
            } else {
                " + "
            };
            let body = if m.is_one() {
                fmt_q(&a)
            } else if a.is_one() {
                m.to_string()
            } else {
                format!("{}*{}", fmt_q(&a), m)
            };
            write!(f, "{}{}", sign, body)?;
            first = false;
        }
        if let Some(t) = &self.trunc {
            let o = t.order2 + 1;
            match t.point {
                Point::Zero => write!(f, " + O({}^{})", t.var, fmt_exp2(o))?,
                Point::Infinity => write!(f, " + O({}^{})", t.var, fmt_exp2(-o))?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:expr) => {
        impl<'a> $tr<&'a Laurent> for &'a Laurent {
            type Output = Laurent;
            fn $m(self, rhs: &'a Laurent) -> Laurent {
                $inner(self, rhs)
            }
        }
        impl $tr<Laurent> for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent {
                $inner(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Laurent> for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: &'a Laurent) -> Laurent {
                $inner(&self, rhs)
            }
        }
        impl<'a> $tr<Laurent> for &'a Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent {
                $inner(self, &rhs)
            }
        }
    };
}

fn add_impl(a: &Laurent, b: &Laurent) -> Laurent {
    a.try_add(b).expect("incompatible truncations in addition")
}
fn sub_impl(a: &Laurent, b: &Laurent) -> Laurent {
    a.try_add(&-b).expect("incompatible truncations in subtraction")
}
fn mul_impl(a: &Laurent, b: &Laurent) -> Laurent {
    a.try_mul(b).expect("incompatible truncations in multiplication")
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            trunc: self.trunc.clone(),
        }
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl From<Q> for Laurent {
    fn from(c: Q) -> Self {
        Laurent::constant(c)
    }
}

impl From<i64> for Laurent {
    fn from(n: i64) -> Self {
        Laurent::int(n)
    }
}

// ---------------------------------------------------------------------------
// Rational functions

/// A quotient of two Laurent elements, compared by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: Laurent,
    pub den: Laurent,
}

impl RatFn {
    pub fn new(num: Laurent, den: Laurent) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        Ok(RatFn { num, den }.reduced())
    }

    pub fn zero() -> Self {
        RatFn { num: Laurent::zero(), den: Laurent::one() }
    }

    pub fn one() -> Self {
        RatFn { num: Laurent::one(), den: Laurent::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancel the denominator when it divides the numerator exactly and
    /// normalize monomial denominators away.
    pub fn reduced(self) -> Self {
        if self.num.is_zero() {
            return RatFn::zero();
        }
        if let Some(inv) = self.den.monomial_inverse() {
            return RatFn { num: &self.num * &inv, den: Laurent::one() };
        }
        if self.num.truncation().is_none() {
            if let Ok(qt) = self.num.div_exact(&self.den) {
                return RatFn { num: qt, den: Laurent::one() };
            }
        }
        self
    }

    /// The value as a Laurent element when the denominator has cancelled.
    pub fn as_laurent(&self) -> Option<Laurent> {
        if self.num.is_zero() {
            return Some(Laurent::zero());
        }
        let inv = self.den.monomial_inverse()?;
        Some(&self.num * &inv)
    }

    pub fn inv(&self) -> Result<RatFn, RingError> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn, RingError> {
        Ok(self * &other.inv()?)
    }

    pub fn powi(&self, k: i64) -> Result<RatFn, RingError> {
        if k >= 0 {
            Ok(RatFn { num: self.num.pow(k as u32), den: self.den.pow(k as u32) }.reduced())
        } else {
            self.inv()?.powi(-k)
        }
    }

    pub fn scale(&self, c: &Q) -> RatFn {
        RatFn { num: self.num.scale(c), den: self.den.clone() }.reduced()
    }

    /// Apply a ring map that is applied separately to numerator and denominator.
    pub fn map(&self, f: impl Fn(&Laurent) -> Result<Laurent, RingError>) -> Result<RatFn, RingError> {
        RatFn::new(f(&self.num)?, f(&self.den)?)
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }
}

impl From<Laurent> for RatFn {
    fn from(l: Laurent) -> Self {
        RatFn { num: l, den: Laurent::one() }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_laurent() {
            Some(l) => write!(f, "{}", l),
            None => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &'a RatFn) -> RatFn {
        RatFn { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.reduced()
    }
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, rhs: &'a RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn { num: &self.num + &rhs.num, den: self.den.clone() }.reduced();
        }
        RatFn { num: &self.num * &rhs.den + &rhs.num * &self.den, den: &self.den * &rhs.den }.reduced()
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &'a RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

// ---------------------------------------------------------------------------
// Expansions and residues

/// Series expansion of the rational function `f` in `var` around `point`,
/// keeping terms of valuation at most `order`.
pub fn expand(f: &RatFn, var: &str, point: Point, order: i64) -> Result<Laurent, RingError> {
    expand2(&f.num, &f.den, var, point, 2 * order)
}

fn expand2(num: &Laurent, den: &Laurent, var: &str, point: Point, order2: i64) -> Result<Laurent, RingError> {
    if point == Point::Infinity {
        let r = expand2(&num.reflect(var), &den.reflect(var), var, Point::Zero, order2)?;
        return Ok(r.reflect(var));
    }
    if den.is_zero() {
        return Err(RingError::ZeroDenominator);
    }
    let lo = den.min_exp2(var).unwrap();
    let lead = den.coeff_in(var, lo);
    let lead_inv = lead
        .monomial_inverse()
        .ok_or_else(|| RingError::NonExpandable(lead.to_string()))?
        .mul_monomial(&Monomial::half(var, -lo));
    // den * lead_inv = 1 + r with r of positive valuation
    let r = &(den.clone().untruncated() * &lead_inv) - &Laurent::one();
    let n0 = num * &lead_inv;
    let v0 = match n0.min_exp2(var) {
        Some(v) => v,
        None => {
            return Laurent::zero().truncate2(var, Point::Zero, order2);
        }
    };
    let need = order2 - v0;
    let mut series = Laurent::one();
    if need >= 0 {
        let step = r.min_exp2(var).unwrap_or(need + 1).max(1);
        let mut term = Laurent::one();
        let max_j = need / step;
        for _ in 0..max_j {
            term = -(&term * &r);
            term = term.filter_terms(|m| m.exp2(var) <= need);
            if term.is_zero() {
                break;
            }
            series = &series + &term;
        }
    }
    let series = series.truncate2(var, Point::Zero, need.max(-1))?;
    let out = n0.try_mul(&series)?;
    out.truncate2(var, Point::Zero, order2)
}

/// Coefficient of `var^(e2/2)` in a series, checking it is within the known range.
fn series_coeff(s: &Laurent, var: &str, e2: i64) -> Laurent {
    if let Some(t) = s.truncation() {
        debug_assert!(t.val(e2) <= t.order2, "coefficient beyond truncation order");
    }
    s.coeff_in(var, e2)
}

fn ensure_rational(f: &RatFn, var: &str) -> Result<(), RingError> {
    for part in [&f.num, &f.den] {
        if let Some(t) = part.truncation() {
            if &*t.var == var {
                return Err(RingError::NonRational(var.to_string()));
            }
        }
    }
    Ok(())
}

/// K-theoretic residue: the `var^0` coefficient of `f_- - f_+`.
pub fn residue_k(f: &RatFn, var: &str) -> Result<Laurent, RingError> {
    ensure_rational(f, var)?;
    let minus = expand(f, var, Point::Infinity, 0)?;
    let plus = expand(f, var, Point::Zero, 0)?;
    Ok(series_coeff(&minus, var, 0) - series_coeff(&plus, var, 0))
}

/// Cohomological residue: the `var^-1` coefficient of the expansion at infinity.
pub fn residue_coh(f: &RatFn, var: &str) -> Result<Laurent, RingError> {
    ensure_rational(f, var)?;
    let minus = expand(f, var, Point::Infinity, 1)?;
    Ok(series_coeff(&minus, var, -2))
}

fn require_series_at_zero(g: &Laurent, var: &str, order: i64) -> Result<Laurent, RingError> {
    let g = match g.truncation() {
        Some(t) if &*t.var == var && t.point == Point::Zero => g.clone(),
        Some(_) => return Err(RingError::TruncationMismatch),
        None => g.clone(),
    };
    g.truncate(var, Point::Zero, order)
}

/// `exp(g)` for a series `g` in `var` with zero constant term.
pub fn plethystic_exp(g: &Laurent, var: &str, order: i64) -> Result<Laurent, RingError> {
    let g = require_series_at_zero(g, var, order)?;
    if g.min_exp2(var).map_or(false, |e| e <= 0) {
        return Err(RingError::NonzeroConstantTerm);
    }
    let mut out = Laurent::one().truncate(var, Point::Zero, order)?;
    let mut term = out.clone();
    let mut k = 1i64;
    loop {
        term = (&term * &g).scale(&qf(1, k)).truncate(var, Point::Zero, order)?;
        if term.is_zero() {
            break;
        }
        out = &out + &term;
        k += 1;
    }
    Ok(out)
}

/// `log(f)` for a series `f` in `var` with constant term 1.
pub fn plethystic_log(f: &Laurent, var: &str, order: i64) -> Result<Laurent, RingError> {
    let f = require_series_at_zero(f, var, order)?;
    if f.min_exp2(var).map_or(false, |e| e < 0) {
        return Err(RingError::NonUnitConstantTerm);
    }
    let c0 = f.coeff_in(var, 0);
    if c0 != Laurent::one() {
        return Err(RingError::NonUnitConstantTerm);
    }
    let h = &f - &Laurent::one();
    let mut out = Laurent::zero().truncate(var, Point::Zero, order)?;
    let mut power = Laurent::one().truncate(var, Point::Zero, order)?;
    let mut k = 1i64;
    loop {
        power = (&power * &h).truncate(var, Point::Zero, order)?;
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = &out + &power.scale(&qf(sign, k));
        k += 1;
    }
    Ok(out)
}

/// Multiplicative expansion: coefficients `c_0, ..., c_order` of the
/// expansion of `f` in powers of `(1 - var)`, each a rational function in the
/// remaining symbols. Every factor of the denominator must stay nonzero at
/// `var = 1`.
pub fn expand_multiplicative(f: &RatFn, var: &str, order: usize) -> Result<Vec<RatFn>, RingError> {
    ensure_rational(f, var)?;
    let n = one_minus_coeffs(&f.num, var, order);
    let d = one_minus_coeffs(&f.den, var, order);
    let d0 = d[0].clone();
    if d0.is_zero() {
        return Err(RingError::NonExpandable(format!("denominator vanishes at {} = 1", var)));
    }
    // c_k = p_k / d0^(k+1) with p_k = n_k d0^k - sum_{i=1}^k d_i p_{k-i} d0^(i-1)
    let mut p: Vec<Laurent> = Vec::with_capacity(order + 1);
    let mut d0_pows = vec![Laurent::one()];
    for k in 1..=order + 1 {
        d0_pows.push(&d0_pows[k - 1] * &d0);
    }
    for k in 0..=order {
        let mut pk = &n[k] * &d0_pows[k];
        for i in 1..=k {
            if d[i].is_zero() {
                continue;
            }
            pk = &pk - &(&(&d[i] * &p[k - i]) * &d0_pows[i - 1]);
        }
        p.push(pk);
    }
    p.into_iter()
        .enumerate()
        .map(|(k, pk)| RatFn::new(pk, d0_pows[k + 1].clone()))
        .collect()
}

/// Coefficients of `(1 - var)^k`, `k <= order`, after writing every power of
/// `var` as a binomial series in `(1 - var)`.
fn one_minus_coeffs(f: &Laurent, var: &str, order: usize) -> Vec<Laurent> {
    let mut out = vec![Laurent::zero(); order + 1];
    for (e2, rest) in f.split_by(var) {
        let h = qf(e2, 2);
        for (k, slot) in out.iter_mut().enumerate() {
            let c = binomial(&h, k as u64);
            if c.is_zero() {
                continue;
            }
            let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
            *slot = &*slot + &rest.scale(&(c * sign));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// kappa = 1

fn sqrt_kappa_minus_one() -> Laurent {
    Laurent::half_pow(KAPPA, 1) - Laurent::one()
}

/// Order of vanishing at `kappa = 1` (None for the zero element).
pub fn kappa_one_order(f: &Laurent) -> Option<u32> {
    if f.is_zero() {
        return None;
    }
    let d = sqrt_kappa_minus_one();
    let mut g = f.clone().untruncated();
    let mut n = 0;
    while g.eval_one(KAPPA).is_zero() {
        g = g.div_exact(&d).expect("vanishing at kappa=1 implies divisibility");
        n += 1;
    }
    Some(n)
}

/// Whether `f - g` is divisible by `(1 - kappa)^h`.
pub fn congruent_mod_one_minus_kappa(f: &Laurent, g: &Laurent, h: u32) -> bool {
    match kappa_one_order(&(f - g)) {
        None => true,
        Some(n) => n >= h,
    }
}

/// Value at `kappa = 1` of a rational function in `kappa^(1/2)`.
pub fn specialize_kappa(f: &RatFn) -> Result<Laurent, RingError> {
    if f.num.is_zero() {
        return Ok(Laurent::zero());
    }
    let d = sqrt_kappa_minus_one();
    let vn = kappa_one_order(&f.num).unwrap();
    let vd = kappa_one_order(&f.den).unwrap();
    if vd > vn {
        return Err(RingError::PoleAtOne);
    }
    if vn > vd {
        return Ok(Laurent::zero());
    }
    let mut num = f.num.clone().untruncated();
    let mut den = f.den.clone().untruncated();
    for _ in 0..vn {
        num = num.div_exact(&d)?;
        den = den.div_exact(&d)?;
    }
    let n1 = num.eval_one(KAPPA);
    let d1 = den.eval_one(KAPPA);
    n1.div_exact(&d1)
}

// ---------------------------------------------------------------------------
// Slope values

/// An element of Q extended by two infinities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    NegInf,
    Fin(Q),
    PosInf,
}

impl Ext {
    pub fn parse(s: &str) -> Result<Ext, RingError> {
        match s.trim() {
            "inf" | "+inf" => Ok(Ext::PosInf),
            "-inf" => Ok(Ext::NegInf),
            t => Ok(Ext::Fin(parse_q(t)?)),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "inf"),
            Ext::Fin(c) => write!(f, "{}", fmt_q(c)),
        }
    }
}

/// A slope: a tuple compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlopeValue(pub Vec<Ext>);

impl SlopeValue {
    pub fn single(c: Q) -> Self {
        SlopeValue(vec![Ext::Fin(c)])
    }
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Convert a small rational to `i64` when integral.
pub fn q_to_i64(c: &Q) -> Option<i64> {
    if c.is_integer() {
        c.numer().to_i64()
    } else {
        None
    }
}

/// `gcd` helper on machine integers.
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Laurent {
        Laurent::var("z")
    }

    #[test]
    fn geometric_series_at_zero_and_infinity() {
        let f = RatFn::new(Laurent::one(), Laurent::one() - z()).unwrap();
        let at0 = expand(&f, "z", Point::Zero, 3).unwrap();
        let want0 = Laurent::one() + z() + z().pow(2) + z().pow(3);
        assert_eq!(at0.clone().untruncated(), want0);
        let atinf = expand(&f, "z", Point::Infinity, 3).unwrap();
        let want = -(Laurent::var_pow("z", -1) + Laurent::var_pow("z", -2) + Laurent::var_pow("z", -3));
        assert_eq!(atinf.untruncated(), want);
    }

    #[test]
    fn residues_of_simple_poles() {
        let f = RatFn::new(Laurent::one(), Laurent::one() - z()).unwrap();
        assert_eq!(residue_k(&f, "z").unwrap(), Laurent::int(-1));
        let t = Laurent::var("t");
        let g = RatFn::new(Laurent::one(), Laurent::one() - &t * &z()).unwrap();
        assert_eq!(residue_k(&g, "z").unwrap(), Laurent::int(-1));
        assert_eq!(residue_k(&RatFn::from(t.clone()), "z").unwrap(), Laurent::zero());
        let u = Laurent::var("u");
        let zeta = Laurent::var("zeta");
        let h = RatFn::new(Laurent::one(), &u + &zeta).unwrap();
        assert_eq!(residue_coh(&h, "u").unwrap(), Laurent::one());
        let h2 = RatFn::new(Laurent::one(), (&u + &zeta).pow(2)).unwrap();
        assert_eq!(residue_coh(&h2, "u").unwrap(), Laurent::zero());
        assert_eq!(residue_coh(&RatFn::from(u.pow(3)), "u").unwrap(), Laurent::zero());
    }

    #[test]
    fn truncated_input_is_not_rational() {
        let s = (Laurent::one() + z()).truncate("z", Point::Zero, 2).unwrap();
        assert!(matches!(residue_k(&RatFn::from(s), "z"), Err(RingError::NonRational(_))));
    }

    #[test]
    fn exp_and_log_examples() {
        let x = Laurent::var("x");
        let g = -(&x + &x.pow(2).scale(&qf(1, 2)) + x.pow(3).scale(&qf(1, 3)));
        let e = plethystic_exp(&g, "x", 3).unwrap();
        assert_eq!(e.untruncated(), Laurent::one() - x.clone());
        assert_eq!(plethystic_exp(&Laurent::zero(), "x", 4).unwrap().untruncated(), Laurent::one());
        let h = &x + &x.pow(2).scale(&q(5));
        let back = plethystic_log(&plethystic_exp(&h, "x", 2).unwrap(), "x", 2).unwrap();
        assert_eq!(back.untruncated(), h);
        assert_eq!(plethystic_exp(&Laurent::one(), "x", 2), Err(RingError::NonzeroConstantTerm));
    }

    #[test]
    fn multiplicative_expansion_of_one_minus_zw() {
        let w = Laurent::var("w");
        let f = RatFn::new(Laurent::one(), Laurent::one() - &z() * &w).unwrap();
        let c = expand_multiplicative(&f, "z", 2).unwrap();
        let y = Laurent::one() - w.clone();
        assert_eq!(c[0], RatFn::new(Laurent::one(), y.clone()).unwrap());
        assert_eq!(c[1], RatFn::new(-w.clone(), y.pow(2)).unwrap());
        assert_eq!(c[2], RatFn::new(w.pow(2), y.pow(3)).unwrap());
    }

    #[test]
    fn kappa_specialization() {
        let k = |e2| Laurent::half_pow(KAPPA, e2);
        assert_eq!(specialize_kappa(&RatFn::from(k(1) + k(-1))).unwrap(), Laurent::int(2));
        let pole = RatFn::new(Laurent::one(), Laurent::one() - k(2)).unwrap();
        assert_eq!(specialize_kappa(&pole), Err(RingError::PoleAtOne));
        let removable = RatFn::new(k(2) - Laurent::one(), k(1) - Laurent::one()).unwrap();
        assert_eq!(specialize_kappa(&removable).unwrap(), Laurent::int(2));
        assert_eq!(kappa_one_order(&(Laurent::one() - k(2)).pow(3)), Some(3));
    }

    #[test]
    fn exact_division() {
        let a = Laurent::var("a");
        let b = Laurent::var("b");
        let p = (&a + &b) * (&a - &b.pow(3)) * Laurent::var_pow("a", -2);
        assert_eq!(p.div_exact(&(&a + &b)).unwrap(), (&a - &b.pow(3)) * Laurent::var_pow("a", -2));
        assert_eq!((&a + &Laurent::one()).div_exact(&(&a + &b)), Err(RingError::NotDivisible));
    }

    #[test]
    fn slope_order_is_lexicographic() {
        let a = SlopeValue(vec![Ext::Fin(q(1)), Ext::NegInf]);
        let b = SlopeValue(vec![Ext::Fin(q(1)), Ext::Fin(q(-7))]);
        let c = SlopeValue(vec![Ext::PosInf, Ext::NegInf]);
        assert!(a < b && b < c);
        assert_eq!(Ext::parse("-3/4").unwrap(), Ext::Fin(qf(-3, 4)));
    }

    #[test]
    fn symbol_kinds_are_fixed() {
        let mut t = SymbolTable::new();
        t.declare("kappa", SymbolKind::Multiplicative).unwrap();
        assert!(t.declare("kappa", SymbolKind::Multiplicative).is_ok());
        assert!(t.declare("kappa", SymbolKind::Additive).is_err());
    }
}

//! Free Lie algebras in the Lyndon basis, inside the free associative algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::classes::{self, Class};
use crate::ring::{factorial, fmt_q, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("element is not primitive: it is not the expansion of any Lie element")]
    NotPrimitive,
    #[error("element is not homogeneous of word length {0}")]
    NotHomogeneous(usize),
    #[error("[delta_1, delta_2] is nonzero")]
    BracketNonzero,
    #[error("class {0:?} has non-positive mass")]
    NonPositiveMass(Class),
}

/// Letters of the free algebras: anything totally ordered.
pub trait Letter: Ord + Clone + Debug + Hash {}
impl<T: Ord + Clone + Debug + Hash> Letter for T {}

/// Element of the free associative algebra (the enveloping algebra of the
/// free Lie algebra), a finite sum of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uea<L: Letter> {
    terms: BTreeMap<Vec<L>, Q>,
}

impl<L: Letter> Default for Uea<L> {
    fn default() -> Self {
        Uea { terms: BTreeMap::new() }
    }
}

impl<L: Letter> Uea<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new(), Q::one())
    }

    pub fn word(w: Vec<L>, c: Q) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn letter(l: L) -> Self {
        Self::word(vec![l], Q::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Vec<L>, Q)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in it {
            out.add_term(w, c);
        }
        out
    }

    pub fn add_term(&mut self, w: Vec<L>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<L>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[L]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Uea { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                out.add_term(w, x * y);
            }
        }
        out
    }

    /// Product keeping only words of length at most `max_len`.
    pub fn mul_truncated(&self, other: &Self, max_len: usize) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.len() + b.len() <= max_len {
                    let mut w = a.clone();
                    w.extend(b.iter().cloned());
                    out.add_term(w, x * y);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn truncate(&self, max_len: usize) -> Self {
        Uea { terms: self.terms.iter().filter(|(w, _)| w.len() <= max_len).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// The component of word length `n`.
    pub fn length_component(&self, n: usize) -> Self {
        Uea { terms: self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    pub fn lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(|w| w.len()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `exp(self)` truncated at word length `max_len`; `self` must have no
    /// empty-word term.
    pub fn exp_truncated(&self, max_len: usize) -> Self {
        let mut out = Self::one();
        let mut power = Self::one();
        for k in 1..=max_len {
            power = power.mul_truncated(self, max_len);
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&(Q::one() / factorial(k as u64))));
        }
        out
    }

    /// Relabel letters through `f`.
    pub fn map_letters<M: Letter>(&self, f: impl Fn(&L) -> M) -> Uea<M> {
        Uea::from_terms(self.terms.iter().map(|(w, c)| (w.iter().map(&f).collect(), c.clone())))
    }
}

impl<L: Letter + Display> Display for Uea<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter().map(|(w, c)| (w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(""), c)))
    }
}

fn write_sum<'a>(f: &mut fmt::Formatter<'_>, it: impl Iterator<Item = (String, &'a Q)>) -> fmt::Result {
    let mut first = true;
    for (body, c) in it {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        if c.is_one() {
            write!(f, "{}", body)?;
        } else {
            write!(f, "({})*{}", fmt_q(c), body)?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Whether `w` is a Lyndon word: nonempty and strictly smaller than each of
/// its proper rotations.
pub fn is_lyndon<L: Letter>(w: &[L]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| {
        let rot: Vec<&L> = w[i..].iter().chain(w[..i].iter()).collect();
        let orig: Vec<&L> = w.iter().collect();
        orig < rot
    })
}

/// All Lyndon words over `alphabet` of length at most `max_len`, in
/// lexicographic order (Duval's generation algorithm).
pub fn lyndon_words<L: Letter>(alphabet: &[L], max_len: usize) -> Vec<Vec<L>> {
    let mut letters = alphabet.to_vec();
    letters.sort();
    letters.dedup();
    let k = letters.len();
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(w.iter().map(|&i| letters[i].clone()).collect());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Standard factorization `w = u v` of a Lyndon word of length at least 2,
/// with `v` the longest proper Lyndon suffix.
pub fn standard_factorization<L: Letter>(w: &[L]) -> (Vec<L>, Vec<L>) {
    debug_assert!(w.len() >= 2);
    for i in 1..w.len() {
        if is_lyndon(&w[i..]) {
            return (w[..i].to_vec(), w[i..].to_vec());
        }
    }
    unreachable!("a word of length >= 2 has a Lyndon suffix")
}

/// Bracketed form of a Lyndon word under standard factorization.
pub fn bracketing<L: Letter + Display>(w: &[L]) -> String {
    if w.len() == 1 {
        return w[0].to_string();
    }
    let (u, v) = standard_factorization(w);
    format!("[{},{}]", bracketing(&u), bracketing(&v))
}

/// Expansion of the standard bracketing of a Lyndon word.
pub fn expand_lyndon<L: Letter>(w: &[L], cache: &mut HashMap<Vec<L>, Uea<L>>) -> Uea<L>
{
    if let Some(v) = cache.get(w) {
        return v.clone();
    }
    let out = if w.len() == 1 {
        Uea::letter(w[0].clone())
    } else {
        let (u, v) = standard_factorization(w);
        let a = expand_lyndon(&u, cache);
        let b = expand_lyndon(&v, cache);
        a.commutator(&b)
    };
    cache.insert(w.to_vec(), out.clone());
    out
}

/// Expansion of the left-nested bracket `[[..[w1, w2], ..], wn]`.
pub fn left_nested<L: Letter>(w: &[L]) -> Uea<L> {
    let mut acc = Uea::letter(w[0].clone());
    for l in &w[1..] {
        acc = acc.commutator(&Uea::letter(l.clone()));
    }
    acc
}

/// Element of the free Lie algebra in Lyndon coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement<L: Letter> {
    terms: BTreeMap<Vec<L>, Q>,
}

impl<L: Letter> Default for LieElement<L> {
    fn default() -> Self {
        LieElement { terms: BTreeMap::new() }
    }
}

impl<L: Letter> LieElement<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn letter(l: L) -> Self {
        Self::lyndon(vec![l], Q::one())
    }

    /// `c` times the basis element of the Lyndon word `w`.
    pub fn lyndon(w: Vec<L>, c: Q) -> Self {
        assert!(is_lyndon(&w), "not a Lyndon word: {:?}", w);
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    fn add_term(&mut self, w: Vec<L>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lyndon coordinates.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<L>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[L]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LieElement { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn expand_to_uea(&self) -> Uea<L> {
        let mut cache = HashMap::new();
        self.expand_with(&mut cache)
    }

    fn expand_with(&self, cache: &mut HashMap<Vec<L>, Uea<L>>) -> Uea<L> {
        let mut out = Uea::zero();
        for (w, c) in &self.terms {
            out = out.add(&expand_lyndon(w, cache).scale(c));
        }
        out
    }

    /// Recover Lyndon coordinates of a UEA element by triangular reduction:
    /// the lexicographically smallest word of the expansion of a Lyndon
    /// basis element is the word itself.
    pub fn from_uea(p: &Uea<L>) -> Result<Self, LieError> {
        let mut cache = HashMap::new();
        let mut rest = p.clone();
        let mut out = Self::zero();
        while let Some((w, c)) = rest.terms.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            if !is_lyndon(&w) {
                return Err(LieError::NotPrimitive);
            }
            let e = expand_lyndon(&w, &mut cache);
            rest = rest.sub(&e.scale(&c));
            out.add_term(w, c);
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &Self) -> Self {
        let a = self.expand_to_uea();
        let b = other.expand_to_uea();
        Self::from_uea(&a.commutator(&b)).expect("commutator of Lie elements is primitive")
    }

    /// Left-nested bracket of letters as a Lie element.
    pub fn left_nested(w: &[L]) -> Self {
        Self::from_uea(&left_nested(w)).expect("left-nested brackets are primitive")
    }

    pub fn map_letters<M: Letter>(&self, f: impl Fn(&L) -> M) -> Result<LieElement<M>, LieError> {
        LieElement::from_uea(&self.expand_to_uea().map_letters(f))
    }

    /// Homogeneous component of word length `n`.
    pub fn length_component(&self, n: usize) -> Self {
        LieElement { terms: self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }
}

impl<L: Letter + Display> Display for LieElement<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter().map(|(w, c)| (bracketing(w), c)))
    }
}

/// Dynkin projection of a UEA element homogeneous of word length `n`:
/// `(1/n) sum coeff(w) [[..[w1, w2], ..], wn]`, checked by round trip.
pub fn dynkin_project<L: Letter>(p: &Uea<L>, n: usize) -> Result<LieElement<L>, LieError> {
    if p.terms().any(|(w, _)| w.len() != n) || n == 0 && !p.is_zero() {
        return Err(LieError::NotHomogeneous(n));
    }
    if p.is_zero() {
        return Ok(LieElement::zero());
    }
    let mut proj = Uea::zero();
    for (w, c) in p.terms() {
        proj = proj.add(&left_nested(w).scale(c));
    }
    let proj = proj.scale(&(Q::one() / q(n as i64)));
    let lie = LieElement::from_uea(&proj).map_err(|_| LieError::NotPrimitive)?;
    if lie.expand_to_uea() != *p {
        return Err(LieError::NotPrimitive);
    }
    Ok(lie)
}

/// Dynkin projection applied to each word-length component.
pub fn dynkin_project_graded<L: Letter>(p: &Uea<L>) -> Result<LieElement<L>, LieError> {
    let mut out = LieElement::zero();
    for n in p.lengths() {
        out = out.add(&dynkin_project(&p.length_component(n), n)?);
    }
    Ok(out)
}

/// `ad_X^k (Y) / k!` summed over `k`, truncated at word length `order`.
pub fn exp_ad<L: Letter>(x: &LieElement<L>, y: &LieElement<L>, order: usize) -> Uea<L> {
    let xu = x.expand_to_uea();
    let mut term = y.expand_to_uea().truncate(order);
    let mut out = term.clone();
    for k in 1..=order {
        term = xu.commutator(&term).truncate(order).scale(&(Q::one() / q(k as i64)));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    out
}

/// Check `e^{ad X} Y = e^X Y e^{-X}` in the UEA truncated at word length `order`.
pub fn exp_ad_check<L: Letter>(x: &LieElement<L>, y: &LieElement<L>, order: usize) -> bool {
    let lhs = exp_ad(x, y, order);
    let xu = x.expand_to_uea();
    let ex = xu.exp_truncated(order);
    let emx = xu.scale(&-Q::one()).exp_truncated(order);
    let rhs = ex.mul_truncated(&y.expand_to_uea(), order).mul_truncated(&emx, order);
    lhs == rhs
}

/// `[z_{a_k}, [ ... [z_{a_1}, d] ... ]]`.
fn nested_on<L: Letter>(parts: &[&LieElement<L>], d: &LieElement<L>) -> LieElement<L> {
    let mut acc = d.clone();
    for z in parts {
        acc = z.bracket(&acc);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// The total term `C_{a_1..a_n}(z, d1, d2)`:
/// `sum_m [ (1/m!) ad_{z_{a_m}}..ad_{z_{a_1}} d1, (1/(n-m)!) ad_{z_{a_n}}..ad_{z_{a_{m+1}}} d2 ]`.
pub fn total_term<L: Letter>(
    parts: &[&LieElement<L>],
    d1: &LieElement<L>,
    d2: &LieElement<L>,
) -> LieElement<L> {
    let n = parts.len();
    let mut out = LieElement::zero();
    for m in 0..=n {
        let a = nested_on(&parts[..m], d1).scale(&(Q::one() / factorial(m as u64)));
        let b = nested_on(&parts[m..], d2).scale(&(Q::one() / factorial((n - m) as u64)));
        out = out.add(&a.bracket(&b));
    }
    out
}

/// Sum of `C_{a_1..a_n}` over ordered decompositions `target = a_1 + .. + a_n`
/// with `n > 1` and every `a_i` in the support of `table`.
pub fn total_term_sum<L: Letter>(
    table: &BTreeMap<Class, LieElement<L>>,
    d1: &LieElement<L>,
    d2: &LieElement<L>,
    target: &[i64],
) -> Result<LieElement<L>, LieError> {
    if !d1.bracket(d2).is_zero() {
        return Err(LieError::BracketNonzero);
    }
    for c in table.keys() {
        if classes::mass(c) <= 0 {
            return Err(LieError::NonPositiveMass(c.clone()));
        }
    }
    let mut out = LieElement::zero();
    let mut cur: Vec<&Class> = Vec::new();
    fn rec<'a, L: Letter>(
        rest: &[i64],
        table: &'a BTreeMap<Class, LieElement<L>>,
        cur: &mut Vec<&'a Class>,
        d1: &LieElement<L>,
        d2: &LieElement<L>,
        out: &mut LieElement<L>,
    ) {
        if classes::is_zero(rest) {
            if cur.len() > 1 {
                let parts: Vec<&LieElement<L>> = cur.iter().map(|c| &table[*c]).collect();
                *out = out.add(&total_term(&parts, d1, d2));
            }
            return;
        }
        if classes::mass(rest) <= 0 {
            return;
        }
        for c in table.keys() {
            cur.push(c);
            rec(&classes::sub(rest, c), table, cur, d1, d2, out);
            cur.pop();
        }
    }
    rec(target, table, &mut cur, d1, d2, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_small() {
        assert_eq!(lyndon_words(&['a', 'b'], 2), vec![vec!['a'], vec!['a', 'b'], vec!['b']]);
        let l3: Vec<Vec<char>> = lyndon_words(&['a', 'b'], 3).into_iter().filter(|w| w.len() == 3).collect();
        assert_eq!(l3, vec![vec!['a', 'a', 'b'], vec!['a', 'b', 'b']]);
        assert_eq!(lyndon_words(&['x'], 5), vec![vec!['x']]);
    }

    #[test]
    fn bracket_expansions() {
        let e = |c| LieElement::letter(c);
        let x = e(1).bracket(&e(2)).bracket(&e(3));
        let u = x.expand_to_uea();
        let want = Uea::from_terms([
            (vec![1, 2, 3], q(1)),
            (vec![2, 1, 3], q(-1)),
            (vec![3, 1, 2], q(-1)),
            (vec![3, 2, 1], q(1)),
        ]);
        assert_eq!(u, want);
        assert_eq!(dynkin_project(&u, 3).unwrap(), x);
        let bad = Uea::word(vec![1, 2], q(1));
        assert_eq!(dynkin_project(&bad, 2), Err(LieError::NotPrimitive));
    }

    #[test]
    fn exp_ad_small() {
        let x = LieElement::letter(1);
        let y = LieElement::letter(2);
        assert!(exp_ad_check(&x, &y, 3));
        assert!(exp_ad_check(&LieElement::zero(), &y, 3));
    }
}

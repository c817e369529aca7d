//! Descendent transformations in the Calabi–Yau limit.
//!
//! Subsets of `{1..N}` are bitmasks (bit `i - 1` for index `i`). The basis
//! element `σ{K_S1, .., K_Sn}` is a [`SetPartition`]; key values never enter
//! the algebra, only the names used when printing symbols.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::combinat::set_partitions_of_mask;
use crate::kclasses::{ch_symbol, theta_coefficients, KError, HBAR};
use crate::ring::{factorial, q, Laurent, Monomial, RingError, Q};

/// Grading variable counting a-symbols; every `x` symbol carries one power.
const T: &str = "@t";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescError {
    #[error("blocks do not form a set partition of the ground set")]
    BadPartition,
    #[error("at most 16 keys are supported")]
    TooManyKeys,
    #[error("no degree declared for symbol {0}")]
    UndeclaredDegree(String),
    #[error("psi^0 is undefined on the negative-degree symbol {0}")]
    NegativeDegree(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    K(#[from] KError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    ground: u32,
    blocks: Vec<u32>,
}

impl SetPartition {
    pub fn new(ground: u32, mut blocks: Vec<u32>) -> Result<Self, DescError> {
        let mut seen = 0u32;
        for b in &blocks {
            if *b == 0 || seen & b != 0 {
                return Err(DescError::BadPartition);
            }
            seen |= b;
        }
        if seen != ground {
            return Err(DescError::BadPartition);
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        Ok(SetPartition { ground, blocks })
    }

    pub fn singletons(ground: u32) -> Self {
        let blocks = (0..32).filter(|i| ground >> i & 1 == 1).map(|i| 1u32 << i).collect();
        SetPartition { ground, blocks }
    }

    /// The one-block partition; empty when `ground` is empty.
    pub fn whole(ground: u32) -> Self {
        SetPartition { ground, blocks: if ground == 0 { vec![] } else { vec![ground] } }
    }

    pub fn all(ground: u32) -> Vec<SetPartition> {
        set_partitions_of_mask(ground).into_iter().map(|b| SetPartition::new(ground, b).expect("valid")).collect()
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &SetPartition) -> bool {
        self.ground == coarser.ground && self.blocks.iter().all(|b| coarser.blocks.iter().any(|c| b & c == *b))
    }

    /// Merge the blocks selected by `chosen` into one.
    pub fn merge(&self, chosen: &[u32]) -> SetPartition {
        let merged = chosen.iter().fold(0, |m, b| m | b);
        let mut blocks: Vec<u32> = self.blocks.iter().copied().filter(|b| !chosen.contains(b)).collect();
        if merged != 0 {
            blocks.push(merged);
        }
        SetPartition::new(self.ground, blocks).expect("merge keeps a partition")
    }

    /// Key sums `K_S` of the blocks.
    pub fn key_sums(&self, keys: &[i64]) -> Vec<i64> {
        self.blocks.iter().map(|b| members(*b).map(|i| keys[i]).sum()).collect()
    }
}

fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Display names for the keys: `k` when there is one key, `k1..kN` otherwise.
pub fn default_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["k".into()]
    } else {
        (1..=n).map(|i| format!("k{i}")).collect()
    }
}

/// Symbol naming for one session of `N` keys.
#[derive(Clone, Debug)]
pub struct Names(Vec<String>);

impl Names {
    pub fn new(names: Vec<String>) -> Result<Self, DescError> {
        if names.len() > 16 {
            return Err(DescError::TooManyKeys);
        }
        Ok(Names(names))
    }

    pub fn default_for(n: usize) -> Result<Self, DescError> {
        Self::new(default_names(n))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn ground(&self) -> u32 {
        ((1u64 << self.0.len()) - 1) as u32
    }

    fn block(&self, b: u32) -> String {
        members(b).map(|i| self.0[i].as_str()).collect::<Vec<_>>().join("+")
    }

    fn blocks(&self, bs: &[u32]) -> String {
        bs.iter().map(|b| self.block(*b)).collect::<Vec<_>>().join(",")
    }

    /// `σ{..}` for a partition, `1` when empty.
    pub fn sigma(&self, p: &SetPartition) -> String {
        if p.is_empty() {
            "1".into()
        } else {
            format!("σ{{{}}}", self.blocks(p.blocks()))
        }
    }

    /// The DT0 vertex of the singleton descendent on `s`.
    pub fn dt0(&self, s: u32) -> String {
        format!("DT0({})", self.sigma(&SetPartition::singletons(s)))
    }

    pub fn dt(&self, s: u32) -> String {
        format!("DT({})", self.sigma(&SetPartition::singletons(s)))
    }

    pub fn pt(&self, p: &SetPartition) -> String {
        format!("PT({})", self.sigma(p))
    }

    pub fn y(&self, s: u32) -> String {
        format!("Y{{{}}}", self.blocks(&SetPartition::singletons(s).blocks))
    }

    /// The a-symbol attached to a set of blocks.
    pub fn a(&self, label: &[u32]) -> String {
        format!("a{{{}}}", self.blocks(label))
    }

    /// The image of `a{label}` under the evaluation homomorphism.
    pub fn x(&self, label: &[u32]) -> String {
        format!("x{{{}}}", self.blocks(label))
    }
}

/// `Δσ = sum over subsets J of the blocks of (-1)^|J| σ(J merged) ⊗ a{J}`.
/// Terms with equal target and label are collected.
pub fn delta_apply(sigma: &SetPartition) -> BTreeMap<(SetPartition, Vec<u32>), i64> {
    let n = sigma.len();
    let mut out: BTreeMap<(SetPartition, Vec<u32>), i64> = BTreeMap::new();
    for sel in 0u32..(1 << n) {
        let chosen: Vec<u32> = (0..n).filter(|i| sel >> i & 1 == 1).map(|i| sigma.blocks[i]).collect();
        let sign = if chosen.len() % 2 == 0 { 1 } else { -1 };
        *out.entry((sigma.merge(&chosen), chosen)).or_insert(0) += sign;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// A square matrix over the graded x-symbol ring, indexed by all set
/// partitions of a ground set. Entry `[row][col]` is `<row|M|col>`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaMatrix {
    pub states: Vec<SetPartition>,
    index: HashMap<SetPartition, usize>,
    entries: Vec<Vec<Laurent>>,
}

impl SigmaMatrix {
    fn zero(ground: u32) -> Self {
        let states = SetPartition::all(ground);
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let d = states.len();
        SigmaMatrix { states, index, entries: vec![vec![Laurent::zero(); d]; d] }
    }

    fn identity(ground: u32) -> Self {
        let mut m = Self::zero(ground);
        for i in 0..m.states.len() {
            m.entries[i][i] = Laurent::one();
        }
        m
    }

    /// The graded entry: each x-symbol is accompanied by one power of the
    /// internal grading variable.
    pub fn graded_entry(&self, row: &SetPartition, col: &SetPartition) -> Laurent {
        match (self.index.get(row), self.index.get(col)) {
            (Some(&r), Some(&c)) => self.entries[r][c].clone(),
            _ => Laurent::zero(),
        }
    }

    /// The entry as a polynomial in x-symbols.
    pub fn entry(&self, row: &SetPartition, col: &SetPartition) -> Laurent {
        self.graded_entry(row, col).eval_one(T)
    }

    fn mul_truncated(&self, other: &SigmaMatrix, order: i64) -> SigmaMatrix {
        let d = self.states.len();
        let mut out = SigmaMatrix { states: self.states.clone(), index: self.index.clone(), entries: vec![vec![Laurent::zero(); d]; d] };
        for i in 0..d {
            for k in 0..d {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..d {
                    if other.entries[k][j].is_zero() {
                        continue;
                    }
                    let p = &self.entries[i][k] * &other.entries[k][j];
                    out.entries[i][j] = &out.entries[i][j] + &p;
                }
            }
        }
        for row in &mut out.entries {
            for e in row.iter_mut() {
                *e = truncate_grade(e, order);
            }
        }
        out
    }

    /// Whether `<row|M|col> != 0` only when `row` is coarser than `col`.
    pub fn is_upper_triangular(&self) -> bool {
        for (r, row) in self.states.iter().enumerate() {
            for (c, col) in self.states.iter().enumerate() {
                if !self.entries[r][c].is_zero() && !col.refines(row) {
                    return false;
                }
            }
        }
        true
    }
}

fn truncate_grade(f: &Laurent, order: i64) -> Laurent {
    f.filter_terms(|m| m.exp2(T) <= 2 * order)
}

fn graded_x(names: &Names, label: &[u32]) -> Laurent {
    Laurent::mono(Monomial::from_pairs([(names.x(label).as_str(), 2), (T, 2)]))
}

/// The matrix of `Δ` on the σ-basis of `ground`, with `a{J}` replaced by
/// its graded x-symbol.
pub fn delta_matrix(ground: u32, names: &Names) -> SigmaMatrix {
    let mut m = SigmaMatrix::zero(ground);
    for (c, col) in m.states.clone().iter().enumerate() {
        for ((row, label), sign) in delta_apply(col) {
            let r = m.index[&row];
            let add = graded_x(names, &label).scale(&q(sign));
            m.entries[r][c] = &m.entries[r][c] + &add;
        }
    }
    m
}

/// `e^{-Δ} = sum (-Δ)^m / m!`, truncated at total x-degree `order`.
pub fn exp_minus_delta(ground: u32, names: &Names, order: usize) -> SigmaMatrix {
    let order = order as i64;
    let mut minus = delta_matrix(ground, names);
    for row in &mut minus.entries {
        for e in row.iter_mut() {
            *e = -&*e;
        }
    }
    let mut out = SigmaMatrix::identity(ground);
    let mut power = SigmaMatrix::identity(ground);
    for m in 1..=order {
        power = power.mul_truncated(&minus, order);
        let inv = Q::one() / q(m);
        for (i, row) in power.entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                if !e.is_zero() {
                    *e = e.scale(&inv);
                    out.entries[i][j] = &out.entries[i][j] + &*e;
                }
            }
        }
    }
    out
}

/// `Y{S}` as a graded series: the corner entry of `e^{-Δ}` on the sub-problem `s`.
pub fn y_series(s: u32, names: &Names, order: usize) -> Laurent {
    let m = exp_minus_delta(s, names, order);
    m.graded_entry(&SetPartition::whole(s), &SetPartition::singletons(s))
}

fn exp_series(f: &Laurent, order: i64) -> Laurent {
    let mut out = Laurent::one();
    let mut power = Laurent::one();
    for m in 1..=order {
        power = truncate_grade(&(&power * f), order).scale(&(Q::one() / q(m)));
        out = &out + &power;
    }
    out
}

/// Check `<σ_π|e^{-Δ}|σ_singletons> = Y{} prod (Y{S_i} / Y{})` for every
/// partition `π` of the ground set, as truncated series. Returns the
/// partitions where it fails.
pub fn factorization_failures(names: &Names, order: usize) -> Vec<SetPartition> {
    let ground = names.ground();
    let ord = order as i64;
    let full = exp_minus_delta(ground, names, order);
    let bottom = SetPartition::singletons(ground);
    let mut ys: HashMap<u32, Laurent> = HashMap::new();
    let y_empty = y_series(0, names, order);
    // Y{} = exp(-x{}) has inverse exp(x{})
    let y_empty_inv = exp_series(&graded_x(names, &[]), ord);
    let mut failures = Vec::new();
    for p in &full.states {
        let mut rhs = y_empty.clone();
        for b in p.blocks() {
            let yb = ys.entry(*b).or_insert_with(|| y_series(*b, names, order)).clone();
            rhs = truncate_grade(&(&(&rhs * &yb) * &y_empty_inv), ord);
        }
        if full.graded_entry(p, &bottom) != rhs {
            failures.push(p.clone());
        }
    }
    failures
}

fn dt0_value(names: &Names, s: u32) -> Laurent {
    Laurent::var(&names.dt0(s))
}

fn d_pow(names: &Names, e: i64) -> Laurent {
    Laurent::var_pow(&names.dt0(0), e)
}

/// `Y{S}` from the recursion `Y{S} = DT0(σ_S) - sum_{n > 1} prod Y{S_i} / Y{}^(n-1)`,
/// with `Y{} = DT0(1)`.
pub fn y_recursion(s: u32, names: &Names) -> Laurent {
    let mut memo = HashMap::new();
    y_rec(s, names, &mut memo)
}

fn y_rec(s: u32, names: &Names, memo: &mut HashMap<u32, Laurent>) -> Laurent {
    if let Some(v) = memo.get(&s) {
        return v.clone();
    }
    let mut out = dt0_value(names, s);
    if s != 0 {
        for p in SetPartition::all(s) {
            let n = p.len();
            if n < 2 {
                continue;
            }
            let mut t = d_pow(names, -(n as i64 - 1));
            for b in p.blocks() {
                t = &t * &y_rec(*b, names, memo);
            }
            out = &out - &t;
        }
    }
    memo.insert(s, out.clone());
    out
}

/// `Y{S} = sum over partitions of (-1)^(n-1) (n-1)! prod DT0(σ_(S_i)) / Y{}^(n-1)`.
pub fn y_explicit(s: u32, names: &Names) -> Laurent {
    if s == 0 {
        return d_pow(names, 1);
    }
    let mut out = Laurent::zero();
    for p in SetPartition::all(s) {
        let n = p.len() as i64;
        let c = factorial((n - 1) as u64) * if n % 2 == 1 { Q::one() } else { -Q::one() };
        let mut t = d_pow(names, -(n - 1)).scale(&c);
        for b in p.blocks() {
            t = &t * &dt0_value(names, *b);
        }
        out = &out + &t;
    }
    out
}

/// Both sides of the DT/PT descendent correspondence for `σ{k_1..k_N}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DtPtIdentity {
    /// `DT(σ{..})`.
    pub lhs: String,
    /// `sum PT(σ{K_S1..}) prod Y{S_i} / Y{}^(n-1)` in formal `Y` symbols.
    pub y_form: Laurent,
    /// The double-partition form in PT and DT0 symbols.
    pub theorem_form: Laurent,
}

impl DtPtIdentity {
    /// The Y-form with the explicit solution substituted for every `Y`.
    pub fn y_form_substituted(&self, names: &Names) -> Result<Laurent, DescError> {
        let ground = names.ground();
        let mut out = self.y_form.substitute_monomial(&names.y(0), &Monomial::var(&names.dt0(0), 1))?;
        for s in 1..=ground {
            if s & ground == s {
                out = out.substitute(&names.y(s), &y_explicit(s, names))?;
            }
        }
        Ok(out)
    }

    pub fn agrees(&self, names: &Names) -> Result<bool, DescError> {
        Ok(self.y_form_substituted(names)? == self.theorem_form)
    }
}

impl fmt::Display for DtPtIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, format_vertex(&self.theorem_form))
    }
}

/// Print a vertex expression with the PT factor leading each term and
/// factors joined by `·`.
pub fn format_vertex(f: &Laurent) -> String {
    let mut out = String::new();
    for (i, (m, c)) in f.terms().enumerate() {
        let mut factors: Vec<String> = m
            .pairs()
            .iter()
            .map(|(s, e2)| if *e2 == 2 { s.to_string() } else if e2 % 2 == 0 { format!("{}^{}", s, e2 / 2) } else { format!("{}^({}/2)", s, e2) })
            .collect();
        factors.sort_by_key(|s| !s.starts_with("PT("));
        let neg = c < &Q::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() || factors.is_empty() {
            factors.insert(0, crate::ring::fmt_q(&mag));
        }
        out.push_str(&factors.join("·"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// The correspondence for the singleton descendent on all `N` keys.
pub fn dt_to_pt(names: &Names) -> DtPtIdentity {
    let ground = names.ground();
    let mut y_form = Laurent::zero();
    let mut theorem = Laurent::zero();
    let d = names.dt0(0);
    for p in SetPartition::all(ground) {
        let n = p.len() as i64;
        let pt = Laurent::var(&names.pt(&p));
        let mut t = &pt * &Laurent::var_pow(&names.y(0), 1 - n);
        for b in p.blocks() {
            t = &t * &Laurent::var(&names.y(*b));
        }
        y_form = &y_form + &t;

        // refine every block independently
        let mut acc = vec![(&pt * &Laurent::var(&d)).scale(&if n % 2 == 0 { Q::one() } else { -Q::one() })];
        for b in p.blocks() {
            let mut next = Vec::new();
            for sub in SetPartition::all(*b) {
                let m = sub.len() as i64;
                let mut f = Laurent::var_pow(&d, -m).scale(&(factorial((m - 1) as u64) * if m % 2 == 0 { Q::one() } else { -Q::one() }));
                for c in sub.blocks() {
                    f = &f * &dt0_value(names, *c);
                }
                for a in &acc {
                    next.push(a * &f);
                }
            }
            acc = next;
        }
        for a in acc {
            theorem = &theorem + &a;
        }
    }
    DtPtIdentity { lhs: names.dt(ground), y_form, theorem_form: theorem }
}

/// The coefficients `c_1..c_n` determined by the recursion
/// `c_n = - sum over partitions of {1..n} into m > 1 blocks of prod c_|T_j|`.
pub fn recursion_coefficients(n: usize) -> Vec<Q> {
    let mut c: Vec<Q> = vec![Q::zero(), Q::one()];
    for k in 2..=n {
        let mut s = Q::zero();
        for p in crate::combinat::set_partitions(k) {
            if p.len() > 1 {
                s += p.iter().fold(Q::one(), |acc, b| acc * &c[b.len()]);
            }
        }
        c.push(-s);
    }
    c.split_off(1)
}

/// The cohomological Adams operation: a monomial of total degree `d`
/// (symbol degrees from `degree`) is multiplied by `k^d`.
pub fn adams(k: i64, f: &Laurent, degree: &dyn Fn(&str) -> Option<i64>) -> Result<Laurent, DescError> {
    let mut out = Laurent::zero();
    for (m, c) in f.terms() {
        let mut d2 = 0i64;
        for (s, e) in m.pairs() {
            let ds = degree(s).ok_or_else(|| DescError::UndeclaredDegree(s.to_string()))?;
            d2 += ds * e;
        }
        if d2 % 2 != 0 {
            return Err(RingError::BadExponent.into());
        }
        let d = d2 / 2;
        let factor = if k == 0 {
            match d.cmp(&0) {
                std::cmp::Ordering::Less => return Err(DescError::NegativeDegree(m.to_string())),
                std::cmp::Ordering::Equal => Q::one(),
                std::cmp::Ordering::Greater => Q::zero(),
            }
        } else if d >= 0 {
            q(k).pow(d as i32)
        } else {
            (Q::one() / q(k)).pow((-d) as i32)
        };
        if !factor.is_zero() {
            out = &out + &Laurent::term(m.clone(), c * factor);
        }
    }
    Ok(out)
}

/// Degrees of the symbols used by [`build_xi`] and [`substitute_ch`]:
/// `ch_a`, `td_a` and `Tp_a` have degree `a`, `T1_c` has degree `c - 3`,
/// and `hbar`, `v`, `s1`, `s2`, `s3` have degree 1.
pub fn standard_degree(s: &str) -> Option<i64> {
    let tail = |p: &str| s.strip_prefix(p).and_then(|r| r.parse::<i64>().ok());
    match s {
        HBAR | "v" | "s1" | "s2" | "s3" => Some(1),
        _ => tail("ch").or_else(|| tail("td_")).or_else(|| tail("Tp_")).or_else(|| tail("T1_").map(|c| c - 3)),
    }
}

/// `Ξ^(k) = sum_{n <= order} k^n θ_(n+1) / (hbar n!)` for a class of rank
/// `rank` with symbolic Chern character components.
pub fn build_xi(k: i64, rank: i64, order: usize) -> Result<Laurent, DescError> {
    let thetas = theta_coefficients(rank, order + 1)?;
    let hbar = Laurent::var(HBAR);
    let mut out = Laurent::zero();
    for n in 0..=order {
        let t = thetas[n + 1].clone().untruncated().div_exact(&hbar)?;
        let c = if n == 0 { Q::one() } else { q(k).pow(n as i32) } / factorial(n as u64);
        out = &out + &t.scale(&c);
    }
    Ok(out)
}

/// Degree-`n` part of `-td(C^3) (e^{-v} - τ̃^(-1)(p)) τ̃(1)`, with
/// `td_a`, `Tp_b = τ̃_b(p)` and `T1_c = τ̃_c(1)` symbolic and `td_0 = 1`.
pub fn ch_from_descendents(n: i64) -> Laurent {
    let td = |a: i64| if a == 0 { Laurent::one() } else { Laurent::var(&format!("td_{a}")) };
    let sign = |d: i64| if d % 2 == 0 { Q::one() } else { -Q::one() };
    let mut out = Laurent::zero();
    for c in 0..=n + 3 {
        for a in 0..=(n + 3 - c) {
            let d = n + 3 - c - a;
            let e = &Laurent::var_pow("v", d).scale(&(sign(d) / factorial(d as u64)))
                - &Laurent::var(&format!("Tp_{d}")).scale(&sign(d));
            out = &out - &(&(&td(a) * &e) * &Laurent::var(&format!("T1_{c}")));
        }
    }
    out
}

/// Replace `ch_n` by [`ch_from_descendents`] for `n <= max_n` and `hbar` by
/// `s1 + s2 + s3`.
pub fn substitute_ch(f: &Laurent, max_n: u32) -> Result<Laurent, DescError> {
    let mut out = f.clone().untruncated();
    for n in 1..=max_n {
        out = out.substitute(&ch_symbol(n), &ch_from_descendents(n as i64))?;
    }
    let s = &(&Laurent::var("s1") + &Laurent::var("s2")) + &Laurent::var("s3");
    Ok(out.substitute(HBAR, &s)?)
}

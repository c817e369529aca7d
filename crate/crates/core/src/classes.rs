//! Class vectors and the effective-class monoid.

use std::collections::BTreeSet;

use thiserror::Error;

/// A class in the ambient lattice Z^d.
pub type Class = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("generator {0:?} has non-positive total mass")]
    NonPositiveMass(Class),
    #[error("generators have inconsistent dimensions")]
    DimensionMismatch,
    #[error("class {0:?} admits decompositions with more than {1} parts")]
    DecompositionCap(Class, usize),
    #[error("class {0:?} is not effective")]
    NotEffective(Class),
}

pub fn add(a: &[i64], b: &[i64]) -> Class {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Class {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn sum(parts: &[Class]) -> Class {
    let mut it = parts.iter();
    let first = it.next().expect("sum of an empty tuple").clone();
    it.fold(first, |acc, p| add(&acc, p))
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|x| *x == 0)
}

pub fn mass(a: &[i64]) -> i64 {
    a.iter().sum()
}

pub fn fmt_class(a: &[i64]) -> String {
    let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Nonzero N-combinations of finitely many generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveMonoid {
    generators: Vec<Class>,
}

impl EffectiveMonoid {
    pub fn new(generators: Vec<Class>) -> Result<Self, MonoidError> {
        let dim = generators.first().map(|g| g.len()).unwrap_or(0);
        for g in &generators {
            if g.len() != dim {
                return Err(MonoidError::DimensionMismatch);
            }
            if mass(g) <= 0 {
                return Err(MonoidError::NonPositiveMass(g.clone()));
            }
        }
        Ok(EffectiveMonoid { generators })
    }

    /// The free monoid on the standard basis of Z^d.
    pub fn standard(d: usize) -> Self {
        let gens = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        EffectiveMonoid { generators: gens }
    }

    pub fn generators(&self) -> &[Class] {
        &self.generators
    }

    /// All effective classes of mass at most `bound`.
    pub fn classes_up_to_mass(&self, bound: i64) -> BTreeSet<Class> {
        let mut seen: BTreeSet<Class> = BTreeSet::new();
        let mut frontier: Vec<Class> = self.generators.iter().filter(|g| mass(g) <= bound).cloned().collect();
        while let Some(c) = frontier.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            for g in &self.generators {
                let n = add(&c, g);
                if mass(&n) <= bound && !seen.contains(&n) {
                    frontier.push(n);
                }
            }
        }
        seen
    }

    pub fn is_effective(&self, c: &[i64]) -> bool {
        self.classes_up_to_mass(mass(c)).contains(c)
    }

    /// Effective classes `beta` with `alpha - beta` effective or zero.
    pub fn classes_below(&self, alpha: &[i64]) -> BTreeSet<Class> {
        let all = self.classes_up_to_mass(mass(alpha));
        all.iter()
            .filter(|b| {
                let r = sub(alpha, b);
                is_zero(&r) || all.contains(&r)
            })
            .cloned()
            .collect()
    }

    /// Ordered decompositions of `alpha` into effective classes allowed by
    /// `allowed`, failing if any would need more than `max_parts` parts.
    pub fn decompositions(
        &self,
        alpha: &[i64],
        allowed: &dyn Fn(&Class) -> bool,
        max_parts: usize,
    ) -> Result<Vec<Vec<Class>>, MonoidError> {
        if !self.is_effective(alpha) {
            return Err(MonoidError::NotEffective(alpha.to_vec()));
        }
        let below: Vec<Class> = self.classes_below(alpha).into_iter().filter(|c| allowed(c)).collect();
        let reachable = EffectiveMonoid { generators: below.clone() }.classes_up_to_mass(mass(alpha));
        let mut out = Vec::new();
        let mut cur = Vec::new();
        decompose_rec(alpha, &below, &reachable, max_parts, &mut cur, &mut out)
            .map_err(|_| MonoidError::DecompositionCap(alpha.to_vec(), max_parts))?;
        Ok(out)
    }
}

fn decompose_rec(
    rest: &[i64],
    parts: &[Class],
    reachable: &BTreeSet<Class>,
    cap: usize,
    cur: &mut Vec<Class>,
    out: &mut Vec<Vec<Class>>,
) -> Result<(), ()> {
    if is_zero(rest) {
        out.push(cur.clone());
        return Ok(());
    }
    for p in parts {
        let r = sub(rest, p);
        if is_zero(&r) || reachable.contains(&r) {
            if cur.len() == cap {
                return Err(());
            }
            cur.push(p.clone());
            let res = decompose_rec(&r, parts, reachable, cap, cur, out);
            cur.pop();
            res?;
        }
    }
    Ok(())
}

//! Monomials, monomial ideals and monomial primes.
//!
//! Variables are indexed from zero in the API and printed from one
//! (`x1..xn`). Ideals are always kept as their minimal generating set in
//! lexicographic order on exponent vectors, so two ideals are equal exactly
//! when their generator lists are.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A monomial `x^a` stored as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(ambient: usize) -> Self {
        Monomial(vec![0; ambient])
    }

    /// `x_var^exp` in the given ambient.
    pub fn power(var: usize, exp: u32, ambient: usize) -> Self {
        let mut e = vec![0; ambient];
        e[var] = exp;
        Monomial(e)
    }

    pub fn var(var: usize, ambient: usize) -> Self {
        Self::power(var, 1, ambient)
    }

    /// Squarefree product of the given variables.
    pub fn from_vars(vars: impl IntoIterator<Item = usize>, ambient: usize) -> Self {
        let mut e = vec![0; ambient];
        for v in vars {
            e[v] = 1;
        }
        Monomial(e)
    }

    pub fn ambient(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        check_ambient(self.ambient(), other.ambient())?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    /// Exact division, `None` unless `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if self.ambient() != other.ambient() || !other.divides(self) {
            return None;
        }
        Some(Monomial(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// `self / gcd(self, other)`.
    pub fn strip(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Insert a fresh variable with exponent zero at position `var`.
    pub fn insert_var(&self, var: usize) -> Monomial {
        let mut e = self.0.clone();
        e.insert(var, 0);
        Monomial(e)
    }

    /// Delete the coordinate `var`, whatever its exponent.
    pub fn remove_var(&self, var: usize) -> Monomial {
        let mut e = self.0.clone();
        e.remove(var);
        Monomial(e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn check_ambient(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::AmbientMismatch { expected, found })
    }
}

fn fmt_vars(vars: &BTreeSet<usize>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if vars.is_empty() {
        return f.write_str("0");
    }
    let names: Vec<String> = vars.iter().map(|v| format!("x{}", v + 1)).collect();
    f.write_str(&names.join(", "))
}

/// All monomials `x^a` with `0 ≤ a ≤ bound` componentwise, in lexicographic
/// order (last coordinate fastest).
pub fn divisors(bound: &Monomial) -> impl Iterator<Item = Monomial> + '_ {
    let n = bound.ambient();
    let mut next = Some(vec![0u32; n]);
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        let mut i = n;
        while i > 0 {
            i -= 1;
            if succ[i] < bound.0[i] {
                succ[i] += 1;
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Monomial(cur))
    })
}

/// A monomial ideal, stored through its minimal generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MonomialIdeal {
    ambient: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Minimalize and sort `gens`.
    pub fn normalize(gens: impl IntoIterator<Item = Monomial>, ambient: usize) -> Result<Self> {
        let mut all: Vec<Monomial> = Vec::new();
        for g in gens {
            check_ambient(ambient, g.ambient())?;
            all.push(g);
        }
        Ok(Self::from_checked(all, ambient))
    }

    fn from_checked(mut all: Vec<Monomial>, ambient: usize) -> Self {
        // Sorting by degree first lets each candidate be tested only against
        // already accepted (smaller or equal degree) generators.
        all.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut gens: Vec<Monomial> = Vec::with_capacity(all.len());
        for m in all {
            if !gens.iter().any(|g| g.divides(&m)) {
                gens.push(m);
            }
        }
        gens.sort();
        MonomialIdeal { ambient, gens }
    }

    pub fn zero(ambient: usize) -> Self {
        MonomialIdeal {
            ambient,
            gens: Vec::new(),
        }
    }

    pub fn unit(ambient: usize) -> Self {
        MonomialIdeal {
            ambient,
            gens: vec![Monomial::one(ambient)],
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        check_ambient(self.ambient, m.ambient())?;
        Ok(self.has(m.exponents()))
    }

    /// Membership on a raw exponent vector of the right length.
    pub(crate) fn has(&self, exps: &[u32]) -> bool {
        self.gens
            .iter()
            .any(|g| g.0.iter().zip(exps).all(|(a, b)| a <= b))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &MonomialIdeal) -> bool {
        self.ambient == other.ambient && self.gens.iter().all(|g| other.has(g.exponents()))
    }

    /// `I : w`, generated by `g / gcd(g, w)`.
    pub fn colon(&self, w: &Monomial) -> Result<MonomialIdeal> {
        check_ambient(self.ambient, w.ambient())?;
        Ok(Self::from_checked(
            self.gens.iter().map(|g| g.strip(w)).collect(),
            self.ambient,
        ))
    }

    /// `(I, m_1, ..., m_k)`.
    pub fn add(&self, ms: &[Monomial]) -> Result<MonomialIdeal> {
        for m in ms {
            check_ambient(self.ambient, m.ambient())?;
        }
        let all = self.gens.iter().chain(ms).cloned().collect();
        Ok(Self::from_checked(all, self.ambient))
    }

    /// The variable set if every minimal generator is a variable.
    pub fn as_prime(&self) -> Option<MonomialPrime> {
        let mut vars = BTreeSet::new();
        for g in &self.gens {
            if g.degree() != 1 {
                return None;
            }
            vars.insert(g.0.iter().position(|&e| e == 1)?);
        }
        Some(MonomialPrime {
            ambient: self.ambient,
            vars,
        })
    }

    /// Whether multiplication by `u` is injective on `S/I`, i.e. `I : u = I`.
    pub fn is_regular(&self, u: &Monomial) -> Result<bool> {
        if self.is_unit() {
            return Err(Error::UnitIdeal);
        }
        Ok(self.colon(u)? == *self)
    }

    /// Componentwise maximum of the generator exponents.
    pub fn lcm_exponent(&self) -> Monomial {
        self.gens
            .iter()
            .fold(Monomial::one(self.ambient), |acc, g| acc.lcm(g))
    }

    /// Variables occurring in some minimal generator.
    pub fn support(&self) -> BTreeSet<usize> {
        self.gens.iter().flat_map(|g| g.support()).collect()
    }

    /// Report `S′` (inner) and the variables of `u` (outer), given that no
    /// generator involves a variable of `u`.
    pub fn split(&self, u: &Monomial) -> Result<AmbientSplit> {
        check_ambient(self.ambient, u.ambient())?;
        if let Some(g) = self.gens.iter().find(|g| !g.is_coprime(u)) {
            return Err(Error::NotSplit {
                generator: g.to_string(),
                monomial: u.to_string(),
            });
        }
        let outer = u.support();
        let inner = (0..self.ambient).filter(|v| !outer.contains(v)).collect();
        Ok(AmbientSplit { inner, outer })
    }

    /// The same generators in one more variable, inserted at `var`.
    pub fn insert_var(&self, var: usize) -> MonomialIdeal {
        MonomialIdeal {
            ambient: self.ambient + 1,
            gens: self.gens.iter().map(|g| g.insert_var(var)).collect(),
        }
    }

    /// Drop coordinate `var`; only meaningful when no generator involves it.
    pub fn remove_var(&self, var: usize) -> Result<MonomialIdeal> {
        if let Some(g) = self.gens.iter().find(|g| g.exponent(var) > 0) {
            return Err(Error::precondition(format!(
                "generator {g} involves x{}",
                var + 1
            )));
        }
        Ok(MonomialIdeal {
            ambient: self.ambient - 1,
            gens: self.gens.iter().map(|g| g.remove_var(var)).collect(),
        })
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

/// A prime generated by variables; the empty set is the zero prime.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MonomialPrime {
    ambient: usize,
    vars: BTreeSet<usize>,
}

impl MonomialPrime {
    pub fn new(vars: impl IntoIterator<Item = usize>, ambient: usize) -> Result<Self> {
        let vars: BTreeSet<usize> = vars.into_iter().collect();
        if let Some(&v) = vars.iter().find(|&&v| v >= ambient) {
            return Err(Error::Malformed(format!(
                "variable x{} outside ambient {ambient}",
                v + 1
            )));
        }
        Ok(MonomialPrime { ambient, vars })
    }

    pub fn zero(ambient: usize) -> Self {
        MonomialPrime {
            ambient,
            vars: BTreeSet::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn vars(&self) -> &BTreeSet<usize> {
        &self.vars
    }

    pub fn height(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_subset(&self, other: &MonomialPrime) -> bool {
        self.vars.is_subset(&other.vars)
    }

    pub fn is_proper_subset(&self, other: &MonomialPrime) -> bool {
        self.vars.len() < other.vars.len() && self.vars.is_subset(&other.vars)
    }

    /// Variables not in the prime.
    pub fn complement(&self) -> BTreeSet<usize> {
        (0..self.ambient)
            .filter(|v| !self.vars.contains(v))
            .collect()
    }

    pub fn with_var(&self, var: usize) -> MonomialPrime {
        let mut vars = self.vars.clone();
        vars.insert(var);
        MonomialPrime {
            ambient: self.ambient,
            vars,
        }
    }

    /// `P ∩ K[keep]`, still in the full ambient.
    pub fn restrict_to(&self, keep: &BTreeSet<usize>) -> MonomialPrime {
        MonomialPrime {
            ambient: self.ambient,
            vars: self.vars.intersection(keep).copied().collect(),
        }
    }

    pub fn to_ideal(&self) -> MonomialIdeal {
        MonomialIdeal {
            ambient: self.ambient,
            gens: {
                let mut g: Vec<Monomial> = self
                    .vars
                    .iter()
                    .map(|&v| Monomial::var(v, self.ambient))
                    .collect();
                g.sort();
                g
            },
        }
    }
}

impl fmt::Display for MonomialPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        fmt_vars(&self.vars, f)?;
        f.write_str(")")
    }
}

/// `S′ = K[inner]` and the complementary variables carrying `u`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AmbientSplit {
    pub inner: BTreeSet<usize>,
    pub outer: BTreeSet<usize>,
}
